"""Insertion operators D_m and the fixed-genus table recursions."""

from fractions import Fraction

import pytest

from tightmaps.closedforms import (
    cylinder,
    genus1_F,
    genus1_T,
    genus1_T_bipartite,
    pants,
    strict_pants,
    tgen,
)
from tightmaps.disk import TrumpetMatrix, WeightSpec, solve_RS
from tightmaps.errors import BeyondLmax, MissingDependency, UnsupportedGenus
from tightmaps.insertion import (
    TableBuilder,
    add_boundary_face,
    add_boundary_vertex,
    apply_D_check,
    build_D,
    build_T,
)
from tightmaps.polynomials import fit_quasipolynomial
from tightmaps.series import Series, divide_exact
from tightmaps.tables import CoefficientTable


def data_general(order2=14, degrees=(1, 3)):
    return solve_RS(WeightSpec(degrees, order2))


def data_bip(order2=16, degrees=(2, 4)):
    return solve_RS(WeightSpec(degrees, order2))


def test_build_D_closed_forms():
    d = data_bip()
    mat = TrumpetMatrix(6, d)
    x = d.R * Series.face_var(2) + Series.face_var(4) * d.S  # arbitrary probe
    d2 = build_D(2, mat)
    assert d2.apply(x) == x.derive_face(2)
    d4 = build_D(4, mat)
    expect = x.derive_face(4) - 2 * d.R * x.derive_face(2)
    assert d4.apply(x) == expect
    dg = data_general()
    mg = TrumpetMatrix(3, dg)
    assert build_D(1, mg).apply(dg.R) == dg.R.derive_face(1)
    with pytest.raises(BeyondLmax):
        build_D(7, mat)


def test_apply_D_check_reports():
    d = data_bip(16, (2, 4, 6))
    mat = TrumpetMatrix(6, d)
    for m in (0, 2, 4, 6):
        report = apply_D_check(m, d, mat)
        assert report and all(report.values()), report
    dg = data_general(16, (1, 2, 3, 4, 5))
    matg = TrumpetMatrix(5, dg)
    for m in range(0, 6):
        report = apply_D_check(m, dg, matg)
        assert report and all(report.values()), report


def test_build_D_rejects_inactive_weights():
    d = data_bip(12, (2, 4))
    mat = TrumpetMatrix(6, d)
    with pytest.raises(MissingDependency):
        build_D(6, mat)  # t6 inactive
    with pytest.raises(MissingDependency):
        build_D(1, mat)  # odd insertion needs t1


def test_inversion_relation_eq9():
    # M d/dt_M = sum_m m A_{M,m} D_m on solved series
    dg = data_general(14, (1, 2, 3, 4))
    mat = TrumpetMatrix(4, dg)
    for M in (1, 2, 3, 4):
        for x in (dg.R, dg.S, dg.R * dg.S):
            lhs = M * x.derive_face(M)
            rhs = Series.zero()
            for m in range(1, M + 1):
                rhs = rhs + m * mat.entry(M, m) * build_D(m, mat).apply(x)
            assert lhs == rhs


def test_add_boundary_vertex_on_pants():
    d = data_general()
    table = CoefficientTable(0, 3)
    for key in [(1, 1, 1)]:
        table.set(key, pants(*key, d))
    grown = add_boundary_vertex(table, d)
    expect = d.R_deriv(1) * d.S_deriv(1) + d.R * d.S_deriv(2)
    assert grown.get((1, 1, 1, 0)) == expect


def test_add_boundary_vertex_needs_lower_entries():
    d = data_general()
    table = CoefficientTable(0, 3)
    table.set((2, 1, 1), pants(2, 1, 1, d))
    with pytest.raises(MissingDependency):
        add_boundary_vertex(table, d)


def test_insertion_reproduces_tgen_next_n():
    d = data_bip(16)
    mat = TrumpetMatrix(6, d)
    builder = TableBuilder(d, mat)
    for lengths in [(2, 2, 2, 2), (4, 2, 2, 0), (4, 4, 2, 2), (2, 2, 0, 0),
                    (6, 2, 2, 2), (0, 0, 0, 0)]:
        assert builder.value(0, lengths) == tgen(lengths, d)


def test_insertion_matches_quasi():
    # two odd boundaries: the builder inserts only even lengths, so the
    # bipartite weight spec suffices
    from tightmaps.closedforms import tgen_quasi
    d = data_bip(16)
    mat = TrumpetMatrix(6, d)
    builder = TableBuilder(d, mat)
    for lengths in [(1, 1, 2, 2), (3, 1, 2, 0), (3, 3, 2, 2)]:
        assert builder.value(0, lengths) == tgen_quasi(lengths, d)


def test_all_odd_four_boundaries_keep_even_bracket():
    # build in the full ring, then set the odd weights to zero and compare
    # with the even-length bracket over the bipartite disk series
    full = solve_RS(WeightSpec((1, 2, 3), 14))
    mat = TrumpetMatrix(4, full)
    builder = TableBuilder(full, mat)
    bip = solve_RS(WeightSpec((2,), 14))
    R, Rp, Rpp = bip.R, bip.R_deriv(1), bip.R_deriv(2)
    for lengths in [(1, 1, 1, 1), (3, 1, 1, 1), (3, 3, 1, 1)]:
        halves = [Fraction(l, 2) for l in lengths]
        sig = int(sum(halves))
        bracket = (sum(h * h for h in halves) - 1) * Rp * Rp + Rpp * R
        expect = divide_exact(R ** sig * bracket, R * R)
        built = builder.value(0, lengths).specialize_zero([1, 3])
        assert built == expect


def test_even_odd_explicit_forms_match_generic():
    # the parity-split recursion forms equal the strict-pants assembly
    d = data_general(14, (1, 2, 3))
    mat = TrumpetMatrix(5, d)
    builder = TableBuilder(d, mat)
    Rp, Sp = d.R_deriv(1), d.S_deriv(1)
    for extra in (2, 3):
        for key in [(3, 2, 2), (4, 3, 1)]:
            generic = builder.value(0, key + (extra,))
            explicit = build_D(extra, mat).apply(builder.value(0, key))
            for i, li in enumerate(key):
                for m in range(1, li):
                    low = key[:i] + (m,) + key[i + 1:]
                    e = li + extra - m
                    factor = d.R ** (e // 2 - 1) * Rp if e % 2 == 0 \
                        else d.sqrtR ** (e - 1) * Sp
                    explicit = explicit + m * factor * builder.value(0, low)
            assert generic == explicit


def test_insertion_order_independence():
    # inserting a non-canonical coordinate reproduces the memoized value
    d = data_bip(16)
    mat = TrumpetMatrix(6, d)
    builder = TableBuilder(d, mat)
    for rest, extra in [((4, 4, 2), 4), ((3, 3, 2), 4), ((4, 2, 2, 0), 4)]:
        direct = builder.value(0, rest + (extra,))
        manual = build_D(extra, mat).apply(builder.value(0, rest))
        for i, li in enumerate(rest):
            for m in range(1, li):
                manual = manual + m * strict_pants(li, extra, m, d) \
                    * builder.value(0, rest[:i] + (m,) + rest[i + 1:])
        assert direct == manual


def test_build_T_genus1():
    d = data_bip(16, (2, 4, 6))
    mat = TrumpetMatrix(6, d)
    assert build_T(1, [0], d, mat) == genus1_F(d).derive_t()
    for l in (2, 4, 6):
        assert build_T(1, [l], d, mat) == genus1_T_bipartite(l, d)
        assert genus1_T(l, d, mat) == genus1_T_bipartite(l, d)
    # general weights: the closed genus-one insertion equals the builder
    dg = data_general(14, (1, 2, 3))
    matg = TrumpetMatrix(4, dg)
    for l in (1, 2, 3):
        assert build_T(1, [l], dg, matg) == genus1_T(l, dg, matg)


def test_build_T_genus1_with_vertex():
    # T^(1)_{2,0} = d/dt T^(1)_2 + S' T^(1)_1
    dg = data_general(14, (1, 2, 3))
    matg = TrumpetMatrix(4, dg)
    lhs = build_T(1, [2, 0], dg, matg)
    rhs = build_T(1, [2], dg, matg).derive_t() \
        + dg.S_deriv(1) * build_T(1, [1], dg, matg)
    assert lhs == rhs


def test_build_T_unsupported():
    d = data_bip()
    mat = TrumpetMatrix(4, d)
    with pytest.raises(UnsupportedGenus):
        build_T(0, [2, 2], d, mat)
    with pytest.raises(UnsupportedGenus):
        build_T(2, [2], d, mat)


def test_cylinder_recursion_consistency():
    # growing the cylinder by one boundary face matches pants (remark route);
    # the closed form covers positive pairs and the double-vertex channel
    # only, so mixed (l, 0) keys stay out of the seed table
    d = data_general(14, (1, 2, 3))
    mat = TrumpetMatrix(4, d)
    lmax = 4
    table = CoefficientTable(0, 2)
    table.set((0, 0), cylinder(0, 0, d))
    for l1 in range(1, lmax + 1):
        for l2 in range(1, lmax + 1):
            table.set((l1, l2), cylinder(l1, l2, d))
    grown = add_boundary_face(table, 2, d, mat)
    for key in [(2, 1, 1), (2, 2, 2), (3, 3, 2), (2, 0, 0)]:
        assert grown.get(key) == pants(*key, d)
    grown0 = add_boundary_vertex(table, d)
    for key in [(1, 1, 0), (2, 2, 0), (0, 0, 0)]:
        assert grown0.get(key) == pants(*key, d)


def test_insertion_quasipolynomiality_of_DlR():
    # R^{-l/2} D_l R^{(i)} / R is an even quasi-polynomial per parity class
    d = data_bip(20, (2, 4, 6, 8))
    mat = TrumpetMatrix(8, d)
    for i in (0, 1, 2):
        samples = {}
        for l in range(0, 9, 2):
            op = build_D(l, mat)
            val = divide_exact(op.apply(d.R_deriv(i)), d.sqrtR ** (l + 2))
            samples[(l,)] = val
        fitted = fit_quasipolynomial(samples, 1, i + 1)
        assert fitted.classes[frozenset()].total_degree() <= i + 1
    # odd parity class through a general weight spec
    dg = data_general(16, (1, 2, 3, 4, 5))
    matg = TrumpetMatrix(5, dg)
    for i in (0, 1):
        samples = {}
        for l in range(0, 6):
            op = build_D(l, matg)
            val = divide_exact(op.apply(dg.R_deriv(i)), dg.sqrtR ** (l + 2))
            samples[(l,)] = val
        fitted = fit_quasipolynomial(samples, 1, i + 1)
        assert fitted.total_degree() <= i + 1
