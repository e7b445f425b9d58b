"""Every explicit closed formula for tight-boundary generating functions.

All public entry points take actual boundary lengths; the half-length
variables that appear naturally in the bipartite formulas are internal.
Pole cancellations (the all-zero pants and the delta terms of the general
n-boundary formula) are performed inside the ring by exact division, and
the result is asserted pole-free.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .errors import (
    AssumptionViolated,
    InsufficientOrder,
    LogOfNonUnit,
    NonBipartiteWeights,
    UnsupportedCase,
)
from .disk import DiskData
from .polynomials import bell, pk_value
from .series import Series, divide_exact
from .tables import CoefficientTable, table_key  # noqa: F401  (re-export)


def _vertex_pants_pole(data: DiskData) -> Series:
    """(R' t - R)/(t R), the pole-cancelled all-vertices pair of pants."""
    num = data.R_deriv(1) * Series.t_power(2) - data.R
    den = Series.t_power(2) * data.R
    return divide_exact(num, den).assert_entire(LogOfNonUnit)


def pants(l1: int, l2: int, l3: int, data: DiskData) -> Series:
    """Tight pair of pants with three unrooted boundaries of given lengths."""
    if min(l1, l2, l3) < 0:
        raise AssumptionViolated("lengths must be nonnegative")
    if data.kmax < 1:
        raise InsufficientOrder("pants needs first derivatives")
    total = l1 + l2 + l3
    if total == 0:
        return _vertex_pants_pole(data)
    if total % 2 == 0:
        return data.R ** (total // 2 - 1) * data.R_deriv(1)
    return data.sqrtR ** (total - 1) * data.S_deriv(1)


def strict_pants(l1: int, l2: int, l3: int, data: DiskData) -> Series:
    """Pants with the third boundary strictly tight; needs l1 + l2 > l3."""
    if l1 + l2 <= l3:
        raise AssumptionViolated(f"need l1+l2 > l3, got {l1}+{l2} <= {l3}")
    d = l1 + l2 - l3
    if d % 2 == 0:
        return data.R ** (d // 2 - 1) * data.R_deriv(1)
    return data.sqrtR ** (d - 1) * data.S_deriv(1)


def double_strict_pants(l1: int, l2: int, l3: int, data: DiskData) -> Series:
    """Pants with the second and third boundaries strictly tight; l1 > l2 + l3."""
    if l1 <= l2 + l3:
        raise AssumptionViolated(f"need l1 > l2+l3, got {l1} <= {l2}+{l3}")
    d = l1 - l2 - l3
    if d % 2 == 0:
        return data.R ** (d // 2 - 1) * data.R_deriv(1)
    return data.sqrtR ** (d - 1) * data.S_deriv(1)


def cylinder(l1: int, l2: int, data: DiskData) -> Series:
    """Tight cylinder; the double vertex channel is log(R/t)."""
    if l1 == 0 and l2 == 0:
        return divide_exact(data.R, Series.t_power(2)).log_unit()
    if l1 != l2:
        return Series.zero(data.R.order2)
    return data.R ** l1 * Fraction(1, l1)


def collet_fusy(lengths, s: int, data: DiskData) -> Series:
    """Rooted-boundary planar generating function, bipartite or with two odd
    boundaries, plus s marked vertices (s extra t-derivatives)."""
    if not data.spec.bipartite:
        raise NonBipartiteWeights("formula needs even inner face degrees")
    lengths = [int(l) for l in lengths]
    if any(l < 1 for l in lengths) or not lengths:
        raise UnsupportedCase("boundary lengths must be positive")
    n = len(lengths)
    odd = [l for l in lengths if l % 2]
    if len(odd) not in (0, 2):
        raise UnsupportedCase("only zero or exactly two odd boundaries")
    n_deriv = n - 2 + s
    if n_deriv < 0:
        raise UnsupportedCase("n + s - 2 must be nonnegative (no antiderivative)")
    halves = [Fraction(l, 2) for l in lengths]
    sigma = sum(halves)
    assert sigma.denominator == 1
    pref = Fraction(1)
    for h in halves:
        pref *= h
    pref /= sigma
    for l in lengths:
        if l % 2 == 0:
            pref *= comb(l, l // 2)
        else:
            pref *= 2 * comb(l - 1, (l - 1) // 2)
    core = data.R ** int(sigma)
    for _ in range(n_deriv):
        core = core.derive_t()
    return core * pref


def _bell_at_derivatives(n: int, k: int, data: DiskData) -> Series:
    """B_{n,k}(R', R'', ...), the numerator of b_{n,k}."""
    if data.kmax < n - k + 1:
        raise InsufficientOrder(f"need R derivatives to order {n - k + 1}")
    poly = bell(n, k)
    out = Series.zero()
    for e, c in sorted(poly.terms.items()):
        term = Series.const(c)
        for i, p in enumerate(e):
            for _ in range(p):
                term = term * data.R_deriv(i + 1)
        out = out + term
    return out


def _tgen_assemble(halves, pvals, data: DiskData) -> Series:
    """Common-denominator assembly of the general n-boundary formula."""
    n = len(halves)
    sigma = sum(halves)
    assert Fraction(sigma).denominator == 1
    sigma = int(sigma)
    num = Series.zero()
    for k in range(0, n - 2):
        pk = pvals(k)
        if pk == 0:
            continue
        num = num + factorial(k) * pk * data.R ** (sigma + n - 3 - k) \
            * _bell_at_derivatives(n - 2, k + 1, data)
    if sigma == 0:
        unit = divide_exact(data.R, Series.t_power(2))
        num = num + Fraction((-1) ** n * factorial(n - 3)) * unit ** (n - 2)
    return divide_exact(num, data.R ** (n - 2)).assert_entire(LogOfNonUnit)


def tgen(lengths, data: DiskData) -> Series:
    """Unrooted tight boundaries of even lengths (zeros allowed), bipartite."""
    if not data.spec.bipartite:
        raise NonBipartiteWeights("general formula proved for bipartite weights")
    lengths = [int(l) for l in lengths]
    if len(lengths) < 3:
        raise UnsupportedCase("needs at least three boundaries")
    if any(l < 0 or l % 2 for l in lengths):
        raise UnsupportedCase("lengths must be even and nonnegative")
    halves = [l // 2 for l in lengths]
    return _tgen_assemble(halves, lambda k: pk_value(k, halves), data)


def tgen_quasi(lengths, data: DiskData) -> Series:
    """Quasi-bipartite variant: exactly two boundaries of odd length."""
    if not data.spec.bipartite:
        raise NonBipartiteWeights("general formula proved for bipartite weights")
    lengths = [int(l) for l in lengths]
    if len(lengths) < 3:
        raise UnsupportedCase("needs at least three boundaries")
    odd = sorted(l for l in lengths if l % 2)
    even = sorted(l for l in lengths if l % 2 == 0)
    if len(odd) != 2:
        raise UnsupportedCase("exactly two odd boundaries required")
    halves = [Fraction(l, 2) for l in odd + even]
    return _tgen_assemble(halves,
                          lambda k: pk_value(k, halves, family="ptilde"), data)


def genus1_F(data: DiskData) -> Series:
    """Genus-one maps without boundary; the t-logs cancel exactly."""
    if data.kmax < 1:
        raise InsufficientOrder("needs first derivatives")
    rp, sp = data.R_deriv(1), data.S_deriv(1)
    u0 = rp * rp - sp * sp * data.R
    unit = divide_exact(data.R, Series.t_power(2))
    return Fraction(1, 24) * (u0.log_unit() - 2 * unit.log_unit())


def genus1_T_bipartite(l: int, data: DiskData) -> Series:
    """Genus one, one tight boundary of even length, bipartite weights."""
    if not data.spec.bipartite:
        raise NonBipartiteWeights("use the insertion form for general weights")
    if l < 0 or l % 2:
        raise UnsupportedCase("boundary length must be even")
    if data.kmax < 2:
        raise InsufficientOrder("needs second derivatives")
    rp, rpp = data.R_deriv(1), data.R_deriv(2)
    bulk = rpp * rp.invert()
    half = l // 2
    if half >= 1:
        out = (half * half - 1) * data.R ** (half - 1) * rp + data.R ** half * bulk
    else:
        out = bulk - _vertex_pants_pole(data)
    return out * Fraction(1, 12)


def genus1_T(l: int, data: DiskData, matrix=None) -> Series:
    """Genus one, one tight boundary, by inserting a boundary into genus1_F."""
    f1 = genus1_F(data)
    if l == 0:
        return f1.derive_t()
    from .insertion import build_D  # local import to avoid a module cycle
    if matrix is None:
        raise UnsupportedCase("positive boundary length needs a trumpet matrix")
    return build_D(l, matrix).apply(f1)
