"""Tight boundary insertion operators and the fixed-genus recursions.

``D_m`` adds one tight boundary of length m at fixed genus; applying it to a
table entry plus the strict-pants correction sum grows a T-table by one
boundary.  Boundary-vertices are the m = 0 case, where the operator is the
plain t-derivative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .closedforms import genus1_F, pants, strict_pants
from .disk import DiskData, TrumpetMatrix
from .errors import BeyondLmax, MissingDependency, UnsupportedGenus
from .series import Series
from .tables import CoefficientTable, table_key


@dataclass(frozen=True)
class InsertionOperator:
    """D_m = sum over M of (A^-1)_{m,M} (M/m) d/dt_M, and D_0 = d/dt."""

    m: int
    rows: tuple

    def apply(self, x: Series) -> Series:
        if self.m == 0:
            return x.derive_t()
        out = Series.zero()
        for M, coef in self.rows:
            out = out + coef * x.derive_face(M)
        return out


def operator_degrees(m: int, matrix: TrumpetMatrix) -> set:
    """Face degrees whose weights D_m actually differentiates against."""
    return {M for M in range(1, m + 1)
            if not matrix.inverse_entry(m, M).is_zero()}


def build_D(m: int, matrix: TrumpetMatrix) -> InsertionOperator:
    if m < 0:
        raise BeyondLmax("operator index must be nonnegative")
    if m == 0:
        return InsertionOperator(0, ())
    if m > matrix.Lmax:
        raise BeyondLmax(f"D_{m} needs Lmax >= {m}, matrix has {matrix.Lmax}")
    active = set(matrix.data.spec.degrees)
    missing = sorted(operator_degrees(m, matrix) - active)
    if missing:
        raise MissingDependency(
            f"D_{m} differentiates against inactive face weights {missing}")
    rows = tuple((M, matrix.inverse_entry(m, M) * Fraction(M, m))
                 for M in range(1, m + 1))
    return InsertionOperator(m, rows)


def apply_D_check(m: int, data: DiskData, matrix: TrumpetMatrix) -> dict:
    """Identity report for the action of D_m on R, S and derivatives."""
    from math import factorial

    from .closedforms import _bell_at_derivatives
    from .polynomials import pk_uni

    report = {}
    op = build_D(m, matrix)
    if m == 0:
        for j in range(0, min(2, data.kmax - 1) + 1):
            report[f"D0 R^({j})"] = op.apply(data.R_deriv(j)) == data.R_deriv(j + 1)
        return report
    # D_m R and D_m S against the parity table
    if m % 2 == 0:
        dr = data.sqrtR ** m * data.R_deriv(1)
        ds = data.sqrtR ** m * data.S_deriv(1)
    else:
        dr = data.sqrtR ** (m + 1) * data.S_deriv(1)
        ds = data.sqrtR ** (m - 1) * data.R_deriv(1)
    report[f"D{m} R"] = op.apply(data.R) == dr
    report[f"D{m} S"] = op.apply(data.S) == ds
    if data.spec.bipartite and m % 2 == 0:
        half = m // 2
        for j in range(1, min(3, data.kmax - 1) + 1):
            rhs = Series.zero()
            for k in range(0, j + 1):
                qk = pk_uni(k, "q")(Fraction(half * half))
                if qk == 0:
                    continue  # q_k(half) = 0 for k > half keeps R powers nonnegative
                rhs = rhs + factorial(k) * qk * data.R ** (half - k) \
                    * _bell_at_derivatives(j + 1, k + 1, data)
            report[f"D{m} R^({j})"] = op.apply(data.R_deriv(j)) == rhs
    return report


class TableBuilder:
    """Memoized growth of T-tables by boundary insertion.

    Lengths are inserted in the canonical descending order, vertices last;
    intermediate vectors are memoized by (genus, sorted multiset).
    """

    def __init__(self, data: DiskData, matrix: TrumpetMatrix,
                 base_table: CoefficientTable | None = None):
        self.data = data
        self.matrix = matrix
        self.base_table = base_table
        self._memo: dict = {}
        self._ops: dict = {}

    def _op(self, m: int) -> InsertionOperator:
        if m not in self._ops:
            self._ops[m] = build_D(m, self.matrix)
        return self._ops[m]

    def _base(self, g: int, key: tuple) -> Series | None:
        if self.base_table is not None and self.base_table.genus == g \
                and len(key) == self.base_table.n:
            if not self.base_table.has(key):
                raise MissingDependency(f"oracle base lacks entry {key}")
            return self.base_table.get(key)
        if g == 0 and len(key) == 3:
            return pants(*key, self.data)
        if g == 1 and len(key) == 0:
            return genus1_F(self.data)
        return None

    def value(self, g: int, lengths) -> Series:
        key = table_key(lengths)
        memo_key = (g, key)
        if memo_key in self._memo:
            return self._memo[memo_key]
        base = self._base(g, key)
        if base is not None:
            self._memo[memo_key] = base
            return base
        floor = 3 if g == 0 else (0 if g == 1 else
                                  self.base_table.n if (self.base_table is not None
                                                        and self.base_table.genus == g)
                                  else None)
        if floor is None:
            raise UnsupportedGenus(f"no base case for genus {g} without an oracle")
        if len(key) <= floor:
            raise UnsupportedGenus(
                f"genus {g} tables start at {floor} boundaries, asked {key}")
        rest, extra = self._pick_insertion(key)
        value = self._insert(g, rest, extra)
        self._memo[memo_key] = value
        return value

    def _pick_insertion(self, key: tuple) -> tuple:
        """Choose which boundary to insert last: vertices first, then the
        smallest length whose operator only touches active weights."""
        if key[-1] == 0:
            return key[:-1], 0
        active = set(self.data.spec.degrees)
        for idx in range(len(key) - 1, -1, -1):
            x = key[idx]
            if x <= self.matrix.Lmax and operator_degrees(x, self.matrix) <= active:
                return key[:idx] + key[idx + 1:], x
        raise MissingDependency(
            f"no insertion operator for {key} is computable with active "
            f"degrees {sorted(active)} and Lmax {self.matrix.Lmax}")

    def _insert(self, g: int, rest: tuple, extra: int) -> Series:
        value = self._op(extra).apply(self.value(g, rest))
        for i, li in enumerate(rest):
            for m in range(1, li):
                sp = strict_pants(li, extra, m, self.data)
                lowered = rest[:i] + (m,) + rest[i + 1:]
                value = value + m * sp * self.value(g, lowered)
        return value


def add_boundary_vertex(table: CoefficientTable, data: DiskData) -> CoefficientTable:
    """Grow every entry of a (g, n) table by one boundary-vertex."""
    return _grow(table, 0, data, None)


def add_boundary_face(table: CoefficientTable, length: int, data: DiskData,
                      matrix: TrumpetMatrix) -> CoefficientTable:
    """Grow every entry of a (g, n) table by one boundary-face."""
    if length < 1:
        raise BeyondLmax("face length must be positive; use add_boundary_vertex")
    return _grow(table, length, data, matrix)


def _grow(table: CoefficientTable, extra: int, data: DiskData,
          matrix: TrumpetMatrix | None) -> CoefficientTable:
    op = build_D(extra, matrix) if extra else InsertionOperator(0, ())
    out = CoefficientTable(table.genus, table.n + 1)
    for key in table.keys():
        value = op.apply(table.get(key))
        for i, li in enumerate(key):
            for m in range(1, li):
                lowered = table_key(key[:i] + (m,) + key[i + 1:])
                if not table.has(lowered):
                    raise MissingDependency(f"entry {lowered} absent from table")
                value = value + m * strict_pants(li, extra, m, data) \
                    * table.get(lowered)
        out.set(tuple(key) + (extra,), value, "insertion")
    return out


def build_T(g: int, lengths, data: DiskData, matrix: TrumpetMatrix,
            base_table: CoefficientTable | None = None) -> Series:
    """T^{(g)} for one length vector, growing from the closed-form or oracle base."""
    return TableBuilder(data, matrix, base_table).value(g, lengths)
