"""Disk generating functions R and S, trumpets and the Zhukovsky layer.

R counts planar maps with two distinguished length-1 boundaries and S those
with one length-1 and one length-0 boundary.  Both are fixed points of a
pair of coefficient-extraction equations; the extraction [z^j](z+S+R/z)^p is
always done by closed trinomial sums, never by symbolic z arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import (
    HalfPowerResidue,
    IndexBeyondLmax,
    InsufficientOrder,
    InvalidIndex,
    MissingDependency,
    NonConvergence,
)
from .series import Series, divide_exact
from .tables import CoefficientTable, table_key


@dataclass(frozen=True)
class WeightSpec:
    """Active face degrees and the doubled truncation grade."""

    degrees: tuple[int, ...]
    order2: int

    def __post_init__(self):
        degs = tuple(sorted(set(self.degrees)))
        if any(d < 1 for d in degs):
            raise ValueError("face degrees must be >= 1")
        if self.order2 < 0:
            raise ValueError("truncation order must be nonnegative")
        object.__setattr__(self, "degrees", degs)

    @property
    def bipartite(self) -> bool:
        return all(d % 2 == 0 for d in self.degrees)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def order(self) -> Fraction:
        return Fraction(self.order2, 2)


def trinomial_extract(power: int, j: int, R: Series, S: Series,
                      r_pows=None, s_pows=None) -> Series:
    """[z^j] (z + S + R/z)^power by the exact trinomial sum."""
    total = Series.zero()
    for c in range(power + 1):
        a = j + c
        b = power - j - 2 * c
        if a < 0 or b < 0:
            continue
        coef = comb(power, a) * comb(power - a, b)
        term = Series.const(coef)
        sb = s_pows[b] if s_pows is not None else S ** b
        rc = r_pows[c] if r_pows is not None else R ** c
        term = term * sb * rc
        total = total + term
    return total


@dataclass
class DiskData:
    """Solved disk series with a derivative cache (never mutated in place)."""

    spec: WeightSpec
    R: Series
    S: Series
    sqrtR: Series
    dR: tuple = ()
    dS: tuple = ()

    def R_deriv(self, k: int) -> Series:
        if k == 0:
            return self.R
        if k > len(self.dR):
            raise InsufficientOrder(f"R^({k}) not cached; call derivatives()")
        return self.dR[k - 1]

    def S_deriv(self, k: int) -> Series:
        if k == 0:
            return self.S
        if k > len(self.dS):
            raise InsufficientOrder(f"S^({k}) not cached; call derivatives()")
        return self.dS[k - 1]

    @property
    def kmax(self) -> int:
        return len(self.dR)


@dataclass(frozen=True)
class ZhukovskyCurve:
    """x(z) = gamma (z + 1/z) + alpha with alpha = S and gamma = sqrt(R)."""

    alpha: Series
    gamma: Series


def _rhs(spec: WeightSpec, R: Series, S: Series) -> tuple[Series, Series]:
    rmax = max((d - 1 for d in spec.degrees), default=0)
    r_pows = [Series.const(1)]
    s_pows = [Series.const(1)]
    for _ in range(rmax):
        r_pows.append(r_pows[-1] * R)
        s_pows.append(s_pows[-1] * S)
    new_r = Series.t_power(2, spec.order2)
    new_s = Series.zero(spec.order2)
    for i in spec.degrees:
        ti = Series.face_var(i)
        new_r = new_r + ti * trinomial_extract(i - 1, -1, R, S, r_pows, s_pows)
        new_s = new_s + ti * trinomial_extract(i - 1, 0, R, S, r_pows, s_pows)
    return new_r.truncate(spec.order2), new_s.truncate(spec.order2)


def solve_RS(spec: WeightSpec, kmax: int | None = None) -> DiskData:
    """Fixed-point sweeps from (R, S) = (t, 0) until stationary at grade N."""
    R = Series.t_power(2, spec.order2)
    S = Series.zero(spec.order2)
    sweeps = spec.order2 // 2 + 2
    for _ in range(sweeps):
        new_r, new_s = _rhs(spec, R, S)
        if new_r == R and new_s == S:
            break
        R, S = new_r, new_s
    else:
        raise NonConvergence(f"no stationarity after {sweeps} sweeps")
    check_r, check_s = _rhs(spec, R, S)
    if not (check_r == R and check_s == S):
        raise NonConvergence("fixed point reached but residuals do not vanish")
    if spec.bipartite and not S.is_zero():
        raise NonConvergence("bipartite spec solved with nonzero S")
    data = DiskData(spec, R, S, R.sqrt())
    if kmax is None:
        kmax = max(1, spec.order2 // 2)
    return derivatives(data, kmax)


def residuals(data: DiskData) -> tuple[Series, Series]:
    new_r, new_s = _rhs(data.spec, data.R, data.S)
    return data.R - new_r, data.S - new_s


def solve_R_bipartite(spec: WeightSpec) -> Series:
    """The single bipartite fixed-point equation for R."""
    if not spec.bipartite:
        raise ValueError("bipartite fast path needs even degrees only")
    R = Series.t_power(2, spec.order2)
    for _ in range(spec.order2 // 2 + 2):
        new_r = Series.t_power(2, spec.order2)
        for d in spec.degrees:
            j = d // 2
            new_r = new_r + comb(2 * j - 1, j) * Series.face_var(d) * R ** j
        new_r = new_r.truncate(spec.order2)
        if new_r == R:
            return R
        R = new_r
    raise NonConvergence("bipartite sweeps did not become stationary")


def derivatives(data: DiskData, kmax: int) -> DiskData:
    """Extend the derivative cache; returns a new DiskData value."""
    if kmax <= data.kmax:
        return data
    dR = list(data.dR)
    dS = list(data.dS)
    while len(dR) < kmax:
        dR.append((dR[-1] if dR else data.R).derive_t())
        dS.append((dS[-1] if dS else data.S).derive_t())
    return DiskData(data.spec, data.R, data.S, data.sqrtR, tuple(dR), tuple(dS))


def zhukovsky_curve(data: DiskData) -> ZhukovskyCurve:
    return ZhukovskyCurve(alpha=data.S, gamma=data.sqrtR)


# --------------------------------------------------------------------------
# Trumpets
# --------------------------------------------------------------------------

def trumpet(L: int, ell: int, data: DiskData) -> Series:
    """Generating function A_{L,l} of trumpets, [z^l](z+S+R/z)^L."""
    if L < 1 or ell < 1:
        raise InvalidIndex("trumpet indices must be positive")
    if ell > L:
        return Series.zero(data.R.order2)
    return trinomial_extract(L, ell, data.R, data.S)


class TrumpetMatrix:
    """The unitriangular matrix (A_{L,l}) with its inverse."""

    def __init__(self, Lmax: int, data: DiskData):
        if Lmax < 1:
            raise InvalidIndex("Lmax must be >= 1")
        self.Lmax = Lmax
        self.data = data
        r_pows = [Series.const(1)]
        s_pows = [Series.const(1)]
        for _ in range(Lmax):
            r_pows.append(r_pows[-1] * data.R)
            s_pows.append(s_pows[-1] * data.S)
        self._a = {}
        for L in range(1, Lmax + 1):
            for ell in range(1, L + 1):
                self._a[(L, ell)] = trinomial_extract(L, ell, data.R, data.S,
                                                      r_pows, s_pows)
        self._inv = {}
        for L in range(1, Lmax + 1):
            for M in range(L, 0, -1):
                if M == L:
                    self._inv[(L, M)] = Series.const(1)
                    continue
                acc = Series.zero()
                for m in range(M, L):
                    acc = acc + self._a[(L, m)] * self._inv[(m, M)]
                self._inv[(L, M)] = -acc

    def entry(self, L: int, ell: int) -> Series:
        if not (1 <= L <= self.Lmax and ell >= 1):
            raise IndexBeyondLmax(f"A_({L},{ell}) outside matrix of size {self.Lmax}")
        return self._a.get((L, ell), Series.zero())

    def inverse_entry(self, L: int, ell: int) -> Series:
        if not (1 <= L <= self.Lmax and ell >= 1):
            raise IndexBeyondLmax(f"Ainv_({L},{ell}) outside matrix of size {self.Lmax}")
        return self._inv.get((L, ell), Series.zero())


def trumpet_matrix(Lmax: int, data: DiskData) -> TrumpetMatrix:
    return TrumpetMatrix(Lmax, data)


# --------------------------------------------------------------------------
# Table transforms between rooted-arbitrary (F) and unrooted-tight (T)
# --------------------------------------------------------------------------

def _split_key(key):
    pos = [l for l in key if l > 0]
    return pos, len(key) - len(pos)


def t_to_f(t_table: CoefficientTable, matrix: TrumpetMatrix,
           keys=None) -> CoefficientTable:
    """F-table from a T-table: F_L = sum over l of prod A_{L,l} (prod l) T_l.

    Entries with trailing zeros hold the boundary-vertex channels, i.e. the
    s-fold t-derivatives of F.
    """
    out = CoefficientTable(t_table.genus, t_table.n)
    for key in (keys if keys is not None else t_table.keys()):
        key = table_key(key)
        Ls, s = _split_key(key)
        if any(L > matrix.Lmax for L in Ls):
            raise IndexBeyondLmax(f"boundary length above Lmax={matrix.Lmax}")
        acc = Series.zero()
        for ells in itertools.product(*(range(1, L + 1) for L in Ls)):
            tkey = table_key(list(ells) + [0] * s)
            if not t_table.has(tkey):
                raise MissingDependency(f"T entry {tkey} absent")
            term = t_table.get(tkey)
            root = 1
            for L, ell in zip(Ls, ells):
                term = term * matrix.entry(L, ell)
                root *= ell
            acc = acc + term * root
        out.set(key, acc, "closed-form")
    return out


def f_to_t(f_table: CoefficientTable, matrix: TrumpetMatrix,
           keys=None) -> CoefficientTable:
    """T-table from an F-table via the unitriangular inverse and unrooting."""
    out = CoefficientTable(f_table.genus, f_table.n)
    for key in (keys if keys is not None else f_table.keys()):
        key = table_key(key)
        ells, s = _split_key(key)
        if any(l > matrix.Lmax for l in ells):
            raise IndexBeyondLmax(f"boundary length above Lmax={matrix.Lmax}")
        acc = Series.zero()
        for Ls in itertools.product(*(range(1, l + 1) for l in ells)):
            fkey = table_key(list(Ls) + [0] * s)
            if not f_table.has(fkey):
                raise MissingDependency(f"F entry {fkey} absent")
            term = f_table.get(fkey)
            for ell, L in zip(ells, Ls):
                term = term * matrix.inverse_entry(ell, L)
            acc = acc + term
        root = 1
        for ell in ells:
            root *= ell
        out.set(key, acc * Fraction(1, root), "closed-form")
    return out


def zhukovsky_extract(f_table: CoefficientTable, matrix: TrumpetMatrix,
                      data: DiskData, keys=None) -> CoefficientTable:
    """tau-hat table: rooted tight entries normalised by R^(sum l / 2)."""
    t_table = f_to_t(f_table, matrix, keys)
    out = CoefficientTable(f_table.genus, f_table.n)
    for key in t_table.keys():
        total = sum(key)
        root = 1
        for l in key:
            if l > 0:
                root *= l
        value = divide_exact(t_table.get(key) * root, data.sqrtR ** total)
        for (t2, _faces) in value.terms:
            if (t2 - total) % 2:
                raise HalfPowerResidue(
                    f"tau-hat at {key} has exponent parity {t2}/2")
        out.set(key, value, "closed-form")
    return out
