"""Polynomial combinatorics: Bell polynomials, the p/q families and their
multivariate assemblies, parity-dependent quasi-polynomials, discrete
integration and moduli-space Euler characteristics.

Univariate members of the p/q families are polynomials in the squared
length, so :class:`UniPoly` here is always read in the variable x = l^2
unless said otherwise.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import (
    InsufficientOrders,
    InsufficientSamples,
    InvalidRange,
    NotQuasiPolynomial,
    OutOfRange,
    ParityMismatch,
)
from .series import Series, divide_exact


class UniPoly:
    """Dense univariate polynomial with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly([c * other for c in self.coeffs])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1 or 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __repr__(self):
        return "UniPoly(%s)" % (self.coeffs,)


def lagrange_basis(nodes, i) -> UniPoly:
    """The polynomial that is 1 at nodes[i] and 0 at the other nodes."""
    num = UniPoly([1])
    den = Fraction(1)
    for j, x in enumerate(nodes):
        if j == i:
            continue
        num = num * UniPoly([-x, 1])
        den *= nodes[i] - x
    return num * Fraction(1, den)


class MultiPoly:
    """Sparse multivariate polynomial; coefficients are Fractions or Series."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: dict):
        self.arity = arity
        self.terms = {e: c for e, c in terms.items()
                      if not (c == 0 if not isinstance(c, Series) else c.is_zero())}

    @staticmethod
    def zero(arity: int) -> "MultiPoly":
        return MultiPoly(arity, {})

    @staticmethod
    def const(arity: int, c) -> "MultiPoly":
        return MultiPoly(arity, {(0,) * arity: c})

    @staticmethod
    def variable(arity: int, i: int) -> "MultiPoly":
        e = [0] * arity
        e[i] = 1
        return MultiPoly(arity, {tuple(e): Fraction(1)})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return MultiPoly(self.arity, out)

    def __sub__(self, other):
        return self + (other * Fraction(-1))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Series)):
            return MultiPoly(self.arity, {e: c * other for e, c in self.terms.items()})
        out: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                out[e] = out[e] + c if e in out else c
        return MultiPoly(self.arity, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MultiPoly) or self.arity != other.arity:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def __call__(self, point):
        vals = [Fraction(v) for v in point]
        acc = None
        for e, c in sorted(self.terms.items()):
            m = Fraction(1)
            for v, p in zip(vals, e):
                if p:
                    m *= v ** p
            term = c * m
            acc = term if acc is None else acc + term
        return Fraction(0) if acc is None else acc

    def derivative(self, i: int) -> "MultiPoly":
        out: dict = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MultiPoly(self.arity, out)

    def permute(self, perm) -> "MultiPoly":
        """Rename variable i to perm[i]."""
        out: dict = {}
        for e, c in self.terms.items():
            ne = [0] * self.arity
            for i, p in enumerate(e):
                ne[perm[i]] = p
            key = tuple(ne)
            out[key] = out[key] + c if key in out else c
        return MultiPoly(self.arity, out)

    def is_symmetric(self) -> bool:
        return all(self.permute(p) == self
                   for p in itertools.permutations(range(self.arity)))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __repr__(self):
        return "MultiPoly(%d, %s)" % (self.arity, dict(sorted(self.terms.items())))


# --------------------------------------------------------------------------
# Bell polynomials and composition formulas
# --------------------------------------------------------------------------

def _block_profiles(n: int, k: int):
    """Vectors (j_1, ..., j_{n-k+1}) with sum k and weighted sum n."""
    width = n - k + 1

    def rec(pos, rem_k, rem_n):
        if pos == width:
            if rem_k == 0 and rem_n == 0:
                yield ()
            return
        size = pos + 1
        for j in range(min(rem_k, rem_n // size) + 1):
            for tail in rec(pos + 1, rem_k - j, rem_n - size * j):
                yield (j,) + tail

    yield from rec(0, k, n)


def bell(n: int, k: int) -> MultiPoly:
    """Partial exponential Bell polynomial B_{n,k} in r_1..r_{n-k+1}."""
    if not 1 <= k <= n:
        raise InvalidRange(f"bell({n},{k}) outside 1 <= k <= n")
    width = n - k + 1
    terms: dict = {}
    for js in _block_profiles(n, k):
        coef = Fraction(factorial(n))
        for i, j in enumerate(js, start=1):
            coef /= factorial(j) * factorial(i) ** j
        terms[js] = terms.get(js, Fraction(0)) + coef
    return MultiPoly(width, terms)


def bnk(n: int, k: int, derivatives, R: Series) -> Series:
    """B_{n,k} evaluated at the derivative ratios of R (a Laurent value).

    ``derivatives[i]`` must hold the (i+1)-st t-derivative of R.
    """
    if len(derivatives) < n - k + 1:
        raise InsufficientOrders(f"bnk({n},{k}) needs {n - k + 1} derivatives")
    poly = bell(n, k)
    num = Series.zero()
    for e, c in sorted(poly.terms.items()):
        term = Series.const(c)
        for i, p in enumerate(e):
            for _ in range(p):
                term = term * derivatives[i]
        num = num + term
    return divide_exact(num, R ** k)


def faa_di_bruno(outer, inner, n: int) -> Series:
    """n-th derivative of a composition from outer f^(k)(g) and inner g^(k)."""
    if n < 1:
        raise InvalidRange("composition order must be positive")
    if len(outer) < n or len(inner) < n:
        raise InsufficientOrders(f"need {n} outer and inner derivatives")
    total = Series.zero()
    for k in range(1, n + 1):
        poly = bell(n, k)
        val = Series.zero()
        for e, c in sorted(poly.terms.items()):
            term = Series.const(c)
            for i, p in enumerate(e):
                for _ in range(p):
                    term = term * inner[i]
            val = val + term
        total = total + outer[k - 1] * val
    return total


# --------------------------------------------------------------------------
# The p, q, ptilde families
# --------------------------------------------------------------------------

def pk_uni(k: int, family: str = "p") -> UniPoly:
    """p_k, q_k or ptilde_k as a polynomial in x = l^2."""
    if k < 0:
        raise InvalidRange("family index must be nonnegative")
    if family == "p":
        roots = [Fraction(i * i) for i in range(1, k + 1)]
    elif family == "q":
        roots = [Fraction(i * i) for i in range(k)]
    elif family == "ptilde":
        roots = [(Fraction(2 * i - 1, 2)) ** 2 for i in range(1, k + 1)]
    else:
        raise InvalidRange(f"unknown family {family!r}")
    out = UniPoly([1])
    for r in roots:
        out = out * UniPoly([-r, 1])
    return out * Fraction(1, factorial(k) ** 2)


@lru_cache(maxsize=None)
def _uni_value(k: int, family: str, sq: Fraction) -> Fraction:
    return pk_uni(k, family)(sq)


def pk_value(k: int, ells, family: str = "p") -> Fraction:
    """Pointwise multivariate p_k (or the ptilde pair variant).

    For family "p" the first slot carries p and the rest q; for family
    "ptilde" the first two slots carry ptilde and the rest q.
    """
    n = len(ells)
    if n < 1 or k < 0:
        raise InvalidRange("need k >= 0 and at least one variable")
    specials = 1 if family == "p" else 2
    if family == "ptilde" and n < 2:
        raise InvalidRange("ptilde variant needs at least two variables")
    sqs = [Fraction(l) ** 2 for l in ells]
    first = "p" if family == "p" else "ptilde"
    total = Fraction(0)
    for ks in _compositions(k, n):
        prod = _uni_value(ks[0], first, sqs[0])
        if prod == 0:
            continue
        ok = True
        for i in range(1, n):
            fam = first if i < specials else "q"
            v = _uni_value(ks[i], fam, sqs[i])
            if v == 0:
                ok = False
                break
            prod *= v
        if ok:
            total += prod
    return total


def _compositions(k: int, n: int):
    if n == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _compositions(k - first, n - 1):
            yield (first,) + rest


def pk_multi(k: int, n: int, family: str = "p") -> MultiPoly:
    """Symbolic multivariate p_k (variables are the squared lengths)."""
    if n < 1 or k < 0:
        raise InvalidRange("need k >= 0 and n >= 1")
    specials = 1 if family == "p" else 2
    if family == "ptilde" and n < 2:
        raise InvalidRange("ptilde variant needs n >= 2")
    first = "p" if family == "p" else "ptilde"
    out = MultiPoly.zero(n)
    for ks in _compositions(k, n):
        term = MultiPoly.const(n, Fraction(1))
        for i, ki in enumerate(ks):
            fam = first if i < specials else "q"
            uni = pk_uni(ki, fam)
            emb = MultiPoly(n, {
                tuple(d if j == i else 0 for j in range(n)): c
                for d, c in enumerate(uni.coeffs)
            })
            term = term * emb
        out = out + term
    return out


def string_equation_check(k: int, points) -> bool:
    """The discrete string equation for p_k at the given length tuples."""
    if k < 0:
        raise InvalidRange("k must be nonnegative")
    memo: dict = {}

    def p(kk, tup):
        key = (kk, tuple(sorted(tup)))
        if key not in memo:
            memo[key] = pk_value(kk, key[1])
        return memo[key]

    for ells in points:
        ells = tuple(ells)
        lhs = (k + 1) * p(k + 1, ells)
        rhs = (sum(ells) - k - 1) * p(k, ells)
        for i, li in enumerate(ells):
            for m in range(1, li):
                rhs += 2 * m * p(k, ells[:i] + (m,) + ells[i + 1:])
        if lhs != rhs:
            return False
    return True


# --------------------------------------------------------------------------
# Discrete integration (Bernoulli-Faulhaber style)
# --------------------------------------------------------------------------

_SUM_COMBOS = {
    ("even", True): "even",
    ("odd", False): "even",
    ("even", False): "odd",
    ("odd", True): "odd",
}


def discrete_sum_value(P: UniPoly, m_parity: str, boundary: bool, ell: int) -> Fraction:
    """Literal evaluation of the parity-restricted weighted sum at ell."""
    start = 2 if m_parity == "even" else 1
    acc = Fraction(0)
    for m in range(start, ell, 2):
        acc += m * P(Fraction(m * m))
    if boundary:
        acc += Fraction(ell, 2) * P(Fraction(ell * ell))
    return acc


def discrete_sum(P: UniPoly, m_parity: str, boundary: bool, ell_parity: str) -> UniPoly:
    """Closed form of sum_{0<m<l, m parity} m P(m^2) (+ l/2 P(l^2)).

    The result is a polynomial in x = l^2, valid on the stated parity class
    of l; only the four combinations with a closed form are accepted.
    """
    if _SUM_COMBOS.get((m_parity, boundary)) != ell_parity:
        raise ParityMismatch(
            f"no closed form for m {m_parity}, boundary={boundary}, l {ell_parity}")
    deg = P.degree + 1 if P.degree >= 0 else 0
    start = 2 if ell_parity == "even" else 1
    nodes = [start + 2 * i for i in range(deg + 2)]
    xs = [Fraction(l * l) for l in nodes]
    out = UniPoly([])
    for i, l in enumerate(nodes):
        out = out + lagrange_basis(xs, i) * discrete_sum_value(P, m_parity, boundary, l)
    for l in range(start, start + 2 * (deg + 6), 2):
        if out(Fraction(l * l)) != discrete_sum_value(P, m_parity, boundary, l):
            raise ParityMismatch("interpolated discrete sum failed verification")
    return out


# --------------------------------------------------------------------------
# Euler characteristics
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    if m == 0:
        return Fraction(1)
    total = Fraction(0)
    for j in range(m):
        total += comb(m + 1, j) * bernoulli(j)
    return -total / (m + 1)


def zeta_negative_odd(g: int) -> Fraction:
    """zeta(1 - 2g) for g >= 1, exactly."""
    return -bernoulli(2 * g) / (2 * g)


def euler_characteristic(g: int, n: int) -> Fraction:
    """Orbifold Euler characteristic of the (g, n) moduli space."""
    if 2 - 2 * g - n >= 0:
        raise OutOfRange(f"(g,n)=({g},{n}) is not hyperbolic")
    sign = Fraction(-1) ** ((n - 1) % 2)
    if g == 0:
        return sign * factorial(n - 3)
    return sign * Fraction(factorial(2 * g + n - 3), factorial(2 * g - 2)) \
        * zeta_negative_odd(g)


# --------------------------------------------------------------------------
# Parity-dependent quasi-polynomials and exact fitting
# --------------------------------------------------------------------------

class QuasiPolynomial:
    """One polynomial in the squared variables per parity class."""

    def __init__(self, arity: int, classes: dict):
        self.arity = arity
        self.classes = {frozenset(I): poly for I, poly in classes.items()}

    def class_of(self, ells) -> frozenset:
        return frozenset(i + 1 for i, l in enumerate(ells) if l % 2)

    def evaluate(self, ells):
        if len(ells) != self.arity:
            raise InvalidRange("wrong number of arguments")
        I = self.class_of(ells)
        if I not in self.classes:
            raise NotQuasiPolynomial(f"no fitted class for parities {sorted(I)}")
        return self.classes[I]([Fraction(l) ** 2 for l in ells])

    def total_degree(self) -> int:
        return max((p.total_degree() for p in self.classes.values()), default=-1)

    def is_symmetric(self) -> bool:
        """Invariance under simultaneous permutation of slots and parities."""
        n = self.arity
        for perm in itertools.permutations(range(n)):
            for I, poly in self.classes.items():
                J = frozenset(perm[i - 1] + 1 for i in I)
                if J not in self.classes:
                    return False
                if poly.permute(perm) != self.classes[J]:
                    return False
        return True

    def to_json_dict(self) -> dict:
        classes = []
        for I in sorted(self.classes, key=sorted):
            poly = self.classes[I]
            entries = []
            for e in sorted(poly.terms):
                c = poly.terms[e]
                if isinstance(c, Series):
                    coef = c.to_json_dict()
                else:
                    coef = {"num": str(c.numerator), "den": str(c.denominator)}
                entries.append({"exps": list(e), "coef": coef})
            classes.append({"odd_positions": sorted(I), "poly": entries})
        return {"arity": self.arity, "classes": classes}


def _tensor_interpolate(nodes_by_axis, getter, arity):
    def rec(axis, prefix):
        if axis == arity:
            return MultiPoly.const(arity, getter(tuple(prefix)))
        out = MultiPoly.zero(arity)
        xs = nodes_by_axis[axis]
        for i, x in enumerate(xs):
            sub = rec(axis + 1, prefix + [x])
            basis = lagrange_basis(xs, i)
            emb = MultiPoly(arity, {
                tuple(d if j == axis else 0 for j in range(arity)): c
                for d, c in enumerate(basis.coeffs)
            })
            out = out + sub * emb
        return out

    return rec(0, [])


def fit_quasipolynomial(samples: dict, arity: int, degree: int) -> QuasiPolynomial:
    """Exact per-class tensor interpolation in the squared variables.

    ``samples`` maps integer length tuples to Series (or Fractions).  Per
    parity class the first degree+1 distinct squared values per coordinate
    form the interpolation grid; every remaining sample of the class is a
    held-out point that must be reproduced exactly.
    """
    by_class: dict = {}
    for ells, value in samples.items():
        if len(ells) != arity:
            raise InvalidRange("sample arity mismatch")
        I = frozenset(i + 1 for i, l in enumerate(ells) if l % 2)
        by_class.setdefault(I, {})[tuple(Fraction(l) ** 2 for l in ells)] = value

    classes = {}
    for I, data in sorted(by_class.items(), key=lambda kv: sorted(kv[0])):
        axes = []
        for i in range(arity):
            vals = sorted({pt[i] for pt in data})
            if len(vals) < degree + 1:
                raise InsufficientSamples(
                    f"class {sorted(I)} axis {i}: {len(vals)} values, "
                    f"need {degree + 1}")
            axes.append(vals[:degree + 1])
        missing = [pt for pt in itertools.product(*axes) if pt not in data]
        if missing:
            raise InsufficientSamples(
                f"class {sorted(I)} misses grid points, e.g. {missing[0]}")
        poly = _tensor_interpolate(axes, lambda pt: data[pt], arity)
        for pt, value in sorted(data.items()):
            if all(pt[i] in axes[i] for i in range(arity)):
                continue
            if not poly(pt) == value:
                raise NotQuasiPolynomial(
                    f"held-out sample at squares {pt} off the fitted class")
        classes[I] = poly
    return QuasiPolynomial(arity, classes)
