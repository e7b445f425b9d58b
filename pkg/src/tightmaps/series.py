"""Exact truncated multivariate power series over the rationals.

The ring has one vertex-weight variable t, whose exponent may be any
half-integer (stored doubled, so ``t2 = 3`` means t^{3/2}), and face-weight
variables t_1, t_2, ... with nonnegative integer exponents.  Every variable
has grade 1 and a series carries ``order2``, the doubled total grade up to
which its terms are trusted; terms above it are dropped on construction.

Negative t exponents are permitted so that ratios such as R'/R or S'/sqrt(R)
stay inside the type.  Genuine generating functions are pole-free; callers
assert that with :meth:`Series.assert_entire` before exposing a value.

A monomial is the pair ``(t2, faces)`` with ``faces`` a sorted tuple of
``(face_index, exponent)`` entries, zero exponents never stored.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import isqrt

from .errors import (
    BeyondTruncation,
    HalfIntegerDifferentiation,
    LogOfNonUnit,
    NotASquare,
    ZeroConstantTerm,
)

Monomial = tuple[int, tuple[tuple[int, int], ...]]

ONE_MON: Monomial = (0, ())


def monomial(t2: int = 0, faces: dict[int, int] | None = None) -> Monomial:
    """Build a canonical monomial key from a doubled t-exponent and face dict."""
    if not faces:
        return (t2, ())
    items = tuple(sorted((k, e) for k, e in faces.items() if e != 0))
    for k, e in items:
        if k < 1 or e < 0:
            raise ValueError(f"bad face exponent t_{k}^{e}")
    return (t2, items)


def grade2(mon: Monomial) -> int:
    """Doubled total grade of a monomial."""
    t2, faces = mon
    return t2 + 2 * sum(e for _, e in faces)


def _mul_mon(a: Monomial, b: Monomial) -> Monomial:
    if not a[1]:
        return (a[0] + b[0], b[1])
    if not b[1]:
        return (a[0] + b[0], a[1])
    d = dict(a[1])
    for k, e in b[1]:
        d[k] = d.get(k, 0) + e
    return (a[0] + b[0], tuple(sorted(d.items())))


def _omin(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _oadd(a: int | None, b: int | None) -> int | None:
    if a is None or b is None:
        return None
    return a + b


class Series:
    """Immutable sparse series; ``terms`` maps monomials to nonzero Fractions."""

    __slots__ = ("terms", "order2")

    def __init__(self, terms: dict[Monomial, Fraction], order2: int | None):
        clean: dict[Monomial, Fraction] = {}
        for mon, c in terms.items():
            if c == 0:
                continue
            if order2 is not None and grade2(mon) > order2:
                continue
            clean[mon] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean
        self.order2 = order2

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(order2: int | None = None) -> "Series":
        return Series({}, order2)

    @staticmethod
    def const(c, order2: int | None = None) -> "Series":
        return Series({ONE_MON: Fraction(c)}, order2)

    @staticmethod
    def t_power(t2: int, order2: int | None = None) -> "Series":
        """t^(t2/2) as a series."""
        return Series({(t2, ()): Fraction(1)}, order2)

    @staticmethod
    def face_var(k: int, order2: int | None = None) -> "Series":
        return Series({monomial(0, {k: 1}): Fraction(1)}, order2)

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def valuation2(self) -> int | None:
        """Lower bound on the doubled grade of the first nonzero term."""
        if self.terms:
            return min(grade2(m) for m in self.terms)
        return None if self.order2 is None else self.order2 + 1

    def min_t2(self) -> int:
        if not self.terms:
            return 0
        return min(m[0] for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE_MON, Fraction(0))

    def coefficient(self, mon: Monomial) -> Fraction:
        """Exact coefficient; error past the trusted grade."""
        if self.order2 is not None and grade2(mon) > self.order2:
            raise BeyondTruncation(f"grade {grade2(mon)}/2 beyond order {self.order2}/2")
        return self.terms.get(mon, Fraction(0))

    def assert_entire(self, exc=None) -> "Series":
        """Check that no monomial has a negative t exponent."""
        if self.terms and self.min_t2() < 0:
            raise (exc or LogOfNonUnit)(f"series has a t-pole: {self}")
        return self

    # -- arithmetic ----------------------------------------------------------

    def truncate(self, order2: int | None) -> "Series":
        return Series(dict(self.terms), _omin(self.order2, order2))

    def __neg__(self) -> "Series":
        return Series({m: -c for m, c in self.terms.items()}, self.order2)

    def __add__(self, other) -> "Series":
        other = _coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Series(out, _omin(self.order2, other.order2))

    __radd__ = __add__

    def __sub__(self, other) -> "Series":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Series":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Series":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Series.zero(self.order2)
            return Series({m: c * other for m, c in self.terms.items()}, self.order2)
        other = _coerce(other)
        # min(N_a, N_b), corrected downward when Laurent valuations are negative
        va, vb = self.valuation2(), other.valuation2()
        va = 0 if va is None else min(va, 0)
        vb = 0 if vb is None else min(vb, 0)
        order2 = _omin(_oadd(self.order2, vb), _oadd(other.order2, va))
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            ga = grade2(ma)
            for mb, cb in other.terms.items():
                if order2 is not None and ga + grade2(mb) > order2:
                    continue
                m = _mul_mon(ma, mb)
                s = out.get(m, Fraction(0)) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Series(out, order2)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Series":
        if n < 0:
            raise ValueError("use invert/divide_exact for negative powers")
        result = Series.const(1, None)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift_t(self, delta2: int) -> "Series":
        """Multiply by the exact power t^(delta2/2)."""
        return Series({(m[0] + delta2, m[1]): c for m, c in self.terms.items()},
                      _oadd(self.order2, delta2))

    def __eq__(self, other) -> bool:
        """Exact equality of term collections up to the common truncation."""
        if not isinstance(other, (Series, int, Fraction)):
            return NotImplemented
        other = _coerce(other)
        n = _omin(self.order2, other.order2)
        a = self.truncate(n).terms
        b = other.truncate(n).terms
        return a == b

    __hash__ = None  # type: ignore[assignment]

    # -- inversion, roots, logs ----------------------------------------------

    def invert(self) -> "Series":
        """Reciprocal of a series with nonzero rational constant term."""
        c = self.constant_term()
        if c == 0:
            raise ZeroConstantTerm("inversion needs a nonzero constant term")
        v = self.valuation2()
        if v is not None and v < 0:
            raise ZeroConstantTerm("inversion of a series with negative grades")
        w = (self * Fraction(1, c)) - 1
        if w.is_zero():
            return Series.const(Fraction(1, c), self.order2)
        if self.order2 is None:
            raise ZeroConstantTerm("cannot invert an untruncated non-constant series")
        acc = Series.const(1, self.order2)
        for _ in range(self.order2):
            acc = Series.const(1, self.order2) - w * acc
        return acc * Fraction(1, c)

    def sqrt(self) -> "Series":
        """Square root; the argument must be t^m times a unit square."""
        if self.is_zero():
            return self
        p = self.min_t2()
        if p % 2:
            raise NotASquare("odd t-valuation has no square root in half steps")
        u = self.shift_t(-p)
        c = u.constant_term()
        if c <= 0:
            raise NotASquare("unit part lacks a positive rational constant term")
        cn, cd = c.numerator, c.denominator
        rn, rd = isqrt(cn), isqrt(cd)
        if rn * rn != cn or rd * rd != cd:
            raise NotASquare(f"constant term {c} is not a rational square")
        r0 = Fraction(rn, rd)
        w = u * Fraction(1, c) - 1
        acc = Series.const(1, u.order2)
        if not w.is_zero():
            if u.order2 is None:
                raise NotASquare("cannot expand sqrt of an untruncated series")
            # binomial series (1+w)^{1/2}, Horner over the finite grade range
            coeffs = [_binom_half(j) for j in range(u.order2 + 1)]
            acc = Series.const(coeffs[-1], u.order2)
            for cf in reversed(coeffs[:-1]):
                acc = acc * w + Series.const(cf, u.order2)
        return (acc * r0).shift_t(p // 2)

    def log_unit(self) -> "Series":
        """log of a series with constant term exactly 1 (and no poles)."""
        if self.constant_term() != 1:
            raise LogOfNonUnit("log needs constant term exactly 1")
        v = self.valuation2()
        if v is not None and v < 0:
            raise LogOfNonUnit("log of a series with negative grades")
        w = self - 1
        if w.is_zero():
            return Series.zero(self.order2)
        if self.order2 is None:
            raise LogOfNonUnit("cannot expand log of an untruncated series")
        n = self.order2
        acc = Series.const(Fraction((-1) ** (n + 1), n), n)
        for j in range(n - 1, 0, -1):
            acc = acc * w + Series.const(Fraction((-1) ** (j + 1), j), n)
        return acc * w

    # -- calculus -------------------------------------------------------------

    def derive_t(self, integer_mode: bool = False) -> "Series":
        """Term-wise d/dt; one grade of information is lost."""
        out: dict[Monomial, Fraction] = {}
        for (t2, faces), c in self.terms.items():
            if t2 % 2 and integer_mode:
                raise HalfIntegerDifferentiation(f"t exponent {t2}/2 in integer mode")
            if t2 == 0:
                continue
            out[(t2 - 2, faces)] = c * Fraction(t2, 2)
        return Series(out, None if self.order2 is None else self.order2 - 2)

    def derive_face(self, k: int) -> "Series":
        """Term-wise d/dt_k; one grade of information is lost."""
        if k < 1:
            raise ValueError("face index must be >= 1")
        out: dict[Monomial, Fraction] = {}
        for (t2, faces), c in self.terms.items():
            d = dict(faces)
            e = d.get(k, 0)
            if not e:
                continue
            if e == 1:
                del d[k]
            else:
                d[k] = e - 1
            out[(t2, tuple(sorted(d.items())))] = c * e
        return Series(out, None if self.order2 is None else self.order2 - 2)

    def specialize_zero(self, ks) -> "Series":
        """Set the face weights t_k, k in ks, to zero (a ring homomorphism)."""
        ks = set(ks)
        out = {m: c for m, c in self.terms.items()
               if not any(k in ks for k, _ in m[1])}
        return Series(out, self.order2)

    def t_antiderivative(self) -> "Series":
        """Term-wise t-antiderivative with zero constant."""
        out: dict[Monomial, Fraction] = {}
        for (t2, faces), c in self.terms.items():
            if t2 == -2:
                raise ValueError("antiderivative of t^{-1} leaves the ring")
            out[(t2 + 2, faces)] = c / Fraction(t2 + 2, 2)
        return Series(out, None if self.order2 is None else self.order2 + 2)

    # -- display and JSON ------------------------------------------------------

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (grade2(kv[0]), kv[0][0], kv[0][1]))

    def __repr__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            parts = []
            for (t2, faces), c in self._sorted_terms()[:12]:
                bits = []
                if c != 1 or (t2 == 0 and not faces):
                    bits.append(str(c))
                if t2:
                    bits.append("t" if t2 == 2 else f"t^{Fraction(t2, 2)}")
                for k, e in faces:
                    bits.append(f"t{k}" if e == 1 else f"t{k}^{e}")
                parts.append("*".join(bits))
            if len(self.terms) > 12:
                parts.append("...")
            body = " + ".join(parts)
        tail = "" if self.order2 is None else f" + O(grade {Fraction(self.order2, 2)})"
        return body + tail

    def to_json_dict(self) -> dict:
        terms = []
        for (t2, faces), c in self._sorted_terms():
            terms.append({
                "t2": t2,
                "faces": {str(k): e for k, e in faces},
                "num": str(c.numerator),
                "den": str(c.denominator),
            })
        order = "inf" if self.order2 is None else f"{self.order2}/2"
        return {"order": order, "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @staticmethod
    def from_json_dict(data: dict) -> "Series":
        order = data["order"]
        order2 = None if order == "inf" else int(order.split("/")[0])
        terms: dict[Monomial, Fraction] = {}
        for entry in data["terms"]:
            mon = (int(entry["t2"]),
                   tuple(sorted((int(k), int(e)) for k, e in entry["faces"].items())))
            terms[mon] = Fraction(int(entry["num"]), int(entry["den"]))
        return Series(terms, order2)

    @staticmethod
    def from_json(text: str) -> "Series":
        return Series.from_json_dict(json.loads(text))


def _coerce(x) -> Series:
    if isinstance(x, Series):
        return x
    if isinstance(x, (int, Fraction)):
        return Series.const(x)
    raise TypeError(f"cannot coerce {type(x)} to Series")


_BINOM_HALF = [Fraction(1)]


def _binom_half(j: int) -> Fraction:
    """Binomial coefficient C(1/2, j)."""
    while len(_BINOM_HALF) <= j:
        n = len(_BINOM_HALF)
        _BINOM_HALF.append(_BINOM_HALF[-1] * (Fraction(1, 2) - (n - 1)) / n)
    return _BINOM_HALF[j]


def divide_exact(num: Series, den: Series) -> Series:
    """Exact division in the Laurent-in-t extension.

    The denominator is factored as t^(p/2) times a unit; the quotient may
    carry negative t exponents, which callers of public generating functions
    rule out with :meth:`Series.assert_entire`.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by the zero series")
    p = den.min_t2()
    unit = den.shift_t(-p)
    if unit.constant_term() == 0:
        raise ZeroConstantTerm("denominator is not t-power times a unit")
    return (num * unit.invert()).shift_t(-p)


def equal_upto(a: Series, b: Series, min_order2: int | None = None) -> bool:
    """Equality up to the common order, optionally demanding enough precision."""
    if min_order2 is not None:
        n = _omin(a.order2, b.order2)
        if n is not None and n < min_order2:
            raise BeyondTruncation(
                f"common order {n}/2 below required {min_order2}/2")
    return a == b
