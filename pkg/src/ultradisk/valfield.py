"""Exact arithmetic in a model nonarchimedean field.

The field is the fraction field of generalized power series in an
indeterminate ``t`` with rational exponents and rational coefficients,
truncated at a tracked order.  The absolute value is ``|x| = 2**(-v(x))``
where ``v`` is the least exponent, so the value group ``2**Q`` is dense in
the positive reals, and every magnitude is an exact rational exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import IndeterminateMag, ZeroToNonpositivePower

#: fixed base of the absolute value; |x| = BASE**(-v(x))
BASE = 2

QLike = Union[int, str, Fraction]


def _frac(x: QLike) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# magnitudes


@dataclass(frozen=True)
class Mag:
    """An attainable absolute value: ``2**(-q)`` for rational ``q``, or zero.

    ``q is None`` encodes the zero magnitude, which absorbs under
    multiplication and is smaller than every finite magnitude.
    """

    q: Optional[Fraction]

    @staticmethod
    def zero() -> "Mag":
        return Mag(None)

    @staticmethod
    def one() -> "Mag":
        return Mag(Fraction(0))

    @staticmethod
    def of(q: QLike) -> "Mag":
        return Mag(_frac(q))

    @property
    def is_zero(self) -> bool:
        return self.q is None

    @property
    def is_one(self) -> bool:
        return self.q == 0

    def __mul__(self, other: "Mag") -> "Mag":
        if self.is_zero or other.is_zero:
            return Mag.zero()
        return Mag(self.q + other.q)

    def __truediv__(self, other: "Mag") -> "Mag":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero magnitude")
        if self.is_zero:
            return Mag.zero()
        return Mag(self.q - other.q)

    def __pow__(self, e: QLike) -> "Mag":
        return mag_pow(self, e)

    # zero < every finite magnitude; finite ones compare by exponent, reversed
    def _lt(self, other: "Mag") -> bool:
        if self.is_zero:
            return not other.is_zero
        if other.is_zero:
            return False
        return self.q > other.q

    def __lt__(self, other: "Mag") -> bool:
        return self._lt(other)

    def __le__(self, other: "Mag") -> bool:
        return self == other or self._lt(other)

    def __gt__(self, other: "Mag") -> bool:
        return other._lt(self)

    def __ge__(self, other: "Mag") -> bool:
        return self == other or other._lt(self)

    def to_float(self) -> float:
        """Double-precision rendering, for display only."""
        if self.is_zero:
            return 0.0
        return float(BASE) ** float(-self.q)

    def __repr__(self) -> str:
        if self.is_zero:
            return "Mag(0)"
        return f"Mag(2^-{self.q})"


def mag_pow(m: Mag, e: QLike) -> Mag:
    """``m**e`` with rational ``e``; exact exponent scaling."""
    e = _frac(e)
    if m.is_zero:
        if e > 0:
            return Mag.zero()
        raise ZeroToNonpositivePower(f"zero magnitude to power {e}")
    return Mag(m.q * e)


def mag_max(mags: Iterable[Mag]) -> Mag:
    out = Mag.zero()
    for m in mags:
        if out < m:
            out = m
    return out


# ---------------------------------------------------------------------------
# field elements


def _norm_terms(items, trunc: Optional[Fraction]):
    acc: dict = {}
    for q, a in items:
        q = _frac(q)
        a = _frac(a)
        if trunc is not None and q >= trunc:
            continue
        acc[q] = acc.get(q, Fraction(0)) + a
    return tuple(sorted((q, a) for q, a in acc.items() if a != 0))


@dataclass(frozen=True)
class Scalar:
    """A truncated generalized power series in ``t``.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs with strictly
    increasing rational exponents and nonzero rational coefficients;
    exponents may be negative.  ``trunc`` is the order at which knowledge
    stops (``None`` means the element is known exactly): every term with
    exponent >= trunc is unknown.
    """

    terms: tuple
    trunc: Optional[Fraction] = None

    @staticmethod
    def make(items, trunc: Optional[QLike] = None) -> "Scalar":
        tr = None if trunc is None else _frac(trunc)
        return Scalar(_norm_terms(items, tr), tr)

    @staticmethod
    def zero() -> "Scalar":
        return Scalar((), None)

    @staticmethod
    def one() -> "Scalar":
        return Scalar(((Fraction(0), Fraction(1)),), None)

    @staticmethod
    def monomial(q: QLike, a: QLike = 1) -> "Scalar":
        a = _frac(a)
        if a == 0:
            return Scalar.zero()
        return Scalar(((_frac(q), a),), None)

    @staticmethod
    def rational(a: QLike) -> "Scalar":
        return Scalar.monomial(0, a)

    @property
    def is_exact_zero(self) -> bool:
        return not self.terms and self.trunc is None

    @property
    def is_determinate(self) -> bool:
        """True when the magnitude of the element is known exactly."""
        return bool(self.terms) or self.trunc is None

    def valuation_floor(self) -> Optional[Fraction]:
        """A rational v with v(self) >= v, or None for the exact zero."""
        if self.terms:
            return self.terms[0][0]
        return self.trunc  # None for the exact zero

    def __add__(self, other: "Scalar") -> "Scalar":
        return add(self, other)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return sub(self, other)

    def __neg__(self) -> "Scalar":
        return neg(self)

    def __mul__(self, other: "Scalar") -> "Scalar":
        return mul(self, other)

    def __pow__(self, n: int) -> "Scalar":
        return spow(self, n)

    def __repr__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            body = " + ".join(f"{a}*t^{q}" for q, a in self.terms)
        if self.trunc is None:
            return f"Scalar({body})"
        return f"Scalar({body} + O(t^{self.trunc}))"


def _min_trunc(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def mag(x: Scalar) -> Mag:
    """Absolute value of ``x``; exact whenever a leading term is known."""
    if x.terms:
        return Mag(x.terms[0][0])
    if x.trunc is None:
        return Mag.zero()
    raise IndeterminateMag(
        f"all known terms vanish below truncation order {x.trunc}"
    )


def add(x: Scalar, y: Scalar) -> Scalar:
    tr = _min_trunc(x.trunc, y.trunc)
    return Scalar(_norm_terms(list(x.terms) + list(y.terms), tr), tr)


def neg(x: Scalar) -> Scalar:
    return Scalar(tuple((q, -a) for q, a in x.terms), x.trunc)


def sub(x: Scalar, y: Scalar) -> Scalar:
    return add(x, neg(y))


def scale(x: Scalar, c: QLike) -> Scalar:
    c = _frac(c)
    if c == 0:
        return Scalar((), x.trunc)
    return Scalar(tuple((q, a * c) for q, a in x.terms), x.trunc)


def mul(x: Scalar, y: Scalar) -> Scalar:
    if x.is_exact_zero or y.is_exact_zero:
        return Scalar.zero()
    # error terms: known(x)*O(t^ty), O(t^tx)*known(y), O(t^tx)*O(t^ty)
    tr = None
    vx, vy = x.valuation_floor(), y.valuation_floor()
    if y.trunc is not None:
        tr = _min_trunc(tr, vx + y.trunc)
    if x.trunc is not None:
        tr = _min_trunc(tr, x.trunc + vy)
    acc: dict = {}
    for qx, ax in x.terms:
        for qy, ay in y.terms:
            q = qx + qy
            if tr is not None and q >= tr:
                continue
            acc[q] = acc.get(q, Fraction(0)) + ax * ay
    return Scalar(tuple(sorted((q, a) for q, a in acc.items() if a != 0)), tr)


def spow(x: Scalar, n: int) -> Scalar:
    if n < 0:
        raise ValueError("negative powers go through inv()")
    out = Scalar.one()
    base = x
    while n:
        if n & 1:
            out = mul(out, base)
        base = mul(base, base) if n > 1 else base
        n >>= 1
    return out


def truncate(x: Scalar, order: QLike) -> Scalar:
    """Forget all terms with exponent >= order; tightens the truncation."""
    order = _frac(order)
    tr = _min_trunc(x.trunc, order)
    return Scalar(tuple((q, a) for q, a in x.terms if q < tr), tr)


def inv(x: Scalar, order: QLike) -> Scalar:
    """Reciprocal of ``x`` by geometric-series expansion, truncated at ``order``.

    Needs a known leading term.  ``mul(x, inv(x, w))`` agrees with 1 on all
    exponents below ``w`` (less the precision already missing from ``x``).
    """
    if not x.terms:
        if x.trunc is None:
            raise ZeroDivisionError("inverse of the exact zero")
        raise IndeterminateMag(
            f"cannot invert: no known term below truncation {x.trunc}"
        )
    order = _frac(order)
    e, c = x.terms[0]
    lim = order
    if x.trunc is not None:
        lim = min(lim, x.trunc - 2 * e)
    head = Scalar.monomial(-e, Fraction(1) / c)
    if len(x.terms) == 1:
        # monomial inverse is exact up to the inherited truncation
        return Scalar(head.terms, None if x.trunc is None else lim)
    u = sub(mul(truncate(x, lim + e) if x.trunc is None else x, head), Scalar.one())
    # 1/x = head * sum (-u)^k; val(u) > 0 so the sum terminates below lim+e
    rel = lim + e
    total = Scalar.one()
    p = Scalar.one()
    while True:
        p = truncate(mul(p, neg(u)), rel)
        if not p.terms:
            break
        total = add(total, p)
    out = mul(head, total)
    return truncate(out, lim)


def provably_distinct(x: Scalar, y: Scalar) -> bool:
    """True when ``x - y`` has a known nonzero term (exact inequality)."""
    return bool(sub(x, y).terms)


def sample_point(m: Mag) -> Scalar:
    """The canonical witness ``t**q`` of a magnitude (0 for the zero Mag)."""
    if m.is_zero:
        return Scalar.zero()
    return Scalar.monomial(m.q, 1)


# ---------------------------------------------------------------------------
# exact comparison of sums of magnitudes


class MagSum:
    """An exact finite sum ``sum c_i * 2**(-q_i)`` with integer weights.

    Comparisons are decided exactly: after clearing exponent denominators
    the value becomes an integer polynomial in ``2**(1/d)``, which is
    reduced modulo ``X**d - 2`` (irreducible), so the value is zero iff the
    reduction vanishes; otherwise rational interval refinement of
    ``2**(1/d)`` decides the sign in finitely many steps.
    """

    __slots__ = ("items",)

    def __init__(self, items: Optional[dict] = None):
        self.items = {q: c for q, c in (items or {}).items() if c != 0}

    @staticmethod
    def from_mag(m: Mag, coeff: int = 1) -> "MagSum":
        if m.is_zero or coeff == 0:
            return MagSum()
        return MagSum({m.q: coeff})

    def __add__(self, other: "MagSum") -> "MagSum":
        out = dict(self.items)
        for q, c in other.items.items():
            out[q] = out.get(q, 0) + c
        return MagSum(out)

    def __sub__(self, other: "MagSum") -> "MagSum":
        out = dict(self.items)
        for q, c in other.items.items():
            out[q] = out.get(q, 0) - c
        return MagSum(out)

    def scaled(self, m: Mag) -> "MagSum":
        """Multiply by a single magnitude (exponent shift)."""
        if m.is_zero:
            return MagSum()
        return MagSum({q + m.q: c for q, c in self.items.items()})

    def sign(self) -> int:
        if not self.items:
            return 0
        d = math.lcm(*(q.denominator for q in self.items))
        # value = sum c_i x^{p_i} with x = 2^{1/d}; shift so powers are >= 0
        powers = {(-q) * d: c for q, c in self.items.items()}
        pmin = min(powers)
        poly = [0] * d
        for p, c in powers.items():
            p = int(p - pmin)
            a, b = divmod(p, d)
            poly[b] += c * (2**a)
        if not any(poly):
            return 0
        lo, hi = Fraction(1), Fraction(2)
        while True:
            lo_b = sum(c * (lo if c > 0 else hi) ** b for b, c in enumerate(poly) if c)
            hi_b = sum(c * (hi if c > 0 else lo) ** b for b, c in enumerate(poly) if c)
            if lo_b > 0:
                return 1
            if hi_b < 0:
                return -1
            mid = (lo + hi) / 2
            if mid**d <= 2:
                lo = mid
            else:
                hi = mid

    def __le__(self, other: "MagSum") -> bool:
        return (self - other).sign() <= 0

    def __lt__(self, other: "MagSum") -> bool:
        return (self - other).sign() < 0

    def __eq__(self, other) -> bool:
        return isinstance(other, MagSum) and (self - other).sign() == 0

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*2^-{q}" for q, c in sorted(self.items.items()))
        return f"MagSum({body or '0'})"
