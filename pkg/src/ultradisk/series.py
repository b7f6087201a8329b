"""Truncated bounded power series on the open unit disk.

Provides Gauss norms, Newton-polygon zero counting, recentering, closed-disk
sup-norms, the local zero factor ``xi``, and the zero-profile dual
representation.  Everything is computed in exact rational-exponent
arithmetic; results that could be disturbed by coefficients hidden behind a
truncation or a tail bound are refused rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .errors import (
    CenterOutsideDisk,
    IndeterminateMag,
    UncertifiedRadius,
    ZeroSeries,
)
from .valfield import (
    Mag,
    QLike,
    Scalar,
    _frac,
    _min_trunc,
    add,
    inv,
    mag,
    mag_pow,
    mul,
    neg,
    sample_point,
    scale,
    spow,
    sub,
    truncate,
)

#: region selectors for count_zeros
CIRCLE = "circle"
CLOSED = "closed"
OPEN = "open"


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients ``a_0..a_N`` plus a certified bound on all later ones.

    ``gauss_tail`` bounds ``|a_n|`` for every ``n > N``; the zero magnitude
    marks a polynomial, for which every downstream result is exact.
    """

    coeffs: tuple
    gauss_tail: Mag = Mag.zero()

    @staticmethod
    def from_coeffs(coeffs: Sequence[Scalar], gauss_tail: Mag = Mag.zero()) -> "PowerSeries":
        cs = tuple(coeffs) if coeffs else (Scalar.zero(),)
        return PowerSeries(cs, gauss_tail)

    @staticmethod
    def one() -> "PowerSeries":
        return PowerSeries((Scalar.one(),))

    @staticmethod
    def z() -> "PowerSeries":
        return PowerSeries((Scalar.zero(), Scalar.one()))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, n: int) -> Scalar:
        return self.coeffs[n] if n < len(self.coeffs) else Scalar.zero()

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        return ps_add(self, other)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        return ps_mul(self, other)


def ps_add(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    n = max(len(f.coeffs), len(g.coeffs))
    coeffs = tuple(add(f.coeff(i), g.coeff(i)) for i in range(n))
    tail = f.gauss_tail if g.gauss_tail < f.gauss_tail else g.gauss_tail
    return PowerSeries(coeffs, tail)


def ps_shift(f: PowerSeries, k: int) -> PowerSeries:
    """Multiply by ``z**k``."""
    return PowerSeries((Scalar.zero(),) * k + f.coeffs, f.gauss_tail)


def ps_scale(f: PowerSeries, s: Scalar) -> PowerSeries:
    tail = f.gauss_tail
    if not tail.is_zero:
        tail = tail * mag(s)
    return PowerSeries(tuple(mul(c, s) for c in f.coeffs), tail)


def ps_mul(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Cauchy product; exact for polynomials.

    With a nonzero tail on either factor the product's own tail is the
    pessimistic ``max(T_f*||g||, ||f||*T_g)`` and the known coefficients
    keep only the certainty the inputs support.
    """
    n = len(f.coeffs) + len(g.coeffs) - 1
    coeffs = []
    for k in range(n):
        acc = Scalar.zero()
        for i in range(max(0, k - g.degree), min(k, f.degree) + 1):
            acc = add(acc, mul(f.coeffs[i], g.coeffs[k - i]))
        coeffs.append(acc)
    tail = Mag.zero()
    if not f.gauss_tail.is_zero or not g.gauss_tail.is_zero:
        nf = _known_norm_bound(f)
        ng = _known_norm_bound(g)
        tail = max(f.gauss_tail * ng, nf * g.gauss_tail, f.gauss_tail * g.gauss_tail)
        # cross terms with the tails also contaminate the known coefficients
        out = []
        for k, c in enumerate(coeffs):
            bounds = []
            if not g.gauss_tail.is_zero and k > g.degree:
                bounds.append(nf * g.gauss_tail)
            if not f.gauss_tail.is_zero and k > f.degree:
                bounds.append(f.gauss_tail * ng)
            tr = c.trunc
            for b in bounds:
                if not b.is_zero:
                    tr = _min_trunc(tr, b.q)
            out.append(truncate(c, tr) if tr is not None else c)
        coeffs = out
    return PowerSeries(tuple(coeffs), tail)


def _known_norm_bound(f: PowerSeries) -> Mag:
    """Upper bound on sup|a_n| over the known range, from leading terms."""
    out = f.gauss_tail
    for c in f.coeffs:
        if c.terms:
            m = Mag(c.terms[0][0])
        elif c.trunc is not None:
            m = Mag(c.trunc)
        else:
            continue
        if out < m:
            out = m
    return out


def ps_eval(f: PowerSeries, x: Scalar) -> Scalar:
    """Evaluate the known part at ``x`` (Horner); |x| < 1 tail absorbed as trunc."""
    acc = Scalar.zero()
    for c in reversed(f.coeffs):
        acc = add(mul(acc, x), c)
    if not f.gauss_tail.is_zero:
        v = mag(x)
        if v.is_zero:
            return acc
        bound = f.gauss_tail.q + (len(f.coeffs)) * v.q
        acc = truncate(acc, _min_trunc(acc.trunc, bound))
    return acc


# ---------------------------------------------------------------------------
# Newton data


@dataclass(frozen=True)
class CriticalRadius:
    radius: Mag
    mu: int
    nu: int
    count: int
    certified: bool


@dataclass(frozen=True)
class NewtonData:
    """Lower convex hull of ``(n, -log|a_n|)`` and what it certifies.

    ``radii`` lists the critical radii below 1 in increasing order; the
    count on each circle is the horizontal edge length.  ``constraints``
    holds ``(index, exponent-bound)`` pairs for coefficients that are only
    known to be smaller than ``2**-bound`` (truncation remnants and the
    tail); data at a radius is certified when no such coefficient can reach
    the maximum there.
    """

    vertices: tuple
    radii: tuple
    ord_at_zero: int
    constraints: tuple

    def _hull_min(self, rho: Fraction) -> Fraction:
        return min(q + n * rho for n, q in self.vertices)

    def certified_at(self, r: Mag) -> bool:
        """Exactness of mu/nu/count data at radius ``r`` (0 < r < 1)."""
        if r.is_zero or r.q <= 0:
            return False
        rho = r.q
        m = self._hull_min(rho)
        return all(qc + nc * rho > m for nc, qc in self.constraints)

    def certified_below(self, r: Mag) -> bool:
        """Certification over every radius in ``(0, r]`` at once."""
        if not self.certified_at(r):
            return False
        rho = r.q
        breakpoints = [cr.radius.q for cr in self.radii if cr.radius.q > rho]
        nmin = min(n for n, _ in self.vertices)
        vmin = next(q for n, q in self.vertices if n == nmin)
        for nc, qc in self.constraints:
            for b in breakpoints:
                if qc + nc * b <= self._hull_min(b):
                    return False
            # behaviour as rho -> infinity: the hull follows its lowest index
            if nc < nmin or (nc == nmin and qc <= vmin):
                return False
        return True

    def mu_nu_at(self, r: Mag) -> tuple:
        """Extreme indices attaining ``max |a_n| r^n`` (exact at certified r)."""
        rho = r.q
        best = self._hull_min(rho)
        idx = [n for n, q in self.vertices if q + n * rho == best]
        return min(idx), max(idx)


def _lower_hull(points):
    """Monotone chain; collinear interior points are dropped so hull
    vertices are exactly the extreme indices of each maximal segment."""
    pts = sorted(points)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # pop while the middle point is on or above the segment
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton(f: PowerSeries) -> NewtonData:
    """Critical radii, their extreme indices, and per-circle zero counts."""
    points = []
    constraints = []
    for n, c in enumerate(f.coeffs):
        if c.terms:
            points.append((n, c.terms[0][0]))
        elif c.trunc is not None:
            constraints.append((n, c.trunc))
    if not points:
        raise ZeroSeries("series with no provably nonzero coefficient")
    if not f.gauss_tail.is_zero:
        constraints.append((len(f.coeffs), f.gauss_tail.q))
    hull = _lower_hull(points)
    nd = NewtonData(tuple(hull), (), hull[0][0], tuple(constraints))
    radii = []
    for (n1, q1), (n2, q2) in zip(hull, hull[1:]):
        slope = Fraction(q2 - q1, n2 - n1)
        if slope < 0:
            r = Mag(-slope)
            radii.append(
                CriticalRadius(r, n1, n2, n2 - n1, nd.certified_at(r))
            )
    return NewtonData(tuple(hull), tuple(radii), hull[0][0], tuple(constraints))


def count_zeros(f: PowerSeries, r: Mag, region: str = CIRCLE) -> int:
    """Zeros (with multiplicity) on C(0,r), in D+(0,r), or in D-(0,r)."""
    if r.is_zero or r.q <= 0:
        raise UncertifiedRadius("zero counting needs a radius in (0, 1)")
    nd = newton(f)
    if not nd.certified_at(r):
        raise UncertifiedRadius(
            f"truncation tail may disturb the polygon at radius 2^-{r.q}"
        )
    mu, nu = nd.mu_nu_at(r)
    if region == CIRCLE:
        return nu - mu
    if region == CLOSED:
        return nu
    if region == OPEN:
        return mu
    raise ValueError(f"unknown region {region!r}")


def count_zeros_at(f: PowerSeries, center: Scalar, r: Mag, region: str = CLOSED) -> int:
    """Zero count in a disk around ``center``, via recentering."""
    return count_zeros(translate(f, center), r, region)


# ---------------------------------------------------------------------------
# norms and evaluation


def gauss_norm_info(f: PowerSeries) -> tuple:
    """(max over known coefficient magnitudes, certified flag).

    The value is the exact Gauss norm when it dominates the tail bound and
    every truncation remnant; otherwise it is a certified lower bound.
    """
    known = Mag.zero()
    have_known = False
    bounds = [f.gauss_tail]
    all_exact_zero = True
    for c in f.coeffs:
        if c.terms:
            have_known = True
            m = Mag(c.terms[0][0])
            if known < m:
                known = m
        elif c.trunc is not None:
            all_exact_zero = False
            bounds.append(Mag(c.trunc))
    if not have_known:
        if all_exact_zero and f.gauss_tail.is_zero:
            return Mag.zero(), True
        raise IndeterminateMag("no coefficient has a determinate magnitude")
    certified = all(b <= known for b in bounds)
    return known, certified


def gauss_norm(f: PowerSeries) -> Mag:
    return gauss_norm_info(f)[0]


def translate(f: PowerSeries, z0: Scalar, order: Optional[int] = None) -> PowerSeries:
    """Recenter: coefficients of f(z0 + w) as a series in w.

    Exact for polynomials; a nonzero tail propagates unchanged and also
    tightens each output coefficient's truncation by |z0|**(N+1-m) * tail,
    since the unknown high coefficients feed every binomial column.
    """
    v = mag(z0)
    if not (v < Mag.one()):
        raise CenterOutsideDisk(f"|z0| = {v} is not < 1")
    n_in = len(f.coeffs)
    n_out = n_in if order is None else min(order + 1, n_in)
    if z0.is_exact_zero:
        return PowerSeries(f.coeffs[:n_out], f.gauss_tail)
    powers = [Scalar.one()]
    for _ in range(n_in - 1):
        powers.append(mul(powers[-1], z0))
    out = []
    for m in range(n_out):
        acc = Scalar.zero()
        for n in range(m, n_in):
            acc = add(acc, scale(mul(f.coeffs[n], powers[n - m]), comb(n, m)))
        if not f.gauss_tail.is_zero:
            bound = f.gauss_tail.q + (n_in - m) * v.q
            acc = truncate(acc, _min_trunc(acc.trunc, bound))
        out.append(acc)
    return PowerSeries(tuple(out), f.gauss_tail)


def point_mag(f: PowerSeries, z0: Scalar) -> Mag:
    """|f(z0)| — the magnitude of the recentered constant term."""
    v = mag(z0)
    if not (v < Mag.one()):
        raise CenterOutsideDisk(f"|z0| = {v} is not < 1")
    return mag(ps_eval(f, z0))


def disk_norm(f: PowerSeries, center: Scalar, r: Mag) -> Mag:
    """Sup of |f| over the closed disk D+(center, r); exact, multiplicative."""
    v = mag(center)
    if not (v < Mag.one()):
        raise CenterOutsideDisk(f"|center| = {v} is not < 1")
    if r.is_zero:
        return point_mag(f, center)
    if r.q <= 0:
        raise UncertifiedRadius("disk radius must be < 1")
    g = translate(f, center)
    rho = r.q
    best: Optional[Fraction] = None
    pending = []
    for m, c in enumerate(g.coeffs):
        if c.terms:
            e = c.terms[0][0] + m * rho
            if best is None or e < best:
                best = e
        elif c.trunc is not None:
            pending.append(c.trunc + m * rho)
    if not g.gauss_tail.is_zero:
        pending.append(g.gauss_tail.q + len(g.coeffs) * rho)
    if best is None:
        if pending:
            raise UncertifiedRadius("no certified coefficient dominates the disk")
        return Mag.zero()
    if any(p < best for p in pending):
        raise UncertifiedRadius(
            "truncation remnants could exceed the known supremum"
        )
    return Mag(best)


def circle_prefactor(f: PowerSeries, circle: Mag) -> Mag:
    """The ratio (sup-norm over an inscribed disk) / xi on a given circle.

    Equals ``|a_nu| * R**mu`` with mu, nu the extreme polygon indices at
    R — a purely local quantity, valid whether or not R is critical and
    whether or not f vanishes at the origin.
    """
    nd = newton(f)
    if not nd.certified_at(circle):
        raise UncertifiedRadius(f"polygon uncertified at 2^-{circle.q}")
    m, n = nd.mu_nu_at(circle)
    a_nu = f.coeffs[n]
    return Mag(a_nu.terms[0][0] + m * circle.q)


def xi(f: PowerSeries, center: Scalar, r: Mag) -> Mag:
    """The local zero factor of the disk D+(center, r).

    1 when the circle through the center carries no zeros; otherwise
    r**(zeros in the disk) times the distances to the circle's farther
    zeros.  Computed coefficient-side as disk_norm / circle prefactor, so
    no zero positions are needed.
    """
    R = mag(center)
    if R.is_zero or not (R < Mag.one()):
        raise CenterOutsideDisk("xi needs 0 < |center| < 1")
    if r.is_zero or not (r < R):
        raise CenterOutsideDisk(
            "xi needs 0 < r < |center| so the disk sits inside its circle"
        )
    nd = newton(f)
    if not nd.certified_at(R):
        raise UncertifiedRadius(f"polygon uncertified at 2^-{R.q}")
    mu, nu = nd.mu_nu_at(R)
    if mu == nu:
        return Mag.one()
    return disk_norm(f, center, r) / circle_prefactor(f, R)


# ---------------------------------------------------------------------------
# zero profiles


@dataclass(frozen=True)
class ZeroProfile:
    """A function recorded by |f(0)| and its multiset of zeros in the disk."""

    unit_mag: Mag
    zeros: tuple  # of (point: Scalar, multiplicity: int)

    @staticmethod
    def make(unit_mag: Mag, zeros) -> "ZeroProfile":
        if unit_mag.is_zero:
            raise ValueError("profile unit magnitude must be nonzero")
        zs = []
        for w, m in zeros:
            if m <= 0:
                raise ValueError("multiplicities must be positive")
            if not (mag(w) < Mag.one()) or mag(w).is_zero:
                raise ValueError("profile zeros must satisfy 0 < |w| < 1")
            zs.append((w, int(m)))
        return ZeroProfile(unit_mag, tuple(zs))

    def circle_counts(self) -> list:
        """Per-circle (radius, count) pairs, radii increasing."""
        acc: dict = {}
        for w, m in self.zeros:
            q = mag(w).q
            acc[q] = acc.get(q, 0) + m
        return [(Mag(q), acc[q]) for q in sorted(acc, reverse=True)]

    def norm(self) -> Mag:
        """Gauss norm: unit divided by the product of zero magnitudes."""
        out = self.unit_mag
        for w, m in self.zeros:
            out = out / mag_pow(mag(w), m)
        return out


def zp_to_series(p: ZeroProfile, order: Optional[QLike] = None) -> PowerSeries:
    """Expand ``unit * prod (1 - z/w)**m`` as a polynomial.

    Computed as ``unit * prod (w - z)**m / prod w**m`` so only one scalar
    inverse is needed; for monomial zeros the result is fully exact, and
    coefficient magnitudes are exact in every case.
    """
    f = PowerSeries((sample_point(p.unit_mag),))
    denom = Scalar.one()
    for w, m in p.zeros:
        factor = PowerSeries((w, Scalar.rational(-1)))
        for _ in range(m):
            f = ps_mul(f, factor)
        denom = mul(denom, spow(w, m))
    if order is None:
        spread = sum(abs(mag(w).q) * m for w, m in p.zeros)
        order = 2 * spread + 4
    return ps_scale(f, inv(denom, order))


def zp_circle_value(p: ZeroProfile, z: Scalar) -> Mag:
    """|f(z)| straight from the profile.

    On a zero-carrying circle this is the unit times the distances to that
    circle's zeros, rescaled by the inner circles; strictly between
    circles only the radii enter.
    """
    R = mag(z)
    if not (R < Mag.one()):
        raise CenterOutsideDisk("evaluation point must lie in the disk")
    value_q = Fraction(0)
    inner = 0
    for radius, count in p.circle_counts():
        if R < radius:
            break
        if radius == R:
            for w, m in p.zeros:
                if mag(w) == R:
                    d = mag(sub(z, w))
                    if d.is_zero:
                        return Mag.zero()
                    value_q += m * d.q
            value_q += R.q * inner
            value_q -= radius.q * count
            inner = None  # circle term replaces the generic power of R
            break
        value_q -= radius.q * count
        inner += count
    if inner is not None:
        value_q += R.q * inner
    return p.unit_mag * Mag(value_q)
