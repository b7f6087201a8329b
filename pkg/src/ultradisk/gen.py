"""Seeded random instances for the randomized suites.

Exponents are drawn from {p/q : |p| <= 12, q <= 6} and coefficients from
small integers, so every failing case can be replayed from its seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import InfeasibleHorizon, PrescriptionError
from .prescribe import Prescription, make_plan
from .series import ZeroProfile
from .valfield import Mag, Scalar, add, mag, sample_point, scale

MAX_NUM = 12
MAX_DEN = 6


def rand_exponent(rng: random.Random, lo=Fraction(1, 6), hi=Fraction(12)) -> Fraction:
    """A random positive exponent p/q with q <= 6, clamped to [lo, hi]."""
    for _ in range(64):
        den = rng.randint(1, MAX_DEN)
        num = rng.randint(1, MAX_NUM)
        q = Fraction(num, den)
        if lo <= q <= hi:
            return q
    return lo


def rand_coeff(rng: random.Random) -> int:
    c = 0
    while c == 0:
        c = rng.randint(-9, 9)
    return c


def rand_point_on_circle(rng: random.Random, q: Fraction, fuzz: bool = True) -> Scalar:
    """A point of magnitude exactly 2^-q, sometimes with extra small terms."""
    z = Scalar.monomial(q, rand_coeff(rng))
    if fuzz and rng.random() < 0.5:
        extra = q + Fraction(rng.randint(1, 6), rng.randint(1, 3))
        z = add(z, Scalar.monomial(extra, rand_coeff(rng)))
    return z


def rand_zero_profile(rng: random.Random, max_factors: int = 8) -> ZeroProfile:
    """A product of at most ``max_factors`` linear factors with zeros in the
    open unit disk, recorded as a profile."""
    n = rng.randint(1, max_factors)
    circle_qs = sorted(
        {rand_exponent(rng, Fraction(1, 6), Fraction(6)) for _ in range(rng.randint(1, 3))}
    )
    zeros: dict = {}
    used: list = []
    budget = n
    while budget > 0:
        q = rng.choice(circle_qs)
        mult = rng.randint(1, min(2, budget))
        for _ in range(16):
            w = rand_point_on_circle(rng, q)
            if all(not (w == u) for u in used):
                break
        used.append(w)
        zeros[w] = zeros.get(w, 0) + mult
        budget -= mult
    unit = Mag(rand_exponent(rng, Fraction(0), Fraction(3))) if rng.random() < 0.3 else Mag.one()
    return ZeroProfile.make(unit, list(zeros.items()))


def rand_eval_point(rng: random.Random, profile: ZeroProfile) -> Scalar:
    """A point on or strictly between the profile's critical circles."""
    qs = sorted({mag(w).q for w, _ in profile.zeros})
    mode = rng.random()
    if mode < 0.6 or len(qs) == 0:
        # on a circle, possibly near one of the zeros
        q = rng.choice(qs) if qs else rand_exponent(rng, Fraction(1, 6), Fraction(6))
        if qs and rng.random() < 0.5:
            w, _ = rng.choice(profile.zeros)
            off = mag(w).q + Fraction(rng.randint(1, 6), rng.randint(1, 2))
            return add(w, Scalar.monomial(off, rand_coeff(rng)))
        return rand_point_on_circle(rng, q)
    # strictly between circles (or inside the first / outside the last)
    anchors = [max(qs) + 2] + qs + [min(Fraction(1, 12), min(qs) / 2)]
    anchors.sort(reverse=True)
    i = rng.randrange(len(anchors) - 1)
    hi, lo = anchors[i], anchors[i + 1]
    q = (hi + lo) / 2
    if q in qs or q <= 0:
        q = lo + (hi - lo) / 3
    return rand_point_on_circle(rng, q, fuzz=False)


def rand_prescription(
    rng: random.Random, max_circles: int = 4, max_per_circle: int = 3, stages: int = 2
) -> tuple:
    """A random feasible prescription plus its plan.

    Samples a steep inner circle and shallow outer circles carrying enough
    following mass, then rejects geometries that fail the stage
    inequality; the seed fully determines the outcome.
    """
    for _ in range(500):
        n_circles = rng.randint(2, max_circles)
        qs = [Fraction(rng.randint(25, 35), 6)]  # inner circle, well separated
        outer = sorted(
            {Fraction(rng.randint(1, 6), 6) for _ in range(n_circles - 1)},
            reverse=True,
        )
        qs.extend(outer)
        counts = [rng.randint(1, max_per_circle)]
        counts.extend(rng.randint(2, max_per_circle) for _ in outer)
        targets = []
        for q, k in zip(qs, counts):
            eps_q = q + Fraction(rng.randint(1, 6), 6)
            for j in range(1, k + 1):
                targets.append((scale(sample_point(Mag(q)), j), Mag(eps_q)))
        try:
            p = Prescription.make(targets)
            plan = make_plan(p, stages)
            return p, plan
        except (InfeasibleHorizon, PrescriptionError):
            continue
    raise RuntimeError("could not sample a feasible prescription")
