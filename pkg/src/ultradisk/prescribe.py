"""Constructive prescription of zeros with norm targeting.

Builds a truncated bounded series with exactly one simple zero near each
prescribed center: a seed polynomial vanishing at the first two blocks of
circles, then repeated degree extensions that interpolate the correction
so the next block's points become exact zeros while everything already
placed is preserved.  Every stage is audited against its own Newton data.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DenseSetTooCoarse,
    DuplicateNodes,
    IndeterminatePivot,
    InfeasibleHorizon,
    PrescriptionError,
    SeparatorCollision,
    TargetOutOfRange,
    UncertifiedRadius,
    VerificationFailed,
)
from .series import (
    CIRCLE,
    OPEN,
    PowerSeries,
    count_zeros,
    gauss_norm,
    newton,
    ps_add,
    ps_eval,
    ps_scale,
    ps_shift,
    translate,
)
from .valfield import (
    Mag,
    QLike,
    Scalar,
    _frac,
    add,
    inv,
    mag,
    mul,
    neg,
    provably_distinct,
    sample_point,
    spow,
    sub,
    truncate,
)

#: granularity of derived tolerances: largest 2^(-q) with q in Z/6
DELTA_STEP = Fraction(1, 6)


def _delta_floor(m: Mag) -> Mag:
    """Largest magnitude 2^(-q), q a multiple of 1/6, that is <= m."""
    num = m.q / DELTA_STEP
    k = num.numerator // num.denominator
    if Fraction(k) < num:
        k += 1
    return Mag(k * DELTA_STEP)


@dataclass(frozen=True)
class CircleSpec:
    radius: Mag
    target_idx: tuple  # indices into Prescription.targets
    count: int
    delta: Mag


@dataclass(frozen=True)
class Prescription:
    """Pairwise disjoint target disks, one simple zero wanted in each."""

    targets: tuple  # of (center: Scalar, eps: Mag)
    circles: tuple  # of CircleSpec, radii increasing
    c_exponent: Fraction  # -log2 of the product of all |center|

    @staticmethod
    def make(targets) -> "Prescription":
        targets = tuple((z, e) for z, e in targets)
        if not targets:
            raise PrescriptionError("a prescription needs at least one target")
        mags = []
        for z, e in targets:
            v = mag(z)
            if v.is_zero or not (v < Mag.one()):
                raise PrescriptionError("target centers need 0 < |z| < 1")
            if e.is_zero or not (e < Mag.one()):
                raise PrescriptionError("tolerances need 0 < eps < 1")
            mags.append(v)
        for i in range(len(targets)):
            for j in range(i + 1, len(targets)):
                zi, ei = targets[i]
                zj, ej = targets[j]
                d = sub(zi, zj)
                if not d.terms:
                    raise PrescriptionError(f"targets {i} and {j} coincide")
                if not (max(ei, ej) < mag(d)):
                    raise PrescriptionError(
                        f"target disks {i} and {j} are not disjoint"
                    )
        by_circle: dict = {}
        for idx, v in enumerate(mags):
            by_circle.setdefault(v.q, []).append(idx)
        circles = []
        for q in sorted(by_circle, reverse=True):
            idxs = tuple(by_circle[q])
            eps_min = min(targets[i][1] for i in idxs)
            delta = _delta_floor(eps_min)
            # keep the tolerance strictly inside its own circle
            if not (delta < Mag(q)):
                delta = Mag(q + DELTA_STEP)
            circles.append(CircleSpec(Mag(q), idxs, len(idxs), delta))
        c_exp = sum(v.q for v in mags)
        return Prescription(targets, tuple(circles), c_exp)

    @property
    def radii(self) -> list:
        return [c.radius for c in self.circles]


@dataclass(frozen=True)
class StagePlan:
    """Block bookkeeping: breakpoints, per-block masses, separator radii.

    ``breakpoints`` are the 1-based circle counts N_1 < ... < N_{B-1}; the
    last block runs to the final circle.  ``separators[i]`` is the radius
    used by the extension that appends block ``i + 3`` (1-based), i.e. the
    classical S_2, S_3, ... in order.
    """

    breakpoints: tuple
    block_sizes: tuple
    separators: tuple

    @property
    def blocks(self) -> int:
        return len(self.block_sizes)


def _blocks_from_breakpoints(n_circles: int, breakpoints) -> list:
    """Circle index ranges (0-based, half-open) for each block."""
    out = []
    prev = 0
    for b in breakpoints:
        out.append(range(prev, b))
        prev = b
    out.append(range(prev, n_circles))
    return out


def _plan_feasible(p: Prescription, breakpoints) -> bool:
    blocks = _blocks_from_breakpoints(len(p.circles), breakpoints)
    sizes = [sum(p.circles[i].count for i in blk) for blk in blocks]
    for n in range(len(blocks) - 1):
        last = p.circles[blocks[n][-1]]
        lhs = last.radius.q * sizes[n + 1]
        rhs = p.c_exponent + max(
            p.circles[i].count * p.circles[i].delta.q for i in blocks[n]
        )
        if n == 0:
            if not lhs > rhs:
                return False
        elif not lhs >= rhs:
            return False
    return True


def _pick_separator(lo_q: Fraction, hi_q: Fraction, forbidden) -> Mag:
    """A rational exponent strictly inside (lo_q, hi_q) avoiding forbidden."""
    width = hi_q - lo_q
    for denom in (2, 4, 8, 16, 32, 64):
        for num in range(1, denom):
            cand = lo_q + width * Fraction(num, denom)
            if cand not in forbidden:
                return Mag(cand)
    raise SeparatorCollision("could not place a separator off the forbidden set")


def make_plan(
    p: Prescription, stages: int, forbidden: Sequence[Mag] = ()
) -> StagePlan:
    """Choose breakpoints satisfying the stage inequality chain.

    Every block but the last must be followed by enough zero mass:
    R_{N_n}^{M_{n+1}} <= c * min over the block of delta_i^{k_i} (strict
    for the first block).  Breakpoint tuples are tried in lexicographic
    order, so the result is deterministic.
    """
    if stages < 2:
        raise ValueError("a plan needs at least 2 stages")
    n_circles = len(p.circles)
    n_blocks = min(stages, n_circles)
    if n_blocks == 1:
        chosen: tuple = ()
    else:
        chosen = None
        for bps in itertools.combinations(range(1, n_circles), n_blocks - 1):
            if _plan_feasible(p, bps):
                chosen = bps
                break
        if chosen is None:
            raise InfeasibleHorizon(
                "no block structure satisfies the stage inequality chain"
            )
    blocks = _blocks_from_breakpoints(n_circles, chosen)
    sizes = tuple(sum(p.circles[i].count for i in blk) for blk in blocks)
    forbidden_qs = {m.q for m in forbidden if not m.is_zero}
    forbidden_qs.update(c.radius.q for c in p.circles)
    seps = []
    for j in range(2, len(blocks)):
        hi_q = p.circles[blocks[j - 1][-1]].radius.q  # last circle of block j
        lo_q = p.circles[blocks[j][0]].radius.q  # first circle of block j+1
        seps.append(_pick_separator(lo_q, hi_q, forbidden_qs))
        forbidden_qs.add(seps[-1].q)
    return StagePlan(tuple(chosen), sizes, tuple(seps))


# ---------------------------------------------------------------------------
# exact-elimination interpolation


def _cap(x: Scalar, order: Fraction) -> Scalar:
    """Bound term growth without destroying exactness when nothing is lost."""
    if x.trunc is None and (not x.terms or x.terms[-1][0] < order):
        return x
    return truncate(x, order)


def vandermonde_solve(
    nodes: Sequence[Scalar], values: Sequence[Scalar], order: QLike
) -> list:
    """Coefficients of the unique polynomial through (nodes, values).

    Gaussian elimination with magnitude pivoting at working truncation
    ``order``; the residual at each node vanishes below the certified
    order of the solution.
    """
    if len(nodes) != len(values):
        raise ValueError("nodes and values must have equal length")
    n = len(nodes)
    for i in range(n):
        for j in range(i + 1, n):
            if not provably_distinct(nodes[i], nodes[j]):
                raise DuplicateNodes(f"nodes {i} and {j} are not provably distinct")
    order = _frac(order)
    rows = []
    for i in range(n):
        row = [Scalar.one()]
        for _ in range(n - 1):
            row.append(_cap(mul(row[-1], nodes[i]), order))
        row.append(_cap(values[i], order))
        rows.append(row)
    perm = list(range(n))
    for col in range(n):
        pivot_at, pivot_mag = None, None
        for r in range(col, n):
            cell = rows[perm[r]][col]
            if cell.terms:
                m = mag(cell)
                if pivot_mag is None or pivot_mag < m:
                    pivot_at, pivot_mag = r, m
        if pivot_at is None:
            raise IndeterminatePivot(
                f"no certifiable pivot in column {col} at truncation {order}"
            )
        perm[col], perm[pivot_at] = perm[pivot_at], perm[col]
        prow = rows[perm[col]]
        pinv = inv(prow[col], order)
        for r in range(col + 1, n):
            row = rows[perm[r]]
            cell = row[col]
            if not cell.terms and cell.trunc is None:
                continue
            factor = _cap(mul(cell, pinv), order)
            for c in range(col, n + 1):
                row[c] = _cap(sub(row[c], mul(factor, prow[c])), order)
    coeffs: list = [None] * n
    for col in range(n - 1, -1, -1):
        row = rows[perm[col]]
        acc = row[n]
        for c in range(col + 1, n):
            acc = _cap(sub(acc, mul(row[c], coeffs[c])), order)
        coeffs[col] = _cap(mul(acc, inv(row[col], order)), order)
    for i in range(n):
        acc = Scalar.zero()
        for c in range(n - 1, -1, -1):
            acc = _cap(add(mul(acc, nodes[i]), coeffs[c]), order)
        res = _cap(sub(acc, values[i]), order)
        if res.terms:
            raise VerificationFailed(
                f"interpolation residual at node {i} has a certified nonzero term"
            )
    return coeffs


# ---------------------------------------------------------------------------
# stage extension


def _radius_table(nd) -> list:
    out = []
    for cr in nd.radii:
        if not cr.certified:
            raise UncertifiedRadius(
                f"stage audit needs certified data at 2^-{cr.radius.q}"
            )
        out.append((cr.radius.q, cr.mu, cr.nu, cr.count))
    return out


def _default_order_for(points: Sequence[Scalar], *mags: Mag) -> Fraction:
    worst = max(
        [abs(mag(x).q) for x in points]
        + [abs(m.q) for m in mags if not m.is_zero]
        + [Fraction(1)]
    )
    return 4 * worst


def extend_stage(
    P: PowerSeries,
    A2: Sequence[Scalar],
    A3: Sequence[Scalar],
    S: Mag,
    order: Optional[QLike] = None,
) -> PowerSeries:
    """Append one block: interpolate a correction so every A2 point stays a
    zero, every A3 point becomes a zero, and a full circle of auxiliary
    zeros lands on the separator S.

    Audited on exit: the polygon at and below max|A2| is unchanged, C(0,S)
    carries exactly ``len(A2)+1`` zeros, each A3 circle carries exactly its
    point count, and the interpolant's polygon agrees wherever the
    extension owns the circle.  Violations raise VerificationFailed.
    """
    if not A2 or not A3:
        raise ValueError("extend_stage needs nonempty A2 and A3")
    r2 = max(mag(x) for x in A2)
    r3 = min(mag(x) for x in A3)
    if not (r2 < S and S < r3):
        raise SeparatorCollision(
            f"separator 2^-{S.q} does not lie strictly between the blocks"
        )
    if order is None:
        order = _default_order_for(list(A2) + list(A3), S)
    order = _frac(order)
    D = P.degree
    w1 = sample_point(S)
    nodes = list(A2) + list(A3) + [w1]
    values = []
    for x in nodes:
        xinv = inv(x, order + (D + 1) * abs(mag(x).q) + 1)
        values.append(neg(mul(ps_eval(P, x), spow(xinv, D + 1))))
    b = vandermonde_solve(nodes, values, order)
    Q = PowerSeries(tuple(b))
    P2 = ps_add(P, ps_shift(Q, D + 1))

    before = [row for row in _radius_table(newton(P)) if row[0] >= r2.q]
    after_all = _radius_table(newton(P2))
    after_low = [row for row in after_all if row[0] >= r2.q]
    if before != after_low:
        raise VerificationFailed("extension disturbed the polygon below its block")
    on_sep = [row for row in after_all if row[0] == S.q]
    if len(on_sep) != 1 or on_sep[0][3] != len(A2) + 1:
        raise VerificationFailed(
            f"separator circle should carry exactly {len(A2) + 1} zeros"
        )
    want: dict = {}
    for x in A3:
        want[mag(x).q] = want.get(mag(x).q, 0) + 1
    for q, k in want.items():
        got = [row for row in after_all if row[0] == q]
        if len(got) != 1 or got[0][3] != k:
            raise VerificationFailed(f"circle 2^-{q} should carry exactly {k} zeros")
    for x in nodes:
        if ps_eval(P2, x).terms:
            raise VerificationFailed("an interpolation node is not a certified zero")
    q_counts = {cr.radius.q: cr.count for cr in newton(Q).radii}
    for q, mu, nu, count in after_all:
        if mu > D and q_counts.get(q) != count:
            raise VerificationFailed(
                "interpolant zero count disagrees on a circle it owns"
            )
    return P2


def prescribe(
    p: Prescription, plan: StagePlan, order: Optional[QLike] = None
) -> PowerSeries:
    """Run the staged construction; the result has a simple zero near every
    target (exactly at every target of the final two blocks) and value 1
    at the origin up to the working truncation."""
    blocks = _blocks_from_breakpoints(len(p.circles), plan.breakpoints)
    pts = [
        [p.targets[i][0] for ci in blk for i in p.circles[ci].target_idx]
        for blk in blocks
    ]
    if order is None:
        largest = max(abs(q) for z, _ in p.targets for q, _ in z.terms)
        largest = max(largest, max(c.delta.q for c in p.circles))
        order = 4 * largest
    order = _frac(order)
    attempts = 0
    while True:
        try:
            return _prescribe_once(p, plan, pts, order)
        except (IndeterminatePivot, UncertifiedRadius):
            attempts += 1
            if attempts > 3:
                raise
            order *= 2


def _prescribe_once(p, plan, pts, order) -> PowerSeries:
    seed_pts = pts[0] + (pts[1] if len(pts) > 1 else [])
    f = PowerSeries((Scalar.one(),))
    denom = Scalar.one()
    for x in seed_pts:
        f = f * PowerSeries((x, Scalar.rational(-1)))
        denom = mul(denom, x)
    f = ps_scale(f, inv(denom, order))
    for j in range(2, len(pts)):
        f = extend_stage(f, pts[j - 1], pts[j], plan.separators[j - 2], order)
    for circ in p.circles:
        if count_zeros(f, circ.radius, CIRCLE) != circ.count:
            raise VerificationFailed(
                f"constructed series carries a wrong count on 2^-{circ.radius.q}"
            )
    bound = Mag(-3 * p.c_exponent)
    if bound < gauss_norm(f):
        raise VerificationFailed("coefficient bound 1/c^3 violated")
    return f


@dataclass(frozen=True)
class TargetCheck:
    index: int
    passed: bool
    zero_count_in_delta_disk: int


@dataclass(frozen=True)
class PrescriptionReport:
    per_target: tuple
    per_circle: tuple  # of (radius_q, expected, actual)
    all_pass: bool


def verify_prescription(f: PowerSeries, p: Prescription) -> PrescriptionReport:
    """Audit ``f`` against the prescription.

    A target passes iff the series recentered there has exactly one zero
    strictly within the circle tolerance delta; every circle must carry
    exactly its target count.
    """
    per_circle = []
    circles_ok = True
    for circ in p.circles:
        actual = count_zeros(f, circ.radius, CIRCLE)
        per_circle.append((circ.radius.q, circ.count, actual))
        circles_ok = circles_ok and actual == circ.count
    checks = []
    all_pass = circles_ok
    for circ in p.circles:
        for idx in circ.target_idx:
            center, _ = p.targets[idx]
            got = count_zeros(translate(f, center), circ.delta, OPEN)
            ok = got == 1
            checks.append(TargetCheck(idx, ok, got))
            all_pass = all_pass and ok
    checks.sort(key=lambda t: t.index)
    return PrescriptionReport(tuple(checks), tuple(per_circle), all_pass)


# ---------------------------------------------------------------------------
# dense-set norm targeting


def _simplest_in(lo: Fraction, hi: Fraction) -> Fraction:
    """Smallest-denominator fraction in [lo, hi], 0 < lo <= hi.

    Continued-fraction walk on the interval; the recursion depth is the
    length of the shared expansion, so this is logarithmic.
    """
    ilo = -((-lo.numerator) // lo.denominator)  # ceil(lo)
    if ilo <= hi:
        return Fraction(ilo)
    a = lo.numerator // lo.denominator  # == floor(hi), both in (a, a+1)
    inner = _simplest_in(1 / (hi - a), 1 / (lo - a))
    return a + 1 / inner


def _dense_member_in(lo: Fraction, hi: Fraction, denom_bound: int):
    """Some positive rational with denominator <= denom_bound in [lo, hi]."""
    if lo > hi or hi <= 0:
        return None
    if lo <= 0:
        # hi > 0: the largest unit fraction below hi is the simplest choice
        q = -((-hi.denominator) // hi.numerator)  # ceil(1/hi)
        return Fraction(1, q) if q <= denom_bound else None
    v = _simplest_in(lo, hi)
    return v if v.denominator <= denom_bound else None


def norm_target_select(
    bounds: Sequence[tuple],
    T: QLike,
    denom_bound: int,
    eps: QLike,
) -> list:
    """Greedy selection of t_n in [0,1] with q_n(t_n) := t_n*a_n + (1-t_n)*b_n
    in the dense set {p/q : q <= denom_bound} and |sum q_n(t_n) - T| <= eps.

    Every step keeps the remaining tail exactly feasible and prefers the
    value within eps/k of the balanced choice, widening to the feasibility
    window when the dense set is too coarse for that preference; the final
    step spends the whole tolerance, so the total error is its gap alone.
    """
    T = _frac(T)
    eps = _frac(eps)
    a = [_frac(x) for x, _ in bounds]
    b = [_frac(y) for _, y in bounds]
    for x, y in zip(a, b):
        if not (0 < x < y):
            raise ValueError("bounds must satisfy 0 < a_n < b_n")
    n = len(a)
    suff_a = [Fraction(0)] * (n + 1)
    suff_b = [Fraction(0)] * (n + 1)
    for i in range(n - 1, -1, -1):
        suff_a[i] = suff_a[i + 1] + a[i]
        suff_b[i] = suff_b[i + 1] + b[i]
    if not (suff_a[0] <= T <= suff_b[0]):
        raise TargetOutOfRange(f"target {T} outside [{suff_a[0]}, {suff_b[0]}]")
    ts = []
    residual = T
    for k in range(n):
        if k == n - 1:
            lo = max(a[k], residual - eps)
            hi = min(b[k], residual + eps)
            ideal = min(max(residual, a[k]), b[k])
        else:
            lo = max(a[k], residual - suff_b[k + 1])
            hi = min(b[k], residual - suff_a[k + 1])
            width = suff_b[k] - suff_a[k]
            s = (suff_b[k] - residual) / width if width else Fraction(0)
            ideal = a[k] * s + b[k] * (1 - s)
        slack = eps / (k + 1)
        # reserve rounding headroom so later windows keep dense points
        margin = Fraction(max(n - k - 2, 0), denom_bound)
        windows = (
            (max(lo + margin, ideal - slack), min(hi - margin, ideal + slack)),
            (lo + margin, hi - margin),
            (max(lo, ideal - slack), min(hi, ideal + slack)),
            (lo, hi),
        )
        v = None
        for wlo, whi in windows:
            v = _dense_member_in(wlo, whi, denom_bound)
            if v is not None:
                break
        if v is None:
            raise DenseSetTooCoarse(
                f"no dense value in the feasibility window at step {k}"
            )
        ts.append((b[k] - v) / (b[k] - a[k]))
        residual -= v
    if abs(residual) > eps:
        raise DenseSetTooCoarse("greedy finished outside the requested tolerance")
    return ts


def plan_norm_exponent(p: Prescription, plan: StagePlan) -> Fraction:
    """log2 of the Gauss norm the construction will reach with this plan."""
    out = p.c_exponent
    for j, s in enumerate(plan.separators):
        mass = plan.block_sizes[j + 1] + 1
        out += mass * s.q
    return out


def retarget_separators(
    p: Prescription,
    plan: StagePlan,
    target_exponent: QLike,
    denom_bound: int,
    eps: QLike,
) -> StagePlan:
    """Re-pick the separator radii so the achieved Gauss-norm exponent lands
    within eps of the requested one, with every separator contribution in
    the dense set {p/q : q <= denom_bound}."""
    if not plan.separators:
        raise TargetOutOfRange("plan has no separator radii to adjust")
    blocks = _blocks_from_breakpoints(len(p.circles), plan.breakpoints)
    bounds = []
    masses = []
    for j in range(2, len(blocks)):
        hi_q = p.circles[blocks[j - 1][-1]].radius.q
        lo_q = p.circles[blocks[j][0]].radius.q
        mass = plan.block_sizes[j - 1] + 1
        bounds.append((lo_q * mass, hi_q * mass))
        masses.append(mass)
    T = _frac(target_exponent) - p.c_exponent
    ts = norm_target_select(bounds, T, denom_bound, eps)
    seps = []
    for (aa, bb), t, mass in zip(bounds, ts, masses):
        v = aa * t + bb * (1 - t)
        seps.append(Mag(v / mass))
    return StagePlan(plan.breakpoints, plan.block_sizes, tuple(seps))
