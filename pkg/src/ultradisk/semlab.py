"""Finite-stage study of disk-seminorm families.

Weighted regularity products, per-stage sup-norm and local-zero-factor
tables, the monotone norm-vs-radius curve, the radius solver that inverts
the local zero factor, disjointification of overlapping disk families, and
the construction of test functions with one cluster of simple zeros per
family disk.  No limit along an ultrafilter is ever claimed: every value
reported here is an exact per-stage quantity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    CenterOutsideDisk,
    DuplicateCenters,
    TargetOutOfRange,
    UncertifiedRadius,
    VerificationFailed,
)
from .prescribe import (
    Prescription,
    StagePlan,
    make_plan,
    prescribe,
)
from .series import (
    CLOSED,
    PowerSeries,
    circle_prefactor,
    count_zeros,
    disk_norm,
    newton,
    translate,
    xi,
)
from .valfield import (
    Mag,
    Scalar,
    add,
    mag,
    mag_pow,
    provably_distinct,
    sample_point,
    scale,
    sub,
)


@dataclass(frozen=True)
class DiskFamily:
    """Finite-stage data (z_n, k_n, r): disks D+(z_n, r**(1/k_n)).

    Certified-disjoint when the base radius is strictly below the weighted
    regularity infimum of the centers.
    """

    centers: tuple
    weights: tuple
    base: Mag
    radii: tuple
    disjoint_certified: bool

    @staticmethod
    def make(centers: Sequence[Scalar], weights: Sequence[int], base: Mag) -> "DiskFamily":
        centers = tuple(centers)
        weights = tuple(int(k) for k in weights)
        if len(centers) != len(weights):
            raise ValueError("centers and weights must have equal length")
        if any(k <= 0 for k in weights):
            raise ValueError("weights must be positive")
        if base.is_zero or base.q <= 0:
            raise ValueError("base radius must satisfy 0 < r < 1")
        radii = tuple(mag_pow(base, Fraction(1, k)) for k in weights)
        for z, r in zip(centers, radii):
            if not (r < mag(z)):
                raise CenterOutsideDisk(
                    "family disk must sit inside its center's circle"
                )
        disjoint = False
        if len(centers) > 1:
            _, inf = regularity_products(centers, weights)
            disjoint = not inf.is_zero and base < inf
        else:
            disjoint = True
        return DiskFamily(centers, weights, base, radii, disjoint)

    def __len__(self) -> int:
        return len(self.centers)


@dataclass(frozen=True)
class StageRecord:
    n: int
    zeta: Mag
    xi: Mag
    prefactor: Mag
    count: int


@dataclass(frozen=True)
class StageReport:
    records: tuple

    @property
    def zeta_min(self) -> Mag:
        return min((r.zeta for r in self.records), default=Mag.zero())

    @property
    def zeta_max(self) -> Mag:
        return max((r.zeta for r in self.records), default=Mag.zero())

    @property
    def xi_min(self) -> Mag:
        return min((r.xi for r in self.records), default=Mag.zero())

    @property
    def xi_max(self) -> Mag:
        return max((r.xi for r in self.records), default=Mag.zero())


def regularity_products(
    centers: Sequence[Scalar], weights: Sequence[int], horizon: Optional[int] = None
) -> tuple:
    """Weighted distance products prod_{m != n} |z_n - z_m|**k_m, plus their
    running infimum over the horizon."""
    n = len(centers) if horizon is None else min(horizon, len(centers))
    out = []
    inf = None
    for i in range(n):
        acc = Mag.one()
        for j in range(n):
            if i == j:
                continue
            d = sub(centers[i], centers[j])
            if not d.terms:
                raise DuplicateCenters(f"centers {i} and {j} are not distinct")
            acc = acc * mag_pow(mag(d), weights[j])
        out.append(acc)
        if inf is None or acc < inf:
            inf = acc
    return out, (inf if inf is not None else Mag.one())


def stage_values(f: PowerSeries, fam: DiskFamily) -> StageReport:
    """Exact per-stage sup-norm, local zero factor, and their exact ratio.

    The ratio (the circle prefactor) times xi reproduces zeta on every
    stage; the count column is the number of zeros in the stage disk.
    """
    records = []
    for i, (z, r) in enumerate(zip(fam.centers, fam.radii)):
        zeta = disk_norm(f, z, r)
        x = xi(f, z, r)
        pref = circle_prefactor(f, mag(z))
        if pref * x != zeta:
            raise VerificationFailed(
                f"stage {i}: prefactor * xi does not reproduce zeta"
            )
        count = count_zeros(translate(f, z), r, CLOSED)
        records.append(StageRecord(i, zeta, x, pref, count))
    return StageReport(tuple(records))


def curve(
    f: PowerSeries,
    centers: Sequence[Scalar],
    weights: Sequence[int],
    r_grid: Sequence[Mag],
) -> list:
    """Per-stage sup-norm tables along an increasing grid of base radii.

    The raw material of the norm-versus-radius curve: each stage column is
    nondecreasing in r, exactly.
    """
    grid = list(r_grid)
    for a, b in zip(grid, grid[1:]):
        if not a < b:
            raise ValueError("radius grid must be strictly increasing")
    rows = []
    prev = None
    for r in grid:
        fam = DiskFamily.make(centers, weights, r)
        zetas = [disk_norm(f, z, rr) for z, rr in zip(fam.centers, fam.radii)]
        if prev is not None and any(b < a for a, b in zip(prev, zetas)):
            raise VerificationFailed("stage sup-norms failed to be monotone")
        rows.append((r, zetas))
        prev = zetas
    return rows


def solve_radius(f: PowerSeries, center: Scalar, target: Mag) -> Mag:
    """The largest radius s with xi(f, center, s) equal to the target.

    The local zero factor is continuous, nondecreasing and piecewise of
    the form s**A * const between consecutive zero distances, so the
    inverse is solved exactly in exponent space piece by piece.  Ties at a
    piece boundary resolve to the largest admissible s.
    """
    R = mag(center)
    if R.is_zero or not (R < Mag.one()):
        raise CenterOutsideDisk("solve_radius needs 0 < |center| < 1")
    if target.is_zero:
        raise TargetOutOfRange("the local zero factor is never zero")
    g = translate(f, center)
    nd = newton(g)
    if not nd.certified_below(R):
        raise UncertifiedRadius(
            "distance profile below the center's circle is not certified"
        )
    dists = [cr for cr in nd.radii if cr.radius < R]
    a0 = nd.ord_at_zero
    # cumulative in-disk counts per piece: A_j on [D_j, D_{j+1})
    counts = [a0]
    for cr in dists:
        counts.append(counts[-1] + cr.count)
    # no zeros within reach and none at the center
    if not dists and a0 == 0:
        probe = Mag(R.q + Fraction(1, 6))
        if xi(f, center, probe) == target:
            return probe
        raise TargetOutOfRange("constant local factor differs from the target")
    # anchor the far-zero constant from one exact evaluation in the top piece
    top_lo_q = R.q
    top_hi_q = dists[-1].radius.q if dists else None
    if top_hi_q is None:
        probe_q = R.q * 2
    else:
        probe_q = (top_lo_q + top_hi_q) / 2
    probe = Mag(probe_q)
    a_top = counts[-1]
    x_top = xi(f, center, probe)
    const_q = [Fraction(0)] * len(counts)
    const_q[-1] = x_top.q - a_top * probe_q
    for j in range(len(dists) - 1, -1, -1):
        # crossing D_j: its zeros move from the s-power into the far product
        const_q[j] = const_q[j + 1] + dists[j].count * dists[j].radius.q
    # scan pieces from the largest s downward; the first solve wins
    for j in range(len(counts) - 1, -1, -1):
        a_j = counts[j]
        lo_q = dists[j - 1].radius.q if j > 0 else None  # upper s-end exponent
        hi_q = dists[j].radius.q if j < len(dists) else R.q
        # piece domain: s in [D_{j-1}, D_j)  <=>  q in (hi_q, lo_q]
        if a_j == 0:
            if target.q == const_q[j]:
                return dists[0].radius  # flat piece; largest admissible s
            continue
        q_star = (target.q - const_q[j]) / a_j
        if q_star <= hi_q:
            continue
        if lo_q is not None and q_star > lo_q:
            continue
        s = Mag(q_star)
        if xi(f, center, s) != target:
            raise VerificationFailed("piecewise solve failed its own check")
        return s
    raise TargetOutOfRange(
        f"target 2^-{target.q} outside the attainable local-factor range"
    )


def disjointify(centers: Sequence[Scalar], radii: Sequence[Mag]) -> tuple:
    """Replace clustered centers so the open disks become pairwise disjoint.

    Within each circle, colliding centers move to points on their own
    distance-r circles whose pairwise distances are exactly
    max(r_n, r_m, |z_n - z_m|); closed disks of the same radius are
    unchanged as sets, so closed-disk sup-norms are preserved.  Returns the
    new centers and an exact pairwise-distance table as proof.
    """
    centers = list(centers)
    radii = list(radii)
    for z, r in zip(centers, radii):
        if not (r < mag(z)):
            raise CenterOutsideDisk("each radius must be below its center's circle")
    by_circle: dict = {}
    for i, z in enumerate(centers):
        by_circle.setdefault(mag(z).q, []).append(i)
    out = list(centers)
    for _, idxs in sorted(by_circle.items()):
        if _cluster_disjoint([centers[i] for i in idxs], [radii[i] for i in idxs]):
            continue
        picked: list = []
        for i in idxs:
            c = 1
            while True:
                cand = add(centers[i], scale(sample_point(radii[i]), c))
                if all(
                    _sep_ok(cand, radii[i], out[j], radii[j], centers[i], centers[j])
                    for j in picked
                ):
                    out[i] = cand
                    picked.append(i)
                    break
                c += 1
    proof = []
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            if mag(out[i]).q != mag(out[j]).q:
                continue
            d = mag(sub(out[i], out[j]))
            proof.append((i, j, d, max(radii[i], radii[j])))
            if d < max(radii[i], radii[j]):
                raise DuplicateCenters(
                    f"disjointification failed for centers {i}, {j}"
                )
    return out, proof


def _cluster_disjoint(zs, rs) -> bool:
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            d = sub(zs[i], zs[j])
            if not d.terms or not (max(rs[i], rs[j]) <= mag(d)):
                return False
    return True


def _sep_ok(w_i, r_i, w_j, r_j, z_i, z_j) -> bool:
    d = sub(w_i, w_j)
    if not d.terms:
        return False
    want = max(r_i, r_j)
    dz = sub(z_i, z_j)
    if dz.terms:
        want = max(want, mag(dz))
    return mag(d) == want


@dataclass(frozen=True)
class TestFunctionReport:
    series: PowerSeries
    prescription: Prescription
    plan: StagePlan
    regularity_min: Mag  # M: infimum of the weighted distance products


def build_test_function(
    centers: Sequence[Scalar],
    weights: Sequence[int],
    deltas: Sequence[Mag],
    stages: int = 2,
) -> TestFunctionReport:
    """A series with exactly k_n simple zeros in each D+(z_n, delta_n) and no
    other zeros on those circles, built by prescribing one zero per slot.

    Slots on one center sit pairwise exactly delta_n apart, so every zero
    stays within delta_n of its center and all are simple.
    """
    targets = []
    for z, k, d in zip(centers, weights, deltas):
        if not (d < mag(z)):
            raise CenterOutsideDisk("delta must be below the center's circle")
        eps = Mag(d.q + Fraction(1, 6))
        for j in range(1, k + 1):
            targets.append((add(z, scale(sample_point(d), j)), eps))
    p = Prescription.make(targets)
    plan = make_plan(p, stages)
    f = prescribe(p, plan)
    products, reg_min = regularity_products(centers, weights)
    return TestFunctionReport(f, p, plan, reg_min)


def shell_exponent_floor(
    centers: Sequence[Scalar], weights: Sequence[int], base: Mag
) -> tuple:
    """Per-center shell weights T_n = sum of k_m over centers within the
    stage radius, and the infimum of r_n**T_n (the T of the test-function
    bounds) for the family with the given base radius."""
    fam_radii = [mag_pow(base, Fraction(1, k)) for k in weights]
    shell = []
    t_inf = None
    for i, z in enumerate(centers):
        total = 0
        for j, w in enumerate(centers):
            if i == j:
                total += weights[j]
                continue
            d = mag(sub(z, w))
            if d <= fam_radii[i]:
                total += weights[j]
        shell.append(total)
        val = mag_pow(fam_radii[i], total)
        if t_inf is None or val < t_inf:
            t_inf = val
    return shell, t_inf
