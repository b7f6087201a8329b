"""Exact nonarchimedean analysis on the open unit disk.

Arithmetic lives in a model field of truncated rational-exponent power
series with |x| = 2**(-v(x)), so the value group is dense and every
magnitude is an exact rational exponent.  On top of it: Newton-polygon
zero counting, closed-disk sup-norms, the local zero factor xi,
constructive prescription of zeros with norm targeting, and finite-stage
seminorm-family tables.
"""

from .errors import (
    CenterOutsideDisk,
    DenseSetTooCoarse,
    DuplicateCenters,
    DuplicateNodes,
    IndeterminateMag,
    IndeterminatePivot,
    InfeasibleHorizon,
    PrescriptionError,
    SchemaError,
    SeparatorCollision,
    TargetNotInValueGroup,
    TargetOutOfRange,
    UltradiskError,
    UncertifiedRadius,
    VerificationFailed,
    ZeroSeries,
    ZeroToNonpositivePower,
)
from .valfield import (
    BASE,
    Mag,
    MagSum,
    Scalar,
    add,
    inv,
    mag,
    mag_pow,
    mul,
    neg,
    provably_distinct,
    sample_point,
    scale,
    spow,
    sub,
    truncate,
)
from .series import (
    CIRCLE,
    CLOSED,
    OPEN,
    CriticalRadius,
    NewtonData,
    PowerSeries,
    ZeroProfile,
    circle_prefactor,
    count_zeros,
    count_zeros_at,
    disk_norm,
    gauss_norm,
    gauss_norm_info,
    newton,
    point_mag,
    ps_add,
    ps_eval,
    ps_mul,
    ps_scale,
    ps_shift,
    translate,
    xi,
    zp_circle_value,
    zp_to_series,
)
from .prescribe import (
    CircleSpec,
    Prescription,
    PrescriptionReport,
    StagePlan,
    extend_stage,
    make_plan,
    norm_target_select,
    plan_norm_exponent,
    prescribe,
    retarget_separators,
    vandermonde_solve,
    verify_prescription,
)
from .semlab import (
    DiskFamily,
    StageRecord,
    StageReport,
    TestFunctionReport,
    build_test_function,
    curve,
    disjointify,
    regularity_products,
    shell_exponent_floor,
    solve_radius,
    stage_values,
)
from .cli import ExperimentConfig, main, run
