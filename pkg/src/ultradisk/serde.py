"""JSON encoding and decoding of the library's value types.

All rationals travel as exact strings ("num/den" or "num"); magnitudes as
{"kind": "finite", "q": ...} or {"kind": "zero"}.  A null gauss_tail means
a polynomial (zero tail).  Decoders raise SchemaError on malformed input.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SchemaError
from .prescribe import Prescription, StagePlan
from .semlab import DiskFamily
from .series import PowerSeries, ZeroProfile
from .valfield import Mag, Scalar


def frac_to_json(q: Fraction) -> str:
    return str(q)


def frac_from_json(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"not an exact rational: {s!r}") from exc


def mag_to_json(m: Mag) -> dict:
    if m.is_zero:
        return {"kind": "zero"}
    return {"kind": "finite", "q": frac_to_json(m.q)}


def mag_from_json(obj) -> Mag:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError(f"not a magnitude object: {obj!r}")
    if obj["kind"] == "zero":
        return Mag.zero()
    if obj["kind"] == "finite":
        return Mag(frac_from_json(obj.get("q")))
    raise SchemaError(f"unknown magnitude kind: {obj['kind']!r}")


def scalar_to_json(x: Scalar) -> dict:
    return {
        "terms": [{"q": frac_to_json(q), "a": frac_to_json(a)} for q, a in x.terms],
        "trunc": None if x.trunc is None else frac_to_json(x.trunc),
    }


def scalar_from_json(obj) -> Scalar:
    if not isinstance(obj, dict) or "terms" not in obj:
        raise SchemaError(f"not a scalar object: {obj!r}")
    try:
        terms = [(frac_from_json(t["q"]), frac_from_json(t["a"])) for t in obj["terms"]]
    except (TypeError, KeyError) as exc:
        raise SchemaError("scalar terms must be objects with 'q' and 'a'") from exc
    trunc = obj.get("trunc")
    return Scalar.make(terms, None if trunc is None else frac_from_json(trunc))


def series_to_json(f: PowerSeries) -> dict:
    return {
        "coeffs": [scalar_to_json(c) for c in f.coeffs],
        "gauss_tail": None if f.gauss_tail.is_zero else mag_to_json(f.gauss_tail),
    }


def series_from_json(obj) -> PowerSeries:
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise SchemaError(f"not a power series object: {obj!r}")
    coeffs = [scalar_from_json(c) for c in obj["coeffs"]]
    tail = obj.get("gauss_tail")
    return PowerSeries.from_coeffs(
        coeffs, Mag.zero() if tail is None else mag_from_json(tail)
    )


def profile_to_json(p: ZeroProfile) -> dict:
    return {
        "unit_mag": mag_to_json(p.unit_mag),
        "zeros": [
            {"point": scalar_to_json(w), "multiplicity": m} for w, m in p.zeros
        ],
    }


def profile_from_json(obj) -> ZeroProfile:
    if not isinstance(obj, dict) or "zeros" not in obj:
        raise SchemaError(f"not a zero profile object: {obj!r}")
    try:
        zeros = [
            (scalar_from_json(z["point"]), int(z["multiplicity"]))
            for z in obj["zeros"]
        ]
    except (TypeError, KeyError) as exc:
        raise SchemaError("profile zeros need 'point' and 'multiplicity'") from exc
    unit = obj.get("unit_mag")
    return ZeroProfile.make(Mag.one() if unit is None else mag_from_json(unit), zeros)


def prescription_to_json(p: Prescription) -> dict:
    return {
        "targets": [
            {"center": scalar_to_json(z), "eps": mag_to_json(e)}
            for z, e in p.targets
        ]
    }


def prescription_from_json(obj) -> Prescription:
    if not isinstance(obj, dict) or "targets" not in obj:
        raise SchemaError(f"not a prescription object: {obj!r}")
    try:
        targets = [
            (scalar_from_json(t["center"]), mag_from_json(t["eps"]))
            for t in obj["targets"]
        ]
    except (TypeError, KeyError) as exc:
        raise SchemaError("prescription targets need 'center' and 'eps'") from exc
    return Prescription.make(targets)


def plan_to_json(plan: StagePlan) -> dict:
    return {
        "breakpoints": list(plan.breakpoints),
        "block_sizes": list(plan.block_sizes),
        "separators": [mag_to_json(s) for s in plan.separators],
    }


def plan_from_json(obj) -> StagePlan:
    if not isinstance(obj, dict) or "breakpoints" not in obj:
        raise SchemaError(f"not a stage plan object: {obj!r}")
    return StagePlan(
        tuple(int(b) for b in obj["breakpoints"]),
        tuple(int(m) for m in obj.get("block_sizes", ())),
        tuple(mag_from_json(s) for s in obj.get("separators", ())),
    )


def family_to_json(fam: DiskFamily) -> dict:
    return {
        "centers": [scalar_to_json(z) for z in fam.centers],
        "weights": list(fam.weights),
        "base_r": mag_to_json(fam.base),
    }


def family_from_json(obj) -> DiskFamily:
    if not isinstance(obj, dict) or "centers" not in obj:
        raise SchemaError(f"not a disk family object: {obj!r}")
    try:
        centers = [scalar_from_json(z) for z in obj["centers"]]
        weights = [int(k) for k in obj["weights"]]
        base = mag_from_json(obj["base_r"])
    except (TypeError, KeyError) as exc:
        raise SchemaError("disk family needs centers, weights, base_r") from exc
    return DiskFamily.make(centers, weights, base)
