"""Batch front door: parse inputs, dispatch to the library, emit exact reports.

Reports carry every magnitude as an exact rational exponent; float columns
are decoration and are marked non-authoritative.  Identical configs produce
byte-identical reports.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import gen, semlab, serde
from .errors import SchemaError, UltradiskError, VerificationFailed
from .prescribe import make_plan, plan_norm_exponent, prescribe, verify_prescription
from .series import newton, disk_norm, gauss_norm_info, xi, zp_to_series
from .semlab import DiskFamily, curve, regularity_products, solve_radius, stage_values
from .valfield import Mag, Scalar, add, mag, sample_point, scale, sub

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_INPUT = 2

SCENARIOS = (
    "newton",
    "norm",
    "zeta",
    "xi",
    "prescribe",
    "verify",
    "semcurve",
    "solve-radius",
    "recipe",
)
RECIPES = (
    "lucile-insensitivity",
    "noterrias",
    "gertrudis-collapse",
    "liberban-chain",
)


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    stages: int = 2
    horizon: int = 4
    seed: int = 0
    format: str = "json"
    recipe_name: Optional[str] = None


def _q(x: Fraction) -> str:
    return str(x)


def _mag_cell(m: Mag) -> str:
    return "zero" if m.is_zero else _q(m.q)


def _load_input(config: ExperimentConfig):
    if config.input_path is None:
        return None
    try:
        with open(config.input_path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise SchemaError(f"input file not found: {config.input_path}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON in {config.input_path}: {exc}") from exc


def _emit(config: ExperimentConfig, text: str) -> None:
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_report(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_report(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _series_from(obj):
    if isinstance(obj, dict) and "series" in obj:
        return serde.series_from_json(obj["series"])
    if isinstance(obj, dict) and "profile" in obj:
        return zp_to_series(serde.profile_from_json(obj["profile"]))
    return serde.series_from_json(obj)


def _newton_rows(f):
    nd = newton(f)
    rows = []
    for cr in nd.radii:
        rows.append(
            (
                _q(cr.radius.q),
                cr.mu,
                cr.nu,
                cr.count,
                repr(cr.radius.to_float()),
            )
        )
    return rows


def _run_newton(config: ExperimentConfig) -> int:
    f = _series_from(_load_input(config))
    rows = _newton_rows(f)
    if config.format == "csv":
        _emit(config, _csv_report(
            ("radius_q", "mu", "nu", "count", "float_nonauthoritative"), rows
        ))
    else:
        _emit(config, _json_report({
            "scenario": "newton",
            "radii": [
                {"radius_q": r, "mu": m, "nu": n, "count": c,
                 "float_nonauthoritative": fl}
                for r, m, n, c, fl in rows
            ],
        }))
    return EXIT_OK


def _run_norm(config: ExperimentConfig) -> int:
    f = _series_from(_load_input(config))
    value, certified = gauss_norm_info(f)
    _emit(config, _json_report({
        "scenario": "norm",
        "gauss_norm": serde.mag_to_json(value),
        "certified": certified,
        "float_nonauthoritative": repr(value.to_float()),
    }))
    return EXIT_OK


def _run_zeta(config: ExperimentConfig) -> int:
    obj = _load_input(config)
    if not isinstance(obj, dict):
        raise SchemaError("zeta input must hold series, center, radius")
    f = _series_from(obj)
    center = serde.scalar_from_json(obj.get("center", {"terms": []}))
    radius = serde.mag_from_json(obj.get("radius", {"kind": "zero"}))
    value = disk_norm(f, center, radius)
    _emit(config, _json_report({
        "scenario": "zeta",
        "value": serde.mag_to_json(value),
        "float_nonauthoritative": repr(value.to_float()),
    }))
    return EXIT_OK


def _run_xi(config: ExperimentConfig) -> int:
    obj = _load_input(config)
    if not isinstance(obj, dict):
        raise SchemaError("xi input must hold series, center, radius")
    f = _series_from(obj)
    center = serde.scalar_from_json(obj["center"])
    radius = serde.mag_from_json(obj["radius"])
    value = xi(f, center, radius)
    _emit(config, _json_report({
        "scenario": "xi",
        "value": serde.mag_to_json(value),
        "float_nonauthoritative": repr(value.to_float()),
    }))
    return EXIT_OK


def _run_prescribe(config: ExperimentConfig) -> int:
    obj = _load_input(config)
    if obj is None:
        rng = random.Random(config.seed)
        p, plan = gen.rand_prescription(rng, stages=config.stages)
    else:
        p = serde.prescription_from_json(obj)
        plan = make_plan(p, config.stages)
    f = prescribe(p, plan)
    report = verify_prescription(f, p)
    if config.format == "csv":
        _emit(config, _csv_report(
            ("radius_q", "mu", "nu", "count", "float_nonauthoritative"),
            _newton_rows(f),
        ))
        return EXIT_OK if report.all_pass else EXIT_INVARIANT
    _emit(config, _json_report({
        "scenario": "prescribe",
        "plan": serde.plan_to_json(plan),
        "norm_exponent_log2": _q(plan_norm_exponent(p, plan)),
        "series": serde.series_to_json(f),
        "verification": {
            "all_pass": report.all_pass,
            "targets": [
                {"index": t.index, "passed": t.passed,
                 "zeros_in_delta_disk": t.zero_count_in_delta_disk}
                for t in report.per_target
            ],
            "circles": [
                {"radius_q": _q(q), "expected": e, "actual": a}
                for q, e, a in report.per_circle
            ],
        },
        "newton": [
            {"radius_q": r, "mu": m, "nu": n, "count": c}
            for r, m, n, c, _ in _newton_rows(f)
        ],
    }))
    return EXIT_OK if report.all_pass else EXIT_INVARIANT


def _run_verify(config: ExperimentConfig) -> int:
    obj = _load_input(config)
    if not isinstance(obj, dict) or "prescription" not in obj:
        raise SchemaError("verify input must hold series and prescription")
    f = _series_from(obj)
    p = serde.prescription_from_json(obj["prescription"])
    report = verify_prescription(f, p)
    _emit(config, _json_report({
        "scenario": "verify",
        "summary": "all PASS" if report.all_pass else "FAIL",
        "targets": [
            {"index": t.index, "passed": t.passed,
             "zeros_in_delta_disk": t.zero_count_in_delta_disk}
            for t in report.per_target
        ],
        "circles": [
            {"radius_q": _q(q), "expected": e, "actual": a}
            for q, e, a in report.per_circle
        ],
    }))
    return EXIT_OK if report.all_pass else EXIT_INVARIANT


def _run_semcurve(config: ExperimentConfig) -> int:
    obj = _load_input(config)
    if not isinstance(obj, dict) or "centers" not in obj:
        raise SchemaError("semcurve input must hold series, centers, weights, grid")
    f = _series_from(obj)
    centers = [serde.scalar_from_json(z) for z in obj["centers"]]
    weights = [int(k) for k in obj["weights"]]
    grid = [serde.mag_from_json(r) for r in obj["grid"]]
    rows = curve(f, centers, weights, grid)
    csv_rows = []
    for r, zetas in rows:
        csv_rows.append([_q(r.q)] + [_mag_cell(z) for z in zetas])
    if config.format == "csv":
        header = ["base_r_q"] + [f"zeta_{i}_q" for i in range(len(centers))]
        _emit(config, _csv_report(header, csv_rows))
    else:
        _emit(config, _json_report({
            "scenario": "semcurve",
            "rows": [
                {"base_r_q": row[0], "zeta_q": row[1:]} for row in csv_rows
            ],
        }))
    return EXIT_OK


def _run_solve_radius(config: ExperimentConfig) -> int:
    obj = _load_input(config)
    if not isinstance(obj, dict) or "target" not in obj:
        raise SchemaError("solve-radius input must hold series, center, target")
    f = _series_from(obj)
    center = serde.scalar_from_json(obj["center"])
    target = serde.mag_from_json(obj["target"])
    s = solve_radius(f, center, target)
    check = xi(f, center, s)
    _emit(config, _json_report({
        "scenario": "solve-radius",
        "radius": serde.mag_to_json(s),
        "xi_roundtrip": serde.mag_to_json(check),
        "roundtrip_exact": check == target,
        "float_nonauthoritative": repr(s.to_float()),
    }))
    return EXIT_OK if check == target else EXIT_INVARIANT


# ---------------------------------------------------------------------------
# experiment recipes: stage tables for human inspection; only per-stage
# exact identities are asserted, trends are printed and never asserted


def _chain_family(horizon: int):
    """Centers marching toward the boundary, one simple zero at each."""
    from .series import ZeroProfile

    centers = [Scalar.monomial(Fraction(1, n + 2), 1) for n in range(horizon)]
    profile = ZeroProfile.make(Mag.one(), [(z, 1) for z in centers])
    return centers, zp_to_series(profile)


def _recipe_liberban_chain(config: ExperimentConfig):
    horizon = max(1, config.horizon)
    centers, f = _chain_family(horizon)
    target = Mag.of(3)  # 2^-3
    rows = []
    ok = True
    for n, z in enumerate(centers):
        s = solve_radius(f, z, target)
        got = xi(f, z, s)
        ok = ok and got == target
        rows.append({
            "stage": n,
            "center_q": _q(mag(z).q),
            "solved_radius_q": _q(s.q),
            "xi_q": _mag_cell(got),
        })
    return {"recipe": "liberban-chain", "target_q": _q(target.q),
            "stages": rows, "all_exact": ok}, ok


def _recipe_gertrudis_collapse(config: ExperimentConfig):
    from .series import ZeroProfile

    horizon = max(2, config.horizon)
    base_q = Fraction(1, 2)
    centers = [
        add(Scalar.monomial(base_q, 1), Scalar.monomial(base_q + Fraction(1, 2), j))
        for j in range(1, horizon + 1)
    ]
    profile = ZeroProfile.make(Mag.one(), [(z, 1) for z in centers])
    f = zp_to_series(profile)
    products, inf = regularity_products(centers, [1] * horizon)
    r = Mag(base_q + Fraction(3, 2))  # below every pairwise distance
    fam = DiskFamily.make(centers, [1] * horizon, r)
    report = stage_values(f, fam)
    rows = []
    ok = True
    for rec, prod in zip(report.records, products):
        expect = fam.radii[rec.n] * prod
        ok = ok and rec.xi == expect
        rows.append({
            "stage": rec.n,
            "xi_q": _mag_cell(rec.xi),
            "distance_product_q": _mag_cell(prod),
            "xi_equals_r_times_product": rec.xi == expect,
        })
    return {"recipe": "gertrudis-collapse",
            "regularity_infimum_q": _mag_cell(inf),
            "note": "products shrink with the horizon; no limit is asserted",
            "stages": rows, "all_exact": ok}, ok


def _noterrias_data(horizon: int):
    """Growing clusters: circle i carries i+1 points pairwise 2^-(6/i) apart."""
    from .series import ZeroProfile

    centers = []
    schedule = []
    for i in range(1, horizon + 1):
        circle_q = Fraction(1, i + 1)
        dist_q = Fraction(6, i)
        for c in range(1, i + 2):
            centers.append(
                add(Scalar.monomial(circle_q, 1), Scalar.monomial(dist_q, c))
            )
            schedule.append(Mag(dist_q))
    profile = ZeroProfile.make(Mag.one(), [(z, 1) for z in centers])
    return centers, schedule, zp_to_series(profile)


def _recipe_noterrias(config: ExperimentConfig):
    horizon = max(1, min(config.horizon, 5))
    centers, schedule, f = _noterrias_data(horizon)
    rows = []
    ok = True
    for n, (z, r) in enumerate(zip(centers, schedule)):
        zeta = disk_norm(f, z, r)
        x = xi(f, z, r)
        from .series import circle_prefactor

        pref = circle_prefactor(f, mag(z))
        ok = ok and pref * x == zeta
        rows.append({
            "stage": n, "radius_q": _q(r.q),
            "zeta_q": _mag_cell(zeta), "xi_q": _mag_cell(x),
            "prefactor_q": _mag_cell(pref),
        })
    return {"recipe": "noterrias", "stages": rows, "all_exact": ok}, ok


def _recipe_lucile(config: ExperimentConfig):
    horizon = max(1, min(config.horizon, 5))
    centers, schedule, f = _noterrias_data(horizon)
    rows = []
    ok = True
    for n, (z, r) in enumerate(zip(centers, schedule)):
        s = Mag(r.q + Fraction(1, 3))  # second schedule, strictly smaller
        zr = disk_norm(f, z, r)
        zs = disk_norm(f, z, s)
        ok = ok and zs <= zr
        rows.append({
            "stage": n,
            "r_q": _q(r.q), "s_q": _q(s.q),
            "zeta_r_q": _mag_cell(zr), "zeta_s_q": _mag_cell(zs),
            "schedules_agree": zr == zs,
        })
    return {"recipe": "lucile-insensitivity",
            "note": "agreement along the tail is printed, never asserted",
            "stages": rows, "all_exact": ok}, ok


_RECIPE_RUNNERS = {
    "liberban-chain": _recipe_liberban_chain,
    "gertrudis-collapse": _recipe_gertrudis_collapse,
    "noterrias": _recipe_noterrias,
    "lucile-insensitivity": _recipe_lucile,
}


def _run_recipe(config: ExperimentConfig) -> int:
    if config.recipe_name not in _RECIPE_RUNNERS:
        raise SchemaError(
            f"unknown recipe {config.recipe_name!r}; choose from {RECIPES}"
        )
    report, ok = _RECIPE_RUNNERS[config.recipe_name](config)
    report["seed"] = config.seed
    report["horizon"] = config.horizon
    if config.format == "csv" and report.get("stages"):
        header = sorted(report["stages"][0])
        rows = [[row[k] for k in header] for row in report["stages"]]
        _emit(config, _csv_report(header, rows))
    else:
        _emit(config, _json_report(report))
    return EXIT_OK if ok else EXIT_INVARIANT


_RUNNERS = {
    "newton": _run_newton,
    "norm": _run_norm,
    "zeta": _run_zeta,
    "xi": _run_xi,
    "prescribe": _run_prescribe,
    "verify": _run_verify,
    "semcurve": _run_semcurve,
    "solve-radius": _run_solve_radius,
    "recipe": _run_recipe,
}


def run(config: ExperimentConfig) -> int:
    """Execute one scenario; returns the process exit code."""
    try:
        return _RUNNERS[config.scenario](config)
    except SchemaError as exc:
        _emit(config, _json_report({"error": {"kind": "SchemaError", "message": str(exc)}}))
        return EXIT_INPUT
    except UltradiskError as exc:
        _emit(config, _json_report({
            "error": {"kind": type(exc).__name__, "message": str(exc)}
        }))
        return EXIT_INPUT


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ultradisk",
        description="Exact nonarchimedean disk analysis: Newton polygons, "
        "disk seminorms, zero prescription, seminorm-family tables.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        sp = sub.add_parser(name)
        if name == "recipe":
            sp.add_argument("recipe_name", choices=RECIPES)
        sp.add_argument("--input", dest="input_path", default=None)
        sp.add_argument("--output", dest="output_path", default=None)
        sp.add_argument("--stages", type=int, default=2)
        sp.add_argument("--horizon", type=int, default=4)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    config = ExperimentConfig(
        scenario=args.scenario,
        input_path=args.input_path,
        output_path=args.output_path,
        stages=args.stages,
        horizon=args.horizon,
        seed=args.seed,
        format=args.format,
        recipe_name=getattr(args, "recipe_name", None),
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
