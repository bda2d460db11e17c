"""Command-line front end: reports, reference-table diffs, cache management.

Subcommands:

    report    full bound report + Galerkin estimate for one surface or all
    bounds    analytic bounds only (no matrix assembly); fast
    table2    computed geometry/bounds columns diffed against reference rows
    table3    computed Galerkin estimates diffed against reference rows
    subspace  negative-definiteness verdict + matrix dump for a basis choice
    cache     inspect or clear cached potential coefficient tables

Reports embed their full run configuration and a schema version; identical
configurations produce byte-identical output (no timestamps, sorted keys).
The cache directory comes from --cache-dir or the WENTE_CACHE_DIR variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .assembly import (
    AssemblyConfig,
    assemble,
    field_cache_key,
    read_field_cache,
)
from .bounds import (
    SUBSPACE_SETS,
    ConsistencyError,
    courant_bound,
    default_m,
    full_report,
    potential_sandwich,
    subspace_bound,
)
from .reference import REFERENCE_ESTIMATES, REFERENCE_GEOMETRY, estimate_row
from .spectrum import eigen_symmetric
from .surface import CATALOG, ParameterError, build_surface, catalog_surface, potential_extrema

SCHEMA_VERSION = 1
ENV_CACHE_DIR = "WENTE_CACHE_DIR"

# Diff tolerances for the reference tables (matching the precision at which
# the reference values were printed).
TOL_PERIOD = 0.01  # absolute, two printed decimals
TOL_VMAX_REL = 1e-3
TOL_RANGE_REL = 0.02


class UsageError(Exception):
    pass


def _parse_surface(text: str) -> tuple[int, int]:
    parts = text.split("/")
    if len(parts) != 2:
        raise UsageError(f"surface must look like 'l/n', got {text!r}")
    try:
        ell, n = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise UsageError(f"surface must be two integers, got {text!r}") from exc
    return ell, n


def _parse_grid(text: str) -> tuple[int, int]:
    if "x" in text:
        a, b = text.split("x", 1)
        return int(a), int(b)
    n = int(text)
    return n, n


def _selected_surfaces(args) -> list[tuple[int, int]]:
    if args.surface == "all":
        return [(ell, n) for ell, n, _ in CATALOG]
    return [_parse_surface(args.surface)]


def _build(args, ell: int, n: int):
    try:
        if args.theta is not None:
            return build_surface(ell, n, args.H, args.theta)
        return catalog_surface(ell, n, args.H)
    except ParameterError as exc:
        raise UsageError(str(exc)) from exc


def _run_config(args, **extra) -> dict:
    cfg = {
        "surface": args.surface,
        "H": args.H,
        "format": args.format,
        "cache_dir": args.cache_dir,
    }
    cfg.update(extra)
    return cfg


def _assembly_config(args) -> AssemblyConfig:
    nx = ny = None
    if getattr(args, "grid", None) is not None:
        nx, ny = args.grid
    method = getattr(args, "method", "fourier")
    if method == "both":
        method = "fourier"
    cache_dir = args.cache_dir or os.environ.get(ENV_CACHE_DIR) or None
    return AssemblyConfig(nx=nx, ny=ny, method=method, cache_dir=cache_dir)


def _emit(args, payload: dict, text_renderer) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif args.format == "csv":
        print(_render_csv(payload), end="")
    else:
        print(text_renderer(payload))


def _render_csv(payload: dict) -> str:
    rows = payload.get("rows") or payload.get("reports") or [payload]
    flat_rows = [_flatten(r) for r in rows]
    fields = sorted({k for r in flat_rows for k in r})
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=fields)
    writer.writeheader()
    for r in flat_rows:
        writer.writerow(r)
    return out.getvalue()


def _flatten(obj: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in obj.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        elif isinstance(value, (list, tuple)):
            flat[name] = ";".join(_fmt6(v) if isinstance(v, float) else str(v) for v in value)
        elif isinstance(value, float):
            flat[name] = _fmt6(value)
        else:
            flat[name] = value
    return flat


def _fmt6(x: float) -> str:
    return f"{x:.6g}"


# --- report ----------------------------------------------------------------

def cmd_report(args) -> int:
    surfaces = _selected_surfaces(args)
    cfg = _assembly_config(args)

    def one(label):
        ell, n = label
        p = _build(args, ell, n)
        m = args.m
        if m is None:
            try:
                m = estimate_row(p.label).m
            except KeyError:
                m = default_m(p)
        report = full_report(p, m, cfg, zero_tol=args.zero_tol)
        out = report.to_dict()
        if args.method == "both":
            fourier = assemble(p, m, cfg)
            quad_cfg = AssemblyConfig(nx=cfg.nx, ny=cfg.ny, method="quadrature")
            quad = assemble(p, m, quad_cfg)
            out["method_discrepancy"] = float(np.max(np.abs(fourier.entries - quad.entries)))
        return out

    workers = min(args.jobs, len(surfaces)) or 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(one, surfaces))
    else:
        reports = [one(s) for s in surfaces]

    payload = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "config": _run_config(args, m=args.m, grid=args.grid, method=args.method, zero_tol=args.zero_tol),
        "reports": reports,
    }
    _emit(args, payload, _render_report_text)
    return 0


def _render_report_text(payload: dict) -> str:
    lines = []
    for r in payload["reports"]:
        lines.append(f"surface {r['surface']}  (H={_fmt6(r['H'])}, m={r['m_used']})")
        lines.append(f"  nodal-domain lower bound : {r['courant_lower']}")
        lines.append(f"  sandwich bounds          : {r['sandwich_lower']} .. {r['sandwich_upper']}")
        if r["subspace_lower"] is not None:
            lines.append(f"  certified subspace bound : {r['subspace_lower']}")
        lines.append(f"  negative eigenvalues     : {r['galerkin_k']}")
        lines.append(
            "  index estimate           : {} or {}".format(r["index_estimate"][0], r["index_estimate"][1])
        )
        lines.append(
            "  negative range           : ({}, {})".format(
                _fmt6(r["negative_range"][0]), _fmt6(r["negative_range"][1])
            )
        )
        lines.append(
            "  first six positive       : ({}, {})".format(
                _fmt6(r["first_positive_six"][0]), _fmt6(r["first_positive_six"][1])
            )
        )
        if "method_discrepancy" in r:
            lines.append(f"  fourier vs quadrature    : {_fmt6(r['method_discrepancy'])}")
        for note in r["notes"]:
            lines.append(f"  note: {note}")
    return "\n".join(lines)


# --- bounds ----------------------------------------------------------------

def cmd_bounds(args) -> int:
    rows = []
    for ell, n in _selected_surfaces(args):
        p = _build(args, ell, n)
        sandwich = potential_sandwich(p)
        v_min, v_max = potential_extrema(p)
        row = {
            "surface": p.label,
            "x_period": p.x_period,
            "y_period": p.y_period,
            "v_min": v_min,
            "v_max": v_max,
            "courant_lower": courant_bound(ell, n),
            "sandwich_lower": sandwich.lower,
            "sandwich_upper": sandwich.upper,
        }
        rows.append(row)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "config": _run_config(args),
        "rows": rows,
    }
    _emit(args, payload, _render_bounds_text)
    return 0


def _render_bounds_text(payload: dict) -> str:
    header = f"{'surface':>8} {'x':>8} {'y':>8} {'V_min':>8} {'V_max':>10} {'nodal':>6} {'lo':>6} {'hi':>6}"
    lines = [header]
    for r in payload["rows"]:
        lines.append(
            f"{r['surface']:>8} {_fmt6(r['x_period']):>8} {_fmt6(r['y_period']):>8} "
            f"{_fmt6(r['v_min']):>8} {_fmt6(r['v_max']):>10} "
            f"{r['courant_lower']:>6} {r['sandwich_lower']:>6} {r['sandwich_upper']:>6}"
        )
    return "\n".join(lines)


# --- table2 ----------------------------------------------------------------

def cmd_table2(args) -> int:
    rows = []
    for ref in REFERENCE_GEOMETRY:
        ell, n = _parse_surface(ref.surface)
        p = build_surface(ell, n, args.H, ref.theta_degrees)
        v_min, v_max = potential_extrema(p)
        sandwich = potential_sandwich(p)
        computed = {
            "x_period": p.x_period,
            "y_period": p.y_period,
            "v_min": v_min,
            "v_max": v_max,
            "courant_lower": courant_bound(ell, n),
            "sandwich_lower": sandwich.lower,
            "sandwich_upper": sandwich.upper,
        }
        checks = {
            "x_period": abs(p.x_period - ref.x_period) <= TOL_PERIOD,
            "y_period": abs(p.y_period - ref.y_period) <= ref.y_tolerance,
            "v_min": abs(v_min - ref.v_min) <= 1e-12,
            "v_max": abs(v_max - ref.v_max) <= TOL_VMAX_REL * ref.v_max,
            "courant_lower": computed["courant_lower"] == ref.courant_lower,
            "sandwich_lower": sandwich.lower == ref.sandwich_lower,
            "sandwich_upper": sandwich.upper == ref.sandwich_upper,
        }
        rows.append(
            {
                "surface": ref.surface,
                "computed": computed,
                "reference": ref._asdict(),
                "pass": checks,
                "all_pass": all(checks.values()),
            }
        )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "config": _run_config(args),
        "rows": rows,
        "all_pass": all(r["all_pass"] for r in rows),
    }
    _emit(args, payload, _render_diff_text)
    return 0


def _render_diff_text(payload: dict) -> str:
    lines = []
    for r in payload["rows"]:
        status = "ok" if r["all_pass"] else "DIFF"
        lines.append(f"{r['surface']:>8}  {status}")
        if not r["all_pass"]:
            for key, ok in r["pass"].items():
                if not ok:
                    computed = r["computed"][key]
                    ref = r["reference"][key]
                    lines.append(f"          {key}: computed={computed!r} reference={ref!r}")
    lines.append("all rows pass" if payload["all_pass"] else "some cells differ")
    return "\n".join(lines)


# --- table3 ----------------------------------------------------------------

def _range_ok(computed: tuple[float, float], ref: tuple[float, float]) -> bool:
    return all(
        abs(c - r) <= TOL_RANGE_REL * abs(r) for c, r in zip(computed, ref)
    )


def cmd_table3(args) -> int:
    if args.surface == "all":
        refs = list(REFERENCE_ESTIMATES)
    else:
        ell, n = _parse_surface(args.surface)
        refs = [estimate_row(f"{ell}/{n}")]
    cfg = _assembly_config(args)

    def one(ref):
        ell, n = _parse_surface(ref.surface)
        p = build_surface(ell, n, args.H)
        report = full_report(p, args.m or ref.m, cfg, zero_tol=args.zero_tol)
        checks = {
            "galerkin_k": report.galerkin_k == ref.galerkin_k,
            "negative_range": _range_ok(report.negative_range, ref.negative_range),
            "first_positive_six": _range_ok(report.first_positive_six, ref.first_positive_six),
        }
        if ref.subspace_lower is not None:
            checks["subspace_lower"] = report.subspace_lower == ref.subspace_lower
        return {
            "surface": ref.surface,
            "computed": report.to_dict(),
            "reference": {
                "subspace_lower": ref.subspace_lower,
                "galerkin_k": ref.galerkin_k,
                "m": ref.m,
                "negative_range": list(ref.negative_range),
                "first_positive_six": list(ref.first_positive_six),
            },
            "pass": checks,
            "all_pass": all(checks.values()),
        }

    workers = min(args.jobs, len(refs)) or 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, refs))
    else:
        rows = [one(ref) for ref in refs]

    payload = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "config": _run_config(args, m=args.m, grid=args.grid, zero_tol=args.zero_tol),
        "rows": rows,
        "all_pass": all(r["all_pass"] for r in rows),
    }
    _emit(args, payload, _render_table3_text)
    return 0


def _render_table3_text(payload: dict) -> str:
    lines = []
    for r in payload["rows"]:
        c = r["computed"]
        status = "ok" if r["all_pass"] else "DIFF"
        lines.append(
            f"{r['surface']:>8}  m={c['m_used']:<4d} k={c['galerkin_k']:<4d} "
            f"neg=({_fmt6(c['negative_range'][0])}, {_fmt6(c['negative_range'][1])}) "
            f"six=({_fmt6(c['first_positive_six'][0])}, {_fmt6(c['first_positive_six'][1])})  {status}"
        )
        if not r["all_pass"]:
            for key, ok in r["pass"].items():
                if not ok:
                    lines.append(
                        f"          {key}: computed={r['computed'][key]!r} reference={r['reference'][key]!r}"
                    )
    lines.append("all rows pass" if payload["all_pass"] else "some cells differ")
    return "\n".join(lines)


# --- subspace ----------------------------------------------------------------

def cmd_subspace(args) -> int:
    ell, n = _parse_surface(args.surface)
    p = _build(args, ell, n)
    if args.indices == "published":
        if p.label not in SUBSPACE_SETS:
            raise UsageError(f"no published index set for {p.label}")
        indices = SUBSPACE_SETS[p.label]
    else:
        try:
            indices = tuple(int(tok) for tok in args.indices.split(",") if tok.strip())
        except ValueError as exc:
            raise UsageError(f"bad index list {args.indices!r}") from exc
        if not indices:
            raise UsageError("index list is empty")
    verdict = subspace_bound(p, indices, _assembly_config(args))
    payload = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "config": _run_config(args, indices=list(indices)),
        "surface": p.label,
        "indices": list(indices),
        "negative_definite": verdict.negative_definite,
        "implied_lower": verdict.implied_lower,
        "max_eigenvalue": verdict.max_eigenvalue,
        "matrix": [[float(v) for v in row] for row in verdict.matrix],
        "matrix_3sf": [[float(f"{v:.3g}") for v in row] for row in verdict.matrix],
    }
    _emit(args, payload, _render_subspace_text)
    return 0


def _render_subspace_text(payload: dict) -> str:
    lines = [
        f"surface {payload['surface']}  indices {payload['indices']}",
        f"negative definite : {payload['negative_definite']}",
        f"implied lower bound: {payload['implied_lower']}",
        f"largest eigenvalue : {_fmt6(payload['max_eigenvalue'])}",
        "matrix (3 significant figures):",
    ]
    for row in payload["matrix_3sf"]:
        lines.append("  " + " ".join(f"{v:9.3g}" for v in row))
    return "\n".join(lines)


# --- cache -------------------------------------------------------------------

def _cache_dir(args) -> Path:
    target = args.cache_dir or os.environ.get(ENV_CACHE_DIR)
    if not target:
        raise UsageError(f"no cache directory; pass --cache-dir or set {ENV_CACHE_DIR}")
    return Path(target)


def cmd_cache(args) -> int:
    directory = _cache_dir(args)
    entries = sorted(directory.glob("*.wntpot")) if directory.exists() else []
    if args.action == "inspect":
        rows = []
        for path in entries:
            fld = read_field_cache(path)
            key = field_cache_key(fld.surface, fld.nx, fld.ny)
            rows.append(
                {
                    "file": path.name,
                    "surface": fld.surface.label,
                    "H": key[2],
                    "theta_degrees": key[3],
                    "nx": fld.nx,
                    "ny": fld.ny,
                    "coefficients": list(fld.coeffs.shape),
                }
            )
        payload = {
            "schema_version": SCHEMA_VERSION,
            "version": __version__,
            "cache_dir": str(directory),
            "rows": rows,
        }
        _emit(args, payload, lambda p: "\n".join(r["file"] for r in p["rows"]) or "(empty)")
        return 0
    for path in entries:
        path.unlink()
    print(f"removed {len(entries)} cached table(s) from {directory}")
    return 0


# --- parser ------------------------------------------------------------------

def _add_common(sub, grid=True, m=False, method=False) -> None:
    sub.add_argument("--surface", default="all", help="surface label l/n, or 'all'")
    sub.add_argument("-H", "--mean-curvature", dest="H", type=float, default=0.5)
    sub.add_argument("--theta", type=float, default=None, help="override the catalogued angle (degrees)")
    sub.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sub.add_argument("--cache-dir", default=None)
    sub.add_argument("--jobs", type=int, default=min(4, os.cpu_count() or 1))
    if grid:
        sub.add_argument("--grid", type=_parse_grid, default=None, help="N or NXxNY samples")
    if m:
        sub.add_argument("--m", type=int, default=None, help="truncation size (default: reference size)")
    if method:
        sub.add_argument("--method", choices=("fourier", "quadrature", "both"), default="fourier")
    sub.add_argument("--zero-tol", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wente-index",
        description="Morse index bounds and Galerkin estimates for symmetric Wente tori",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    _add_common(subs.add_parser("report", help="full report per surface"), m=True, method=True)
    _add_common(subs.add_parser("bounds", help="analytic bounds only"), grid=False)
    _add_common(subs.add_parser("table2", help="diff geometry and bounds against reference"), grid=False)
    _add_common(subs.add_parser("table3", help="diff Galerkin estimates against reference"), m=True)
    sub = subs.add_parser("subspace", help="negative definiteness of a basis selection")
    _add_common(sub)
    sub.add_argument("--indices", default="published", help="comma list of 1-based indices, or 'published'")
    sub = subs.add_parser("cache", help="inspect or clear the coefficient cache")
    sub.add_argument("action", choices=("inspect", "clear"))
    sub.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sub.add_argument("--cache-dir", default=None)
    return parser


_COMMANDS = {
    "report": cmd_report,
    "bounds": cmd_bounds,
    "table2": cmd_table2,
    "table3": cmd_table3,
    "subspace": cmd_subspace,
    "cache": cmd_cache,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        parser.exit(2, f"error: {exc}\n")
    except (ParameterError, ValueError) as exc:
        parser.exit(2, f"error: {exc}\n")
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
