"""Command-line interface: charfn, eigs, reconstruct, verify.

Exit codes: 0 success, 1 verification failure, 2 config/input error,
3 numeric failure, 4 catalog assignment/coverage failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import errors
from .charfn import charfn_for, free_charfn
from .graph import Problem, graph_from_json, validate
from .oracle import richardson_eigs
from .reconstruct import (
    compare,
    convergence_table,
    hadamard_reconstruct,
    leading_constant,
    result_to_csv,
)
from .spectrum import (
    SpectrumCatalog,
    catalog_to_csv,
    compute_catalog,
    entries_from_csv,
    epsilon_diagnostics,
)
from .trigpoly import build_frame, frame_to_json

CONFIG_ERRORS = (
    errors.IrrationalLength,
    errors.BadBreakpoints,
    errors.NoPendantEdge,
    errors.BadIndex,
    errors.GridTooCoarse,
    FileNotFoundError,
    json.JSONDecodeError,
    KeyError,
    ValueError,
)
CATALOG_ERRORS = (
    errors.AssignmentAmbiguity,
    errors.InsufficientCatalog,
    errors.ScanResolutionTooCoarse,
)
NUMERIC_ERRORS = (
    errors.UnresolvedMultiplicity,
    errors.DegenerateLeadingTerm,
    errors.ConstantFunction,
    errors.NearPole,
    FloatingPointError,
    OverflowError,
)


def parse_grid(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:step, got {spec!r}")
    start, stop, step = (float(x) for x in parts)
    if step <= 0 or stop < start:
        raise ValueError(f"bad grid {spec!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def thread_cap() -> int:
    raw = os.environ.get("LASSO_SPECTRA_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    return max(1, cap) if cap else min(4, os.cpu_count() or 1)


def chunked_eval(fn, grid: np.ndarray) -> np.ndarray:
    """Order-preserving parallel map over grid chunks (capped by env var)."""
    workers = thread_cap()
    if workers == 1 or grid.size < 256:
        return np.asarray(fn(grid), dtype=float)
    chunks = np.array_split(grid, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: np.asarray(fn(c), dtype=float), chunks))
    return np.concatenate(parts)


def _problem_from_args(args, graph) -> Problem:
    if args.problem == "L":
        return Problem.neumann()
    if args.j is None:
        raise errors.BadIndex("--problem Lj requires --j")
    problem = Problem.dirichlet(args.j)
    problem.check(graph)
    return problem


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_charfn(args) -> int:
    graph, _ = graph_from_json(args.config)
    problem = _problem_from_args(args, graph)
    if (args.rho is None) == (args.lam is None):
        raise ValueError("exactly one of --rho or --lambda is required")
    if args.rho is not None:
        grid = parse_grid(args.rho)
        values = chunked_eval(lambda r: charfn_for(graph, problem, r * r), grid)
        label = "rho"
    else:
        grid = parse_grid(args.lam)
        values = chunked_eval(lambda lam: charfn_for(graph, problem, lam), grid)
        label = "lambda"
    if not np.all(np.isfinite(values)):
        raise FloatingPointError("characteristic function overflowed on the grid")
    if args.format == "json":
        _write(json.dumps({label: grid.tolist(), "delta": values.tolist()}) + "\n", args.out)
    else:
        lines = [f"{label},delta"] + [f"{float(x)!r},{float(v)!r}" for x, v in zip(grid, values)]
        _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_eigs(args) -> int:
    graph, _ = graph_from_json(args.config)
    problem = _problem_from_args(args, graph)
    if args.rho_max <= 0:
        catalog_csv = "n,k,lambda,rho,rho0,eps,multiplicity\n"
        frame_json = json.dumps(frame_to_json(build_frame(graph, problem)), indent=2) + "\n"
    else:
        catalog = compute_catalog(graph, problem, args.rho_max)
        for entry in catalog.window_violations:
            sys.stderr.write(
                f"warning: entry (n={entry.n}, k={entry.k}) deviates by {entry.eps:.4g} "
                "from its grid point (low-spectrum window exceeded)\n"
            )
        catalog_csv = catalog_to_csv(catalog)
        frame_json = json.dumps(frame_to_json(catalog.frame), indent=2) + "\n"
    if args.out:
        Path(args.out + ".csv").write_text(catalog_csv)
        Path(args.out + ".frame.json").write_text(frame_json)
        sys.stdout.write(frame_json)
    else:
        sys.stdout.write(catalog_csv)
        sys.stderr.write(frame_json)
    return 0


def cmd_reconstruct(args) -> int:
    graph, potentials_known = graph_from_json(args.config)
    problem = _problem_from_args(args, graph)
    try:
        entries = entries_from_csv(Path(args.spectra).read_text())
    except ValueError as exc:
        raise errors.BadBreakpoints(f"malformed spectra CSV: {exc}") from exc
    frame = build_frame(graph, problem)
    rho_max = max((e.rho0 for e in entries), default=0.0)
    catalog = SpectrumCatalog(entries, frame, rho_max, problem.label())
    grid = parse_grid(args.lam) if args.lam else np.linspace(-5.0, 9.0, 200)
    result = hadamard_reconstruct(catalog, grid, args.n_max, frame)

    direct = None
    if potentials_known:
        direct = lambda lam: charfn_for(graph, problem, lam)  # noqa: E731
    csv_text = result_to_csv(result, direct)
    summary = {
        "n_max": result.n_max,
        "leading_const": result.leading_const,
        "max_error": compare(result, direct).max_rel if direct else None,
    }
    summary_json = json.dumps(summary, indent=2) + "\n"
    if args.out:
        Path(args.out + ".csv").write_text(csv_text)
        Path(args.out + ".summary.json").write_text(summary_json)
        sys.stdout.write(summary_json)
    else:
        sys.stdout.write(csv_text)
        sys.stderr.write(summary_json)
    return 0


def _verify_checks(graph, rho_max: float, n_max: int):
    rng = np.random.default_rng(7)
    problem = Problem.neumann()
    checks = []

    def record(name, passed, detail):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    # Wronskian of the fundamental system at random lambda on every edge.
    from .propagate import fundamental_solutions

    # lambda >= -4: hyperbolic growth keeps |C|,|S1| ~ cosh(kappa |e|), and the
    # absolute 1e-10 budget needs those below ~1e3.
    worst = 0.0
    for _ in range(200):
        lam = float(rng.uniform(-4.0, 400.0))
        for e in graph.edges:
            f = fundamental_solutions(e, lam, graph.unit_value)
            worst = max(worst, abs(f.wronskian() - 1.0))
    record("wronskian", worst <= 1e-10, {"max_deviation": worst})

    # Free closed form against the assembled function on the zero-potential twin.
    free_twin = graph.with_zero_potential()
    rho = rng.uniform(0.0, 50.0, size=200)
    direct = charfn_for(free_twin, problem, rho * rho)
    closed = free_charfn(graph, rho)
    scale = np.max(np.abs(closed)) or 1.0
    dev = float(np.max(np.abs(direct - closed)) / scale)
    record("free_closed_form", dev <= 1e-12, {"max_relative_deviation": dev})

    frame = build_frame(graph, problem)
    rho_probe = rng.uniform(0.0, 10.0 * frame.tau, size=500)
    per = float(np.max(np.abs(frame.poly(rho_probe + frame.tau) - frame.poly(rho_probe))))
    record("periodicity", per <= 1e-9 * frame.poly.deriv_scale(0), {"max_deviation": per})

    try:
        catalog = compute_catalog(graph, problem, rho_max)
        slots = len(frame.slots(rho_max))
        ok = len(catalog.entries) == slots
        window_ok = all(
            abs(e.eps) < frame.delta() / 2.0 for e in catalog.entries if e.lam >= 0.0
        )
        record(
            "catalog_bijection",
            ok and window_ok,
            {"entries": len(catalog.entries), "grid_points": slots, "windows_ok": window_ok},
        )
    except (errors.SpectraError,) as exc:
        record("catalog_bijection", False, {"error": str(exc)})
        catalog = None

    try:
        count = 6
        extrapolated = richardson_eigs(graph, problem, count, 60.0)
        lams = sorted(e.lam for e in catalog.entries)[:count] if catalog else []
        if len(lams) == count:
            rel = float(
                np.max(
                    np.abs(np.asarray(lams) - extrapolated)
                    / np.maximum(1.0, np.abs(extrapolated))
                )
            )
            record("oracle_agreement", rel <= 1e-3, {"max_relative_error": rel})
        else:
            record("oracle_agreement", False, {"error": "catalog too short"})
    except errors.SpectraError as exc:
        record("oracle_agreement", False, {"error": str(exc)})

    if catalog is not None and catalog.covers_truncation(n_max):
        lams = np.array(sorted(e.lam for e in catalog.entries))
        grid = np.linspace(-5.0, 9.0, 200)
        grid = grid[np.array([np.min(np.abs(l - lams)) > 1e-2 for l in grid])]
        result = hadamard_reconstruct(catalog, grid, n_max)
        report = compare(result, lambda lam: charfn_for(graph, problem, lam))
        record("reconstruction_round_trip", report.max_rel <= 1e-3, {"max_rel": report.max_rel})

        lam_ref = -1e3
        ratio_hat = hadamard_reconstruct(catalog, np.array([lam_ref]), n_max).values[0]
        d0 = frame.eval_lambda(lam_ref)
        ratio_hat /= d0
        ratio_direct = charfn_for(graph, problem, lam_ref) / d0
        ok = abs(ratio_hat - 1.0) <= 1e-2 and abs(ratio_direct - 1.0) <= 1e-2
        record(
            "normalization_limit",
            ok,
            {"recovered_over_free": float(ratio_hat), "direct_over_free": float(ratio_direct)},
        )

        diag = epsilon_diagnostics(catalog)
        record(
            "epsilon_diagnostics",
            True,  # reported, not asserted
            {f"family_{f.k}": {"bounded": f.bounded, "sum": f.partial_sums[-1] if f.partial_sums else 0.0} for f in diag.families},
        )
    else:
        record("reconstruction_round_trip", False, {"error": "catalog unavailable or too short"})
    return checks


def cmd_verify(args) -> int:
    graph, potentials_known = graph_from_json(args.config)
    validate(graph)
    tau = build_frame(graph, Problem.neumann()).tau
    if args.n_max:
        n_max = args.n_max
    elif args.rho_max:
        n_max = max(1, int(args.rho_max / tau) - 1)
    else:
        n_max = 100
    rho_max = args.rho_max if args.rho_max and args.rho_max > 0 else tau * (n_max + 1) + 1.0
    checks = _verify_checks(graph, rho_max, n_max)
    report = {
        "config": str(args.config),
        "potentials_known": potentials_known,
        "checks": checks,
        "all_passed": all(c["passed"] for c in checks),
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 0 if report["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lasso-spectra",
        description="Characteristic functions, spectra, and spectral reconstruction "
        "for Sturm-Liouville operators on a lasso graph.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="graph JSON config path")
        p.add_argument("--problem", choices=("L", "Lj"), default="L")
        p.add_argument("--j", type=int, default=None, help="pendant index for Lj")
        p.add_argument("--out", default=None, help="output path (base path for multi-file output)")

    p_charfn = sub.add_parser("charfn", help="evaluate a characteristic function on a grid")
    common(p_charfn)
    p_charfn.add_argument("--rho", default=None, help="rho grid start:stop:step")
    p_charfn.add_argument("--lambda", dest="lam", default=None, help="lambda grid start:stop:step")
    p_charfn.add_argument("--format", choices=("csv", "json"), default="csv")
    p_charfn.set_defaults(func=cmd_charfn)

    p_eigs = sub.add_parser("eigs", help="catalog eigenvalues against the unperturbed grid")
    common(p_eigs)
    p_eigs.add_argument("--rho-max", type=float, required=True)
    p_eigs.set_defaults(func=cmd_eigs)

    p_rec = sub.add_parser("reconstruct", help="recover the characteristic function from spectra")
    common(p_rec)
    p_rec.add_argument("--spectra", required=True, help="catalog CSV path")
    p_rec.add_argument("--n-max", type=int, default=100)
    p_rec.add_argument("--lambda", dest="lam", default=None, help="lambda grid start:stop:step")
    p_rec.set_defaults(func=cmd_reconstruct)

    p_ver = sub.add_parser("verify", help="run the invariant suite on a config")
    common(p_ver)
    p_ver.add_argument("--rho-max", type=float, default=None)
    p_ver.add_argument("--n-max", type=int, default=None)
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CATALOG_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 4
    except NUMERIC_ERRORS as exc:
        sys.stderr.write(f"numeric error: {exc}\n")
        return 3
    except CONFIG_ERRORS as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
