"""Command-line front end.

Subcommands: sample, estimate, risk-table, calibrate, check-bounds.
Exit codes: 0 success, 1 failed bound check, 2 validation error, 3 numeric
failure, 4 calibration did not stabilize (and --fallback was not given).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .calibration import (FALLBACK_KAPPA, KappaGrid, chi_profile, select_kappa,
                          stabilization_index, write_chi_csv)
from .errors import NoStabilizationError, QuadratureError, UnsupportedModelError
from .estimator import (UGrid, default_u_max, default_u_step, default_x_grid,
                        ecf, adaptive_estimate, write_ecf_csv, write_estimate_csv)
from .models import LevyTriplet, StableJumpDensity
from .risk import (ExperimentConfig, adaptive_risk_bound_check,
                   cutoff_risk_bound_check, relative_l2_risk, risk_table_csv)
from .sampling import IncrementSample, SeedSpec, sample_increments, write_increments_csv

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_NO_STABILIZATION = 4


def _env_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("LEVYSPEC_SEED")
    return int(env) if env else 0


def _meta(args: argparse.Namespace, command: str, resolved: dict) -> list[str]:
    lines = [f"levyspec {__version__} {command}"]
    lines += [f"{k}={v}" for k, v in resolved.items()]
    if not getattr(args, "no_meta", False):
        lines.append(f"generated={datetime.now(timezone.utc).isoformat()}")
    return lines


def _triplet_from_args(args: argparse.Namespace) -> LevyTriplet:
    jumps = None
    if args.alpha is not None:
        if (args.P or 0.0) + (args.Q or 0.0) <= 0:
            raise ValueError("stable jumps need P + Q > 0")
        jumps = StableJumpDensity(args.P or 0.0, args.Q or 0.0, args.alpha)
    return LevyTriplet(args.b, args.sigma2, jumps)


def read_values_csv(path: str, difference: bool = False) -> np.ndarray:
    """Read one- or two-column numeric CSV; optional header and # comments."""
    values = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            if len(cells) not in (1, 2):
                raise ValueError(f"{path}:{lineno}: expected 1 or 2 columns, got {len(cells)}")
            try:
                values.append(float(cells[-1]))
            except ValueError:
                if not values:
                    continue  # header row before any data
                raise ValueError(f"{path}:{lineno}: non-numeric cell {cells[-1]!r}") from None
    if not values:
        raise ValueError(f"{path}: no numeric rows found")
    data = np.asarray(values)
    if difference:
        if data.size < 2:
            raise ValueError(f"{path}: need at least 2 level observations to difference")
        data = np.diff(data)
    return data


# ---------------------------------------------------------------------------
# subcommands

def _cmd_sample(args) -> int:
    seed = _env_seed(args.seed)
    triplet = _triplet_from_args(args)
    sample = sample_increments(triplet, args.delta, args.n, SeedSpec(seed, args.trial))
    meta = _meta(args, "sample", {
        "alpha": args.alpha, "P": args.P, "Q": args.Q, "sigma2": args.sigma2,
        "b": args.b, "delta": args.delta, "n": args.n, "seed": seed,
        "trial": args.trial})
    write_increments_csv(sample, args.out, meta)
    print(f"wrote {args.n} increments to {args.out}")
    return EXIT_OK


def _resolve_grid(delta: float, umax: float | None, step: float | None) -> UGrid:
    u_max = umax if umax is not None else default_u_max(delta)
    return UGrid.make(u_max, step if step is not None else default_u_step(u_max))


def _cmd_estimate(args) -> int:
    seed = _env_seed(args.seed)
    if args.data:
        values = read_values_csv(args.data, difference=args.difference)
        sample = IncrementSample(args.delta, values, len(values),
                                 {"source": args.data, "differenced": args.difference})
    else:
        if args.alpha is None and args.sigma2 == 0.0:
            raise ValueError("need --data or model flags (--alpha/--P/--Q or --sigma2)")
        if args.n is None:
            raise ValueError("model-based estimation needs --n")
        triplet = _triplet_from_args(args)
        sample = sample_increments(triplet, args.delta, args.n, SeedSpec(seed, args.trial))
    grid = _resolve_grid(args.delta, args.umax, args.step)
    grid = grid.restrict(float(sample.n))
    phi_hat = ecf(sample, grid)
    if args.kappa == "auto":
        try:
            kappa = select_kappa(phi_hat, KappaGrid(args.kappa_step, args.kappa_count))
            kappa_note = f"auto->{kappa:g}"
        except NoStabilizationError:
            if not args.fallback:
                raise
            kappa = FALLBACK_KAPPA
            kappa_note = f"auto->fallback {kappa:g}"
    else:
        kappa = float(args.kappa)
        kappa_note = f"{kappa:g}"
    x_grid = default_x_grid(sample.values, points=args.xgrid)
    est = adaptive_estimate(sample, kappa, grid, x_grid)
    resolved = {"delta": args.delta, "umax": grid.u_max, "step": grid.step,
                "kappa": kappa_note, "n": sample.n, "seed": seed,
                "xgrid": args.xgrid}
    write_estimate_csv(est, args.out, _meta(args, "estimate", resolved))
    ecf_out = args.ecf_out or _derived_path(args.out, "_ecf")
    write_ecf_csv(phi_hat, ecf_out, _meta(args, "estimate", resolved))
    print(f"kappa={kappa:.17g}")
    print(f"wrote density to {args.out} and ECF to {ecf_out}")
    return EXIT_OK


def _derived_path(path: str, suffix: str) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}{suffix}{ext or '.csv'}"


def _cmd_risk_table(args) -> int:
    with open(args.config) as fh:
        doc = json.load(fh)
    cells = doc if isinstance(doc, list) else doc.get("experiments", [doc])
    configs = [ExperimentConfig.from_dict(c) for c in cells]
    if args.seed is not None or os.environ.get("LEVYSPEC_SEED"):
        seed = _env_seed(args.seed)
        configs = [replace(c, master_seed=seed) for c in configs]
    reports = []
    for config in configs:
        reports.extend(relative_l2_risk(config, max_workers=args.threads))
    meta = _meta(args, "risk-table", {"config": args.config, "threads": args.threads})
    csv_text = risk_table_csv(reports, meta)
    with open(args.out, "w") as fh:
        fh.write(csv_text)
    print(f"wrote {len(reports)} rows to {args.out}")
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    values = read_values_csv(args.data, difference=args.difference)
    sample = IncrementSample(args.delta, values, len(values), {"source": args.data})
    grid = _resolve_grid(args.delta, args.umax, args.step)
    grid = grid.restrict(float(sample.n))
    phi_hat = ecf(sample, grid)
    kgrid = KappaGrid(args.kappa_step, args.kappa_count)
    kappas, chis = chi_profile(phi_hat, kgrid)
    meta = _meta(args, "calibrate", {
        "data": args.data, "delta": args.delta, "umax": grid.u_max,
        "step": grid.step, "kappa-step": args.kappa_step,
        "kappa-count": args.kappa_count})
    if args.out:
        write_chi_csv(kappas, chis, args.out, meta)
    else:
        print("kappa,chi")
        for kap, chi in zip(kappas, chis):
            print(f"{kap:.17g},{int(chi)}")
    k = stabilization_index(chis)
    if k is None:
        if not args.fallback:
            raise NoStabilizationError("no stabilization on the kappa grid", chis)
        print(f"kappa={FALLBACK_KAPPA:.17g} (fallback; chi never stabilized)")
        return EXIT_OK
    print(f"kappa={kappas[k]:.17g}")
    return EXIT_OK


def _cmd_check_bounds(args) -> int:
    seed = _env_seed(args.seed)
    if args.which == "thm1":
        report = cutoff_risk_bound_check(args.delta, args.n, trials=args.trials,
                                         master_seed=seed)
        for row in report.rows:
            print(f"m={row['m']:<6g} empirical={row['empirical']:.6e} "
                  f"bound={row['bound']:.6e} margin={row['margin']:+.3e} "
                  f"{'ok' if row['ok'] else 'VIOLATED'}")
    else:
        kappa = args.kappa if args.kappa is not None else FALLBACK_KAPPA
        report = adaptive_risk_bound_check(args.delta, args.n, kappa=kappa,
                                           trials=args.trials, master_seed=seed)
        row = report.rows[0]
        print(f"kappa={row['kappa']:g} empirical={row['empirical']:.6e} "
              f"bound={row['bound']:.6e} margin={row['margin']:+.3e} "
              f"{'ok' if row['ok'] else 'VIOLATED'}")
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# parser

def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=None, help="stable index in (0,2)")
    p.add_argument("--P", type=float, default=0.0, help="right tail constant")
    p.add_argument("--Q", type=float, default=0.0, help="left tail constant")
    p.add_argument("--sigma2", type=float, default=0.0, help="diffusion coefficient")
    p.add_argument("--b", type=float, default=0.0, help="drift")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="levyspec",
                                 description="Spectral estimation of Levy increment densities")
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sample", help="simulate increments to CSV")
    _add_model_flags(ps)
    ps.add_argument("--delta", type=float, required=True, help="sampling rate")
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--trial", type=int, default=0)
    ps.add_argument("--out", required=True)
    ps.add_argument("--no-meta", action="store_true")
    ps.set_defaults(func=_cmd_sample)

    pe = sub.add_parser("estimate", help="estimate the increment density")
    pe.add_argument("--data", default=None, help="increments CSV (or levels with --difference)")
    pe.add_argument("--difference", action="store_true",
                    help="difference level observations to increments")
    _add_model_flags(pe)
    pe.add_argument("--n", type=int, default=None, help="sample size when simulating")
    pe.add_argument("--delta", type=float, required=True)
    pe.add_argument("--umax", type=float, default=None)
    pe.add_argument("--step", type=float, default=None)
    pe.add_argument("--kappa", default="auto", help="threshold constant or 'auto'")
    pe.add_argument("--kappa-step", type=float, default=0.05)
    pe.add_argument("--kappa-count", type=int, default=100)
    pe.add_argument("--fallback", action="store_true",
                    help="fall back to kappa=2*sqrt(2) when calibration fails")
    pe.add_argument("--xgrid", type=int, default=512, help="number of x points")
    pe.add_argument("--seed", type=int, default=None)
    pe.add_argument("--trial", type=int, default=0)
    pe.add_argument("--out", required=True)
    pe.add_argument("--ecf-out", default=None)
    pe.add_argument("--no-meta", action="store_true")
    pe.set_defaults(func=_cmd_estimate)

    pr = sub.add_parser("risk-table", help="Monte-Carlo relative-risk table")
    pr.add_argument("--config", required=True, help="JSON experiment config")
    pr.add_argument("--out", required=True)
    pr.add_argument("--seed", type=int, default=None, help="override master seed")
    pr.add_argument("--threads", type=int, default=1)
    pr.add_argument("--no-meta", action="store_true")
    pr.set_defaults(func=_cmd_risk_table)

    pc = sub.add_parser("calibrate", help="Euler-characteristic kappa selection")
    pc.add_argument("--data", required=True)
    pc.add_argument("--difference", action="store_true")
    pc.add_argument("--delta", type=float, required=True)
    pc.add_argument("--umax", type=float, default=None)
    pc.add_argument("--step", type=float, default=None)
    pc.add_argument("--kappa-step", type=float, default=0.05)
    pc.add_argument("--kappa-count", type=int, default=100)
    pc.add_argument("--fallback", action="store_true")
    pc.add_argument("--out", default=None, help="kappa,chi CSV path")
    pc.add_argument("--no-meta", action="store_true")
    pc.set_defaults(func=_cmd_calibrate)

    pb = sub.add_parser("check-bounds", help="empirical risk-bound verification")
    pb.add_argument("--which", choices=("thm1", "thm4"), required=True,
                    help="thm1: fixed-cutoff risk bound; thm4: adaptive oracle bound")
    pb.add_argument("--delta", type=float, required=True)
    pb.add_argument("--n", type=int, required=True)
    pb.add_argument("--trials", type=int, default=100)
    pb.add_argument("--kappa", type=float, default=None, help="thm4 threshold constant")
    pb.add_argument("--seed", type=int, default=None)
    pb.set_defaults(func=_cmd_check_bounds)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NoStabilizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_STABILIZATION
    except (QuadratureError, ArithmeticError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, UnsupportedModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
