"""Command-line entry points.

    arithdyn run     --config cfg.json [--seed S] [--out-dir DIR]
    arithdyn density --points pts.csv --degree D [--out-dir DIR]
    arithdyn degrees --map map.json --nmax N [--out-dir DIR]

Exit codes: 0 all assertions pass, 2 an assertion failed, 3 a resource cap
was hit, 4 the configuration is invalid.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .density import density_check, density_report_csv
from .degrees import dynamical_degree_exact, dynamical_degree_sequence
from .experiments import (
    EXIT_ASSERTION_FAILED,
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_RESOURCE,
    ConfigError,
    ExperimentConfig,
    run_experiment,
)
from .maps import map_from_json_dict, points_from_csv
from .qpoly import ResourceLimitError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arithdyn",
        description="Exact dynamical/arithmetic degree experiments for triangular polynomial maps",
    )
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument(
        "--out-dir", type=Path, default=None, help="directory for CSV/JSON reports"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a full experiment pipeline from a JSON config")
    run_p.add_argument("--config", type=Path, required=True)

    dens_p = sub.add_parser("density", help="exact-rank density proxy on a point set")
    dens_p.add_argument("--points", type=Path, required=True, help="CSV of num/den columns")
    dens_p.add_argument("--degree", type=int, required=True)

    degs_p = sub.add_parser("degrees", help="degree sequence of a map's iterates")
    degs_p.add_argument("--map", type=Path, required=True, help="JSON map description")
    degs_p.add_argument("--nmax", type=int, required=True)
    return parser


def _out_dir(args) -> Path:
    out = args.out_dir if args.out_dir is not None else Path("arithdyn-out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.from_json_file(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    out = args.out_dir or (Path(cfg.out_dir) if cfg.out_dir else Path("arithdyn-out"))
    result = run_experiment(cfg, out)
    for check in result.summary["checks"]:
        marker = "PASS" if check["passed"] else "FAIL"
        print(f"[{marker}] {check['name']}: {check['statement']}")
    print(f"summary written to {out / 'summary.json'}")
    return result.exit_code


def _cmd_density(args) -> int:
    points = points_from_csv(args.points.read_text(encoding="utf-8"))
    report = density_check(points, args.degree)
    out = _out_dir(args)
    (out / "density.csv").write_text(density_report_csv(report), encoding="utf-8")
    print(
        f"rank {report.rank} of {report.monomial_count} monomials on "
        f"{report.point_count} points: {report.verdict}"
    )
    return EXIT_OK if report.dense else EXIT_ASSERTION_FAILED


def _cmd_degrees(args) -> int:
    doc = json.loads(args.map.read_text(encoding="utf-8"))
    f = map_from_json_dict(doc)
    est = dynamical_degree_sequence(f, n_max=args.nmax)
    out = _out_dir(args)
    (out / "degrees.csv").write_text(est.to_csv(), encoding="utf-8")
    print(f"exact dynamical degree: {dynamical_degree_exact(f)}")
    for n, d, r in est.values:
        print(f"n={n}: deg={d} root={r:.6f}")
    if est.truncated:
        print("sequence truncated by the resource cap", file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "density":
            return _cmd_density(args)
        return _cmd_degrees(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceLimitError as err:
        print(f"resource cap exceeded: {err} {err.metadata}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, KeyError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
