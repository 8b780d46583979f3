"""Command line front end.

    crossedlab run [--config cfg.json] [--suite NAME ...] [--seed N]
                   [--trials N] [--oracle] [--out report.json] [--json-only]
    crossedlab convergence [--config cfg.json] [--suite NAME ...]
                   [--points 128,256,512] [--out study.csv]
    crossedlab list

Exit codes: 0 all checks passed, 1 at least one check or ratio failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from .config import LabConfig, load_config
from .errors import ConfigError, LabError
from .verify import (
    CONVERGENCE_SUITES,
    SUITES,
    SUITE_NAMES,
    convergence_study,
    run_suites,
)

REPORT_VERSION = 1


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".crossedlab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _build_config(args) -> LabConfig:
    config = load_config(args.config) if args.config else LabConfig()
    changes = {}
    if getattr(args, "suite", None):
        changes["suites"] = tuple(args.suite)
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        changes["trials"] = args.trials
    if getattr(args, "oracle", False):
        changes["oracle"] = True
    return config.replace(**changes) if changes else config


def _resolve_suites(config: LabConfig, allowed=None) -> list[str]:
    names = list(config.suites) if config.suites else list(allowed or SUITE_NAMES)
    for name in names:
        pool = allowed or SUITE_NAMES
        if name not in pool:
            raise ConfigError(
                f"unknown suite {name!r}; available: {', '.join(pool)}"
            )
    return names


def _config_summary(config: LabConfig) -> dict:
    return {
        "half_width": config.half_width,
        "points": config.points,
        "circle_points": config.circle_points,
        "dim": config.dim,
        "action_kind": config.action_kind,
        "generator_norm": config.generator_norm,
        "seed": config.seed,
        "trials": config.trials,
        "oracle": config.oracle,
    }


def _cmd_run(args) -> int:
    config = _build_config(args)
    names = _resolve_suites(config)
    reports = run_suites(names, config)
    doc = {
        "version": REPORT_VERSION,
        "config": _config_summary(config),
        "reports": [r.to_dict() for r in reports],
        "passed": all(r.passed for r in reports),
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        _atomic_write(args.out, text + "\n")
    if args.json_only:
        print(text)
    else:
        for r in reports:
            mark = "PASS" if r.passed else "FAIL"
            print(f"[{mark}] {r.suite}  ({len(r.checks)} checks, {r.elapsed_s:.2f}s)")
            for c in sorted(r.checks, key=lambda c: c.name):
                cm = "ok " if c.passed else "BAD"
                print(f"    {cm} {c.name:58s} {c.residual:12.3e} <= {c.tolerance:.1e}")
        total = sum(len(r.checks) for r in reports)
        failed = sum(1 for r in reports for c in r.checks if not c.passed)
        print(f"{total - failed}/{total} checks passed")
        if args.out:
            print(f"report written to {args.out}")
    return 0 if doc["passed"] else 1


def _cmd_convergence(args) -> int:
    config = _build_config(args)
    names = _resolve_suites(config, allowed=list(CONVERGENCE_SUITES))
    try:
        points = [int(p) for p in args.points.split(",")]
    except ValueError:
        raise ConfigError(f"--points must be comma-separated integers, got {args.points!r}")
    if not points:
        raise ConfigError("--points needs at least one grid size")
    all_ok = True
    csv_rows = []
    for name in names:
        rows, ok = convergence_study(config, name, points)
        all_ok = all_ok and ok
        if not args.json_only:
            print(f"{name}: {'PASS' if ok else 'FAIL'} (>=10x residual drop per doubling)")
            for row in rows:
                ratio = row.get("ratio")
                rtxt = f"  ratio {ratio:9.2e}" if ratio is not None else ""
                print(f"    N={row['points']:5d}  worst {row['worst_residual']:12.3e}{rtxt}")
        for row in rows:
            for check, resid in row["residuals"].items():
                csv_rows.append(
                    {
                        "suite": name,
                        "points": row["points"],
                        "check": check,
                        "residual": f"{resid:.17g}",
                        "worst_residual": f"{row['worst_residual']:.17g}",
                        "ratio": f"{row['ratio']:.17g}" if "ratio" in row else "",
                    }
                )
    if args.out:
        fields = ["suite", "points", "check", "residual", "worst_residual", "ratio"]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        writer.writerows(csv_rows)
        _atomic_write(args.out, buf.getvalue())
        if not args.json_only:
            print(f"csv written to {args.out}")
    if args.json_only:
        print(json.dumps({"passed": all_ok, "rows": csv_rows}, indent=2, sort_keys=True))
    return 0 if all_ok else 1


def _cmd_list(args) -> int:
    width = max(len(n) for n in SUITE_NAMES)
    for name in SUITE_NAMES:
        print(f"{name:{width}s}  {SUITES[name][1]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossedlab",
        description="numerical verification of crossed-product operator identities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run verification suites")
    run.add_argument("--config", help="JSON config file")
    run.add_argument("--suite", action="append", help="suite name (repeatable)")
    run.add_argument("--seed", type=int)
    run.add_argument("--trials", type=int)
    run.add_argument("--oracle", action="store_true", help="also check against direct quadrature")
    run.add_argument("--out", help="write a JSON report here")
    run.add_argument("--json-only", action="store_true", help="print only the JSON report")
    run.set_defaults(fn=_cmd_run)

    conv = sub.add_parser("convergence", help="residual decay across grid sizes")
    conv.add_argument("--config", help="JSON config file")
    conv.add_argument("--suite", action="append", help="convergence suite (repeatable)")
    conv.add_argument("--points", default="128,256,512", help="comma-separated grid sizes")
    conv.add_argument("--out", help="write a CSV table here")
    conv.add_argument("--json-only", action="store_true", help="print only a JSON summary")
    conv.set_defaults(fn=_cmd_convergence)

    lst = sub.add_parser("list", help="list available suites")
    lst.set_defaults(fn=_cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except LabError as e:
        print(f"verification aborted: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
