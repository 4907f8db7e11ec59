"""Command-line interface: run scenarios, sweeps, and the builtin catalog.

Exit codes: 0 success, 2 bad input (parse/validation), 3 a verified
inequality failed (diagnostic dump on stderr), 4 resource caps exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    ActionInvalid,
    BoundViolation,
    GroupTooLarge,
    InvalidParameter,
    NeedsSubdivision,
    ResourceCapExceeded,
)
from .scenarios import (
    BUILTIN_NAMES,
    DEFAULT_FIELDS,
    Scenario,
    builtin,
    report_bytes,
    run_scenario,
    sweep,
)


def _emit(payload: dict, out_path: str | None) -> None:
    blob = report_bytes(payload)
    sys.stdout.write(blob.decode("utf-8"))
    if out_path:
        with open(out_path, "wb") as fh:
            fh.write(blob)


def _cmd_run(args) -> int:
    with open(args.file, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    scenario = Scenario.from_json_dict(data)
    if args.certified:
        scenario = Scenario.from_json_dict({**scenario.to_json_dict(), "certified": True})
    report = run_scenario(scenario, with_timings=args.timings, budget=args.budget)
    _emit(report, args.out)
    return 0


def _cmd_sweep(args) -> int:
    fields = tuple(args.fields.split(",")) if args.fields else DEFAULT_FIELDS
    report = sweep(
        n_max=args.n_max,
        samples=args.samples,
        seed=args.seed,
        fields=fields,
        jobs=args.jobs,
        max_model_simplices=args.max_model_simplices,
    )
    _emit(report, args.out)
    return 0


def _cmd_builtin(args) -> int:
    scenario = builtin(args.name, *args.params)
    if args.emit_scenario:
        _emit(scenario.to_json_dict(), args.out)
        return 0
    report = run_scenario(scenario, with_timings=args.timings, budget=args.budget)
    _emit(report, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqh",
        description="Exact homology of sphere quotients with verified uniform bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file")
    p_run.add_argument("file")
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--certified", action="store_true", help="force certified Q ranks")
    p_run.add_argument("--timings", action="store_true", help="include per-stage timings")
    p_run.add_argument("--budget", type=float, default=None, help="wall-clock budget (s)")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="randomized abelian bound sweep")
    p_sweep.add_argument("--n-max", type=int, default=4, dest="n_max")
    p_sweep.add_argument("--samples", type=int, default=50)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--fields", default=None, help="comma-separated labels, e.g. Q,Fp:2")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument(
        "--max-model-simplices",
        type=int,
        default=200_000,
        dest="max_model_simplices",
        help="size guard for the scenario generator",
    )
    p_sweep.set_defaults(func=_cmd_sweep)

    p_builtin = sub.add_parser("builtin", help=f"catalog: {', '.join(BUILTIN_NAMES)}")
    p_builtin.add_argument("name")
    p_builtin.add_argument("params", nargs="*", type=int)
    p_builtin.add_argument("--emit-scenario", action="store_true", dest="emit_scenario")
    p_builtin.add_argument("--out", default=None)
    p_builtin.add_argument("--timings", action="store_true")
    p_builtin.add_argument("--budget", type=float, default=None)
    p_builtin.set_defaults(func=_cmd_builtin)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BoundViolation as e:
        sys.stderr.write(f"inequality failure: {e}\n")
        sys.stderr.write(json.dumps(e.dump, sort_keys=True, indent=2) + "\n")
        return 3
    except json.JSONDecodeError as e:
        sys.stderr.write(f"parse error at line {e.lineno}, column {e.colno}: {e.msg}\n")
        return 2
    except (InvalidParameter, ActionInvalid, NeedsSubdivision, FileNotFoundError) as e:
        sys.stderr.write(f"invalid input: {e}\n")
        return 2
    except (ResourceCapExceeded, GroupTooLarge) as e:
        sys.stderr.write(f"resource cap exceeded: {e}\n")
        return 4


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
