"""
Command line: ``zoneplan simulate|render|eval|batch``.

Exit status is 0 on success, 1 when an input file fails to load or
validate, and 2 on any other failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path

from .batch import run_batch
from .render import render_svg
from .scenario import ScenarioError, load_scenario
from .trace import Trace
from .world import run

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class InputError(Exception):
    pass


def _load_trace(path) -> Trace:
    try:
        return Trace.load(path)
    except (OSError, ValueError, KeyError) as e:
        raise InputError(f"{path}: cannot load trace: {e}") from e


def cmd_simulate(args) -> int:
    sc = load_scenario(Path(args.scenario))
    sc = sc.with_params(
        max_steps=args.max_steps,
        predictor=args.predictor,
        confidence=args.confidence,
        grid_cell=args.grid_cell,
        sensing_radius=args.sensing_radius,
    )
    tr = run(sc, args.seed)
    tr.save(args.out)
    t = tr.terminal
    print(f"outcome={t['outcome']} steps={t['steps']} objective={t['objective']} -> {args.out}")
    return EXIT_OK


def cmd_render(args) -> int:
    tr = _load_trace(args.trace)
    try:
        paths = render_svg(tr, args.steps, args.out_dir)
    except ValueError as e:
        raise InputError(str(e)) from e
    print(f"wrote {len(paths)} file(s) to {args.out_dir}")
    return EXIT_OK


def cmd_eval(args) -> int:
    tr = _load_trace(args.trace)
    t = tr.terminal
    obj = "invalid" if t["objective"] is None else f"{t['objective']:.6f}"
    print(f"objective: {obj}")
    print(f"steps: {t['steps']}")
    print(f"outcome: {t['outcome']}")
    print(f"valid: {str(t['valid']).lower()}")
    return EXIT_OK


def cmd_batch(args) -> int:
    try:
        report = run_batch(args.scenario_dir, args.seeds, args.base_seed, args.jobs, args.trace_dir)
    except FileNotFoundError as e:
        raise InputError(str(e)) from e
    Path(args.report).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    o = report["overall"]
    mean = "n/a" if o["mean_objective"] is None else f"{o['mean_objective']:.4f}"
    print(f"runs={o['runs']} success_rate={o['success_rate']:.3f} collision_rate={o['collision_rate']:.3f} "
          f"mean_objective={mean}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zoneplan", description="Safe-zone planner simulator.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run one scenario and write its trace")
    s.add_argument("--scenario", required=True)
    s.add_argument("--seed", type=int, default=None, help="unsigned 64-bit seed (default: scenario seed)")
    s.add_argument("--out", required=True, help="trace file to write")
    s.add_argument("--max-steps", type=int)
    s.add_argument("--predictor", choices=["mean", "naive-ar", "gen-ar"])
    s.add_argument("--confidence", type=float)
    s.add_argument("--grid-cell", type=float)
    s.add_argument("--sensing-radius", type=float)
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("render", help="write SVG snapshots of a trace")
    r.add_argument("--trace", required=True)
    r.add_argument("--steps", default="all", help="'a..b' inclusive, a single step, or 'all'")
    r.add_argument("--out-dir", required=True)
    r.set_defaults(func=cmd_render)

    e = sub.add_parser("eval", help="print the terminal record of a trace")
    e.add_argument("--trace", required=True)
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("batch", help="run every scenario in a directory over several seeds")
    b.add_argument("--scenario-dir", required=True)
    b.add_argument("--seeds", type=int, required=True)
    b.add_argument("--report", required=True)
    b.add_argument("--base-seed", type=int, default=0)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--trace-dir", default=None)
    b.set_defaults(func=cmd_batch)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", None) is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (ScenarioError, InputError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception:  # noqa: BLE001 - reported, mapped to the internal-error status
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
