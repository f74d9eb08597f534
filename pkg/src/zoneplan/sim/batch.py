"""
Batch runs: every scenario in a directory under several derived seeds.

Runs share nothing; with ``jobs > 1`` they go to a process pool and the
report is assembled in a fixed order, so it does not depend on scheduling.
"""

from __future__ import annotations

import zlib
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .scenario import load_scenario
from .world import COLLISION, GOAL, run


def derive_seed(base: int, scenario_name: str, index: int) -> int:
    """Independent 64-bit seed for run ``index`` of a scenario."""
    ss = np.random.SeedSequence(base, spawn_key=(zlib.crc32(scenario_name.encode()), index))
    return int(ss.generate_state(1, np.uint64)[0])


def _one(job):
    path, seed, trace_dir = job
    sc = load_scenario(path)
    tr = run(sc, seed)
    if trace_dir is not None:
        tr.save(Path(trace_dir) / f"{Path(path).stem}__{seed}.json")
    t = tr.terminal
    return {"seed": seed, "outcome": t["outcome"], "steps": t["steps"], "objective": t["objective"]}


def summarize(runs: list[dict]) -> dict:
    n = len(runs)
    scores = [r["objective"] for r in runs if r["objective"] is not None and r["outcome"] == GOAL]
    return {
        "runs": n,
        "success_rate": sum(r["outcome"] == GOAL for r in runs) / n if n else 0.0,
        "collision_rate": sum(r["outcome"] == COLLISION for r in runs) / n if n else 0.0,
        "mean_objective": float(np.mean(scores)) if scores else None,
        "mean_steps": float(np.mean([r["steps"] for r in runs])) if n else None,
    }


def run_batch(scenario_dir, seeds: int, base_seed: int = 0, jobs: int = 1, trace_dir=None) -> dict:
    """Run each ``*.json`` scenario in ``scenario_dir`` ``seeds`` times."""
    files = sorted(Path(scenario_dir).glob("*.json"))
    if not files:
        raise FileNotFoundError(f"no scenario files in {scenario_dir}")
    scenarios = [(f, load_scenario(f)) for f in files]  # fail fast on bad documents
    if trace_dir is not None:
        Path(trace_dir).mkdir(parents=True, exist_ok=True)
    jobs_list = [
        (str(f), derive_seed(base_seed, f.stem, i), None if trace_dir is None else str(trace_dir))
        for f, _ in scenarios
        for i in range(seeds)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_one, jobs_list))
    else:
        results = [_one(j) for j in jobs_list]

    report = {"seeds": seeds, "base_seed": base_seed, "scenarios": {}}
    for k, (f, _) in enumerate(scenarios):
        runs = results[k * seeds : (k + 1) * seeds]
        report["scenarios"][f.stem] = {**summarize(runs), "results": runs}
    report["overall"] = summarize(results)
    return report
