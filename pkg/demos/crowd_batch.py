"""
Crossing a crowd of randomly moving objects, many times over.

Runs the stochastic crowd scenario under 20 derived seeds, reports how often
the robot reached the goal or collided, and renders the slowest run to
SVG frames under ``demos/out/``. The same seed always yields the same
trace, so any run reported here can be reproduced with the CLI:

    zoneplan simulate --scenario scenarios/stochastic_crowd.json --seed <seed> --out t.json
"""

from pathlib import Path

from zoneplan.sim.batch import derive_seed, summarize
from zoneplan.sim.render import render_svg
from zoneplan.sim.scenario import load_scenario
from zoneplan.sim.world import run

here = Path(__file__).resolve().parent
sc = load_scenario(here.parent / "scenarios" / "stochastic_crowd.json")

runs, traces = [], {}
for i in range(20):
    seed = derive_seed(0, "stochastic_crowd", i)
    tr = run(sc, seed)
    traces[seed] = tr
    t = tr.terminal
    runs.append({"seed": seed, "outcome": t["outcome"], "steps": t["steps"], "objective": t["objective"]})
    modes = {p["mode"] for p in tr.plans() if p is not None}
    print(f"seed {seed:>20}  {t['outcome']:<9} steps {t['steps']:>3}  modes {sorted(modes)}")

s = summarize(runs)
print(f"\nsuccess {s['success_rate']:.0%}, collisions {s['collision_rate']:.0%}, "
      f"mean objective {s['mean_objective']:.3f} (1.0 = straight along the shortest path at full speed)")

slowest = max(runs, key=lambda r: r["steps"])["seed"]
paths = render_svg(traces[slowest], "all", here / "out")
print(f"rendered {len(paths)} frames of seed {slowest} to {paths[0].parent}")
