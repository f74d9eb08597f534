"""
What does the robot do once it is already inside someone's safe zone?

Three objects close in from the east, north and south. The western part of
the robot's reachable disc is still outside every zone, so the planner
steps there. Then six objects close in from all sides, nothing in reach is
outside the zones, and the planner instead picks the spot where the
objects are least likely to arrive.
"""

import math

import numpy as np

from zoneplan.geometry import Footprint
from zoneplan.planner import Planner
from zoneplan.prediction import ObjectState
from zoneplan.safezone import ReachableDisc, build_safe_zone, skip_zone, threat_density


def surround(angles, r=1.6):
    fp = Footprint.disc(0.5, 32)
    zones, beliefs = [], {}
    for i, a in enumerate(angles):
        s = ObjectState.at((r * math.cos(a), r * math.sin(a)), 0.8, a + math.pi, sigma_v=0.2, sigma_d=0.3)
        zones.append(build_safe_zone(s, fp, 2.0, f"o{i}"))
        beliefs[f"o{i}"] = (s, fp)
    return zones, beliefs


planner = Planner((-6, -6, 6, 6), goal=(5.0, 0.0), v_max=1.0, dt=1.0, cell=0.1)
reach = ReachableDisc((0.0, 0.0), 1.0)

for label, angles in (("three threats", [0.0, math.pi / 2, -math.pi / 2]),
                      ("six threats", np.linspace(0, 2 * math.pi, 7)[:-1])):
    zones, beliefs = surround(angles)
    D = skip_zone(reach, zones)
    step = planner.plan((0.0, 0.0), zones, beliefs)
    q = (step.target.x, step.target.y)
    print(f"{label}: free part of the reachable disc {D.area:.3f}")
    print(f"  mode {step.mode}, target ({q[0]:+.2f}, {q[1]:+.2f}), speed {step.speed:.2f}")
    print(f"  threat density at target {threat_density(q, [s for s, _ in beliefs.values()]):.4f}"
          f" (at the start point {threat_density((0.05, 0.0), [s for s, _ in beliefs.values()]):.4f})")
