"""
How big is the region an object might occupy next step?

Walks one rectangular object through the zone constructions: known motion,
uncertain motion at a few confidence levels, and an object at rest.
Run with ``python3 demos/safe_zone_tour.py``.
"""

import math

from zoneplan.geometry import Footprint
from zoneplan.prediction import ObjectState
from zoneplan.safezone import build_safe_zone, sz_integral

fp = Footprint.rectangle(1.0, 0.6)
print(f"footprint: 1.0 x 0.6 rectangle, area {fp.area:.3f}")

# Known motion: the zone is exactly the area swept while translating.
known = ObjectState.at((0.0, 0.0), 1.0, math.pi / 6)
z = build_safe_zone(known, fp)
print(f"\nknown motion, speed 1 at 30 deg -> {z.construction}, area {z.area:.3f}")

# Uncertain motion: the same object, now with noisy speed and heading.
# Raising the confidence level z widens the cone of headings and the reach.
noisy = ObjectState.at((0.0, 0.0), 1.0, math.pi / 6, sigma_v=0.15, sigma_d=0.2)
print("\nuncertain motion (sigma_v 0.15, sigma_d 0.2):")
print("   z   d_theta(deg)   area   integral")
for conf in (0.5, 1.0, 2.0, 3.0):
    zone = build_safe_zone(noisy, fp, conf)
    integral = sz_integral(zone, (0.0, 0.0), math.pi / 6)
    print(f" {conf:4.1f}   {math.degrees(zone.dtheta):10.1f}   {zone.area:6.3f}   {integral:8.3f}")

# An object at rest may start off in any direction, so its zone is round.
rest = ObjectState.at((0.0, 0.0), 0.0, 0.0, sigma_v=0.2, sigma_d=0.2, moving=False)
zone = build_safe_zone(rest, fp, 2.0)
print(f"\nat rest, z=2 -> heading spread {math.degrees(zone.dtheta):.0f} deg, area {zone.area:.3f}")
print(f"(disc through the farthest corner grown by the reach: {math.pi * (fp.radius + 0.4) ** 2:.3f})")
