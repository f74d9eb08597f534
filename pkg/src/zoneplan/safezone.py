"""
Safe zones: the region an object may occupy during the coming step.

Deterministic objects get the exact swept area of their footprint along the
known displacement. Uncertain objects get the footprint, with its leading
chain pushed out to the radial envelope, swept over every displacement in
the error cone {(v + e) at angle d + a : -v <= e <= dv, |a| <= dtheta}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import (
    DEFAULT_RESOLUTION,
    TWO_PI,
    BoundaryCurve,
    Footprint,
    Region,
    ShapeError,
    as_xy,
    curve_polygon,
    disc_region,
    minkowski_sum,
    radial_envelope,
    sector_polygon,
    split_boundary,
    support_points,
    tangency_cut,
    transform_curve,
    union,
    wrap_pi,
)
from .prediction import ObjectState
from .uncertainty import direction_error_pdf, error_bounds, speed_error_pdf

DEFAULT_CONFIDENCE = 2.0

# beyond this half-angle the error cone spans at least a half-turn and the
# whole boundary can lead, so the envelope covers the full turn
WIDE_CONE = math.pi / 2


@dataclass(frozen=True)
class SafeZone:
    obj_id: str
    region: Region
    valid_for_step: int
    construction: str
    dv: float = 0.0
    dtheta: float = 0.0
    curves: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def area(self) -> float:
        return self.region.area

    def contains_point(self, p) -> bool:
        return self.region.contains_point(p)


@dataclass(frozen=True)
class ReachableDisc:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("reachable radius must be >= 0")
        c = as_xy(self.center)
        object.__setattr__(self, "center", (float(c[0]), float(c[1])))

    def region(self, resolution: int = DEFAULT_RESOLUTION) -> Region:
        return disc_region(self.center, self.radius, resolution)

    def contains_xy(self, xy: np.ndarray) -> np.ndarray:
        xy = np.atleast_2d(xy)
        d = np.hypot(xy[:, 0] - self.center[0], xy[:, 1] - self.center[1])
        return d <= self.radius * (1 + 1e-12)


def build_safe_zone(
    s: ObjectState,
    fp: Footprint,
    z: float = DEFAULT_CONFIDENCE,
    obj_id: str = "",
    step: int | None = None,
    resolution: int = DEFAULT_RESOLUTION,
) -> SafeZone:
    """Safe zone of one object for the step after ``s.step``.

    Raises
    ------
    ShapeError
        Uncertain object whose footprint is not star-shaped about its centroid.
    DegenerateFootprintError
        Zero-area footprint (raised when the footprint is built).
    """
    c = s.xy
    v, d = s.expected_speed, s.expected_direction
    valid = s.step + 1 if step is None else step
    if s.deterministic:
        dv, dth = 0.0, 0.0
    else:
        dv, dth = error_bounds(s.speed_model, s.direction_model, z)

    if dv == 0.0 and dth == 0.0:
        placed = fp.placed(c)
        if v == 0.0:
            region = Region.from_footprint(fp, c)
        else:
            disp = v * np.array([math.cos(d), math.sin(d)])
            region = minkowski_sum(placed, np.array([[0.0, 0.0], disp]), fp.is_convex())
        return SafeZone(obj_id, region, valid, "deterministic-swept")

    if not fp.is_star_shaped():
        raise ShapeError("safe zone needs a footprint star-shaped about its centroid")

    reach = v + dv
    lo, hi = d - dth, d + dth
    curves: dict = {}
    # the max-envelope of a whole boundary is the circle through its farthest
    # vertex; used whenever no single chain leads, so zones grow with z
    shape = c + sector_polygon(fp.radius, 0.0, TWO_PI, resolution)
    A = B = None
    if dth < WIDE_CONE:
        A_set, B_set = support_points(fp, c, hi, lo)
        A = tangency_cut(A_set, hi)
        B = tangency_cut(B_set, lo)
    # near a half-turn both sweeps can stop at the same vertex; no chain leads then
    if A is not None and np.hypot(*(A - B)) > 1e-7 * fp.radius:
        f, g = split_boundary(fp, A, B, center=c, resolution=resolution)
        g_env = radial_envelope(g, "max")
        f_env = radial_envelope(f, "min")
        shape = curve_polygon(f, g_env)
        shift = reach * np.array([math.cos(d), math.sin(d)])
        curves = {
            "A": A,
            "B": B,
            "f": f,
            "g": g,
            "f_env": f_env,
            "g_env": g_env,
            "f_c": transform_curve(f_env, c, shift),
            "g_c": transform_curve(g_env, c, shift),
        }
    motion = sector_polygon(reach, lo, hi, resolution)
    region = minkowski_sum(shape, motion)
    return SafeZone(obj_id, region, valid, "probabilistic-envelope", dv, dth, curves)


def sz_integral(zone: SafeZone, center, direction: float, n: int = 721) -> float:
    """Radial band measure of an envelope zone, about the object's current centroid.

    Evaluates max{ int (g_c^2 - f^2), int (f_c^2 - g^2) } over the error cone
    [d - dtheta, d + dtheta], with each curve read as distance-from-centroid
    per angle. Returns 0 for swept deterministic zones.
    """
    if zone.construction != "probabilistic-envelope" or not zone.curves:
        return 0.0
    c = as_xy(center)
    alpha = np.linspace(direction - zone.dtheta, direction + zone.dtheta, n)

    def radial(curve: BoundaryCurve) -> np.ndarray:
        rel = curve.points() - c
        ang = np.arctan2(rel[:, 1], rel[:, 0])
        r = np.hypot(rel[:, 0], rel[:, 1])
        order = np.argsort(ang)
        return np.interp(np.mod(alpha + math.pi, TWO_PI) - math.pi, ang[order], r[order], period=TWO_PI)

    cv = zone.curves
    f, g, f_c, g_c = radial(cv["f"]), radial(cv["g"]), radial(cv["f_c"]), radial(cv["g_c"])
    return max(float(np.trapezoid(g_c**2 - f**2, alpha)), float(np.trapezoid(f_c**2 - g**2, alpha)))


def union_safe_zones(zs: Sequence[SafeZone]) -> Region:
    return union([z.region for z in zs])


def skip_zone(disc: ReachableDisc, threatening: Sequence[SafeZone], resolution: int = DEFAULT_RESOLUTION) -> Region:
    """Part of the reachable disc outside every threatening zone."""
    return disc.region(resolution).difference(union_safe_zones(threatening))


def threat_density(p, threatening, dt: float = 1.0) -> float:
    """Summed direction and speed error densities of reaching ``p`` next step.

    ``threatening`` holds ObjectState values or (ObjectState, Footprint)
    pairs. For each object, the bearing from its centroid to ``p`` is
    compared with its expected heading and the implied speed with its
    expected speed.
    """
    x = as_xy(p)
    total = 0.0
    for item in threatening:
        s = item[0] if isinstance(item, tuple) else item
        rel = x - s.xy
        dist = float(np.hypot(*rel))
        if dist < 1e-12:
            total += 1.0 / TWO_PI
        else:
            off = wrap_pi(math.atan2(rel[1], rel[0]) - s.expected_direction)
            total += direction_error_pdf(s.direction_model, off)
        total += speed_error_pdf(s.speed_model, dist / dt - s.expected_speed)
    return total
