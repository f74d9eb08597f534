"""
Ground-truth collision test between true placements.

Only true object positions go in; planner beliefs never do. The motion of
one step is sampled at K evenly spaced fractions (default 10), so a body
thinner than the per-sub-step travel can in principle slip through
between samples; tests cross-check against a continuous swept test.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import shapely

from ..geometry import Footprint, Region

OVERLAP_TOL = 1e-9
DEFAULT_SUBSTEPS = 10


def _robot_shapes(robot_fp: Footprint | None, pos: np.ndarray):
    if robot_fp is None:
        return shapely.points(pos)
    return shapely.polygons(pos[:, None, :] + robot_fp.points[None])


def _hits(robot, other) -> np.ndarray:
    """Per-sample hit flags: positive-area overlap, or strict interior containment for points."""
    kinds = shapely.get_type_id(robot)
    if np.all(kinds == 0):
        return shapely.contains_properly(other, robot)
    hit = shapely.intersects(robot, other)
    out = np.zeros(len(robot), dtype=bool)
    if np.any(hit):
        out[hit] = shapely.area(shapely.intersection(robot[hit], other[hit])) > OVERLAP_TOL
    return out


def collision_check(
    robot_fp: Footprint | None,
    robot_prev,
    robot_next,
    objects: Sequence[tuple[str, Footprint, object, object]],
    statics: Sequence[tuple[str, Region]] = (),
    substeps: int = DEFAULT_SUBSTEPS,
) -> list[tuple[str, float]]:
    """Bodies the robot overlaps during one step, with the first hit fraction.

    ``objects`` holds (id, footprint, previous centroid, next centroid);
    ``statics`` holds (id, region). Touching boundaries do not count.
    Returns (id, fraction) pairs in input order; empty means no collision.
    """
    f = np.arange(1, substeps + 1) / substeps
    r0 = np.asarray(robot_prev, dtype=float)
    r1 = np.asarray(robot_next, dtype=float)
    rpos = r0 + f[:, None] * (r1 - r0)
    robot = _robot_shapes(robot_fp, rpos)
    out = []
    for oid, fp, p0, p1 in objects:
        p0 = np.asarray(p0, dtype=float)
        p1 = np.asarray(p1, dtype=float)
        opos = p0 + f[:, None] * (p1 - p0)
        bodies = shapely.polygons(opos[:, None, :] + fp.points[None])
        hit = _hits(robot, bodies)
        if np.any(hit):
            out.append((oid, float(f[np.argmax(hit)])))
    for sid, region in statics:
        if region.is_empty:
            continue
        bodies = np.full(len(robot), region.geom, dtype=object)
        hit = _hits(robot, bodies)
        if np.any(hit):
            out.append((sid, float(f[np.argmax(hit)])))
    return out
