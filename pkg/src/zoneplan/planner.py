"""
Greedy per-step planner: grid shortest paths, target selection, velocity
decision, run-away fallbacks and the trajectory objective.

Grid cells are indexed (row, col) with row along y. "Lexicographic" order
for tie-breaking is x first, then y, i.e. (col, row).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import shapely
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .geometry import (
    EuclidPoint,
    Footprint,
    PolarPoint,
    Region,
    as_xy,
    bearing,
    euclid_to_polar,
    minkowski_sum,
    segments_clear,
    union,
    wrap_pi,
)
from .prediction import ObjectState
from .safezone import ReachableDisc, SafeZone, skip_zone, threat_density
from .uncertainty import error_bounds

SQRT2 = math.sqrt(2.0)
_OFFSETS = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
ARGMIN_TOL = 1e-9

NORMAL, SKIP_ZONE, NO_SKIP_ZONE = "normal", "skip-zone", "no-skip-zone"


@dataclass(frozen=True)
class RobotState:
    pose: PolarPoint
    decided_direction: float
    decided_speed: float
    v_max: float
    footprint: Footprint | None = None

    def __post_init__(self):
        if self.v_max <= 0:
            raise ValueError("v_max must be positive")
        if not (0.0 <= self.decided_speed <= self.v_max * (1 + 1e-12)):
            raise ValueError(f"decided speed {self.decided_speed} outside [0, {self.v_max}]")

    @property
    def xy(self) -> np.ndarray:
        return as_xy(self.pose)


@dataclass(frozen=True)
class PlanStep:
    mode: str
    target: EuclidPoint
    speed: float
    direction: float
    path_length: float


# ---------------------------------------------------------------------------
# grid


@dataclass
class PlanGrid:
    """Occupancy grid over the environment rectangle.

    ``blocked[row, col]`` is True when the robot, centred anywhere in the
    cell, could overlap an obstacle interior (for a point robot: the cell
    square itself overlaps it).
    """

    bounds: tuple[float, float, float, float]
    cell: float
    blocked: np.ndarray

    @classmethod
    def empty(cls, bounds, cell: float) -> "PlanGrid":
        xmin, ymin, xmax, ymax = bounds
        nx = max(1, math.ceil((xmax - xmin) / cell - 1e-9))
        ny = max(1, math.ceil((ymax - ymin) / cell - 1e-9))
        return cls(tuple(map(float, bounds)), float(cell), np.zeros((ny, nx), dtype=bool))

    @classmethod
    def build(cls, bounds, cell: float, obstacles: Region | None = None,
              robot_fp: Footprint | None = None) -> "PlanGrid":
        g = cls.empty(bounds, cell)
        centers = g.centers().reshape(-1, 2)
        xmin, ymin, xmax, ymax = g.bounds
        outside = (centers[:, 0] > xmax) | (centers[:, 1] > ymax)
        template = g._cell_template(robot_fp)
        if robot_fp is not None:
            lo = centers + template.min(axis=0)
            hi = centers + template.max(axis=0)
            outside |= (lo[:, 0] < xmin) | (lo[:, 1] < ymin) | (hi[:, 0] > xmax) | (hi[:, 1] > ymax)
        g.blocked = outside.reshape(g.shape)
        if obstacles is not None:
            g.block(obstacles, robot_fp)
        return g

    @property
    def shape(self) -> tuple[int, int]:
        return self.blocked.shape

    def copy(self) -> "PlanGrid":
        return PlanGrid(self.bounds, self.cell, self.blocked.copy())

    def centers(self) -> np.ndarray:
        ny, nx = self.shape
        xs = self.bounds[0] + (np.arange(nx) + 0.5) * self.cell
        ys = self.bounds[1] + (np.arange(ny) + 0.5) * self.cell
        X, Y = np.meshgrid(xs, ys)
        return np.stack([X, Y], axis=-1)

    def center(self, rc) -> np.ndarray:
        r, c = rc
        return np.array([self.bounds[0] + (c + 0.5) * self.cell, self.bounds[1] + (r + 0.5) * self.cell])

    def cell_of(self, p) -> tuple[int, int]:
        x, y = as_xy(p)
        ny, nx = self.shape
        c = int(np.clip(math.floor((x - self.bounds[0]) / self.cell), 0, nx - 1))
        r = int(np.clip(math.floor((y - self.bounds[1]) / self.cell), 0, ny - 1))
        return r, c

    def _cell_template(self, robot_fp: Footprint | None) -> np.ndarray:
        h = self.cell / 2.0
        square = np.array([[-h, -h], [h, -h], [h, h], [-h, h]])
        if robot_fp is None:
            return square
        swept = minkowski_sum(robot_fp.points, square)
        return np.asarray(swept.polygons()[0].exterior.coords)[:-1]

    def block(self, region: Region, robot_fp: Footprint | None = None) -> None:
        """Mark cells whose (robot-dilated) square overlaps the region interior."""
        if region.is_empty:
            return
        template = self._cell_template(robot_fp)
        centers = self.centers().reshape(-1, 2)
        xmin, ymin, xmax, ymax = region.geom.bounds
        tlo, thi = template.min(axis=0), template.max(axis=0)
        near = (
            (centers[:, 0] + thi[0] > xmin)
            & (centers[:, 0] + tlo[0] < xmax)
            & (centers[:, 1] + thi[1] > ymin)
            & (centers[:, 1] + tlo[1] < ymax)
        )
        idx = np.flatnonzero(near & ~self.blocked.reshape(-1))
        if len(idx) == 0:
            return
        polys = shapely.polygons(centers[idx][:, None, :] + template[None, :, :])
        g = region.geom
        hit = shapely.intersects(g, polys)
        if np.any(hit):
            sub = idx[hit]
            inner = shapely.relate_pattern(g, polys[hit], "T********")
            flat = self.blocked.reshape(-1)
            flat[sub[inner]] = True

    def graph(self) -> csr_matrix:
        ny, nx = self.shape
        free = ~self.blocked
        ids = np.arange(ny * nx).reshape(ny, nx)
        rows, cols, w = [], [], []
        for dr, dc in _OFFSETS:
            r0, r1 = max(0, -dr), ny - max(0, dr)
            c0, c1 = max(0, -dc), nx - max(0, dc)
            a = free[r0:r1, c0:c1] & free[r0 + dr : r1 + dr, c0 + dc : c1 + dc]
            rows.append(ids[r0:r1, c0:c1][a])
            cols.append(ids[r0 + dr : r1 + dr, c0 + dc : c1 + dc][a])
            w.append(np.full(int(a.sum()), self.cell * (SQRT2 if dr and dc else 1.0)))
        return csr_matrix((np.concatenate(w), (np.concatenate(rows), np.concatenate(cols))), shape=(ny * nx, ny * nx))


def distance_field(grid: PlanGrid, goal) -> np.ndarray:
    """Grid shortest-path length from every cell to the goal cell (inf if unreachable).

    The goal cell acts as a source even when blocked, so a target covered by
    a passing zone keeps a finite field around it.
    """
    g = grid.copy()
    r, c = g.cell_of(goal)
    g.blocked[r, c] = False
    d = dijkstra(g.graph(), directed=False, indices=r * g.shape[1] + c)
    d = d.reshape(g.shape)
    d[g.blocked] = np.inf
    return d


def shortest_path(g: PlanGrid, start, end):
    """Optimal 8-connected grid path between the cells containing ``start`` and ``end``.

    Edge weights are cell and sqrt(2)*cell. Distances are tracked as exact
    (orthogonal, diagonal) step counts, so ties are genuine and are broken by
    expanding cells in (x, y) order.

    Returns
    -------
    (path, length)
        ``path`` is a list of cell centres, or None when the end is
        unreachable (``length`` is then inf).
    """
    s = g.cell_of(start)
    t = g.cell_of(end)
    if s == t:
        return [as_xy(start)], 0.0
    if g.blocked[t]:
        return None, math.inf
    ny, nx = g.shape
    blocked = g.blocked
    best = {s: (0, 0)}
    prev: dict = {}
    # heap key: (length value, orth, diag, col, row)
    heap = [(0.0, 0, 0, s[1], s[0])]
    done = set()
    while heap:
        _, a, b, c, r = heapq.heappop(heap)
        u = (r, c)
        if u in done:
            continue
        done.add(u)
        if u == t:
            break
        for dr, dc in _OFFSETS:
            vr, vc = r + dr, c + dc
            if not (0 <= vr < ny and 0 <= vc < nx) or blocked[vr, vc]:
                continue
            v = (vr, vc)
            if v in done:
                continue
            na, nb = (a, b + 1) if dr and dc else (a + 1, b)
            key = na + nb * SQRT2
            old = best.get(v)
            # distinct (orth, diag) counts never tie for grid-sized counts
            if old is None or key < old[0] + old[1] * SQRT2 - 1e-12:
                best[v] = (na, nb)
                prev[v] = u
                heapq.heappush(heap, (key, na, nb, vc, vr))
    if t not in done:
        return None, math.inf
    cells = [t]
    while cells[-1] != s:
        cells.append(prev[cells[-1]])
    cells.reverse()
    a, b = best[t]
    return [g.center(rc) for rc in cells], g.cell * (a + b * SQRT2)


def polyline_length(pts) -> float:
    p = np.asarray(pts, dtype=float)
    if len(p) < 2:
        return 0.0
    return float(np.hypot(*np.diff(p, axis=0).T).sum())


def shortcut(pts: np.ndarray, obstacles: Region | None = None, robot_fp: Footprint | None = None) -> np.ndarray:
    """Greedy string-pulling: from each kept vertex jump to the farthest directly reachable one."""
    pts = np.asarray(pts, dtype=float)
    if len(pts) <= 2 or obstacles is None:
        return pts if obstacles is not None or len(pts) <= 2 else pts[[0, -1]]
    out = [0]
    i = 0
    while i < len(pts) - 1:
        ok = footprints_clear(robot_fp, pts[i], pts[i + 1 :], obstacles)
        # farthest visible vertex; the next one is always reachable along the grid path
        j = i + 1 + int(np.flatnonzero(ok)[-1]) if np.any(ok) else i + 1
        out.append(j)
        i = j
    return pts[out]


def static_shortest_path(g: PlanGrid, a, b, obstacles: Region | None = None,
                         robot_fp: Footprint | None = None) -> tuple[np.ndarray | None, float]:
    """Shortest route from ``a`` to ``b`` among static obstacles.

    The grid path (with the exact endpoints substituted for their cell
    centres) is pulled taut against ``obstacles`` when they are given.
    """
    path, length = shortest_path(g, a, b)
    if path is None:
        return None, math.inf
    if len(path) == 1:
        pts = np.array([as_xy(a)]) if np.allclose(as_xy(a), as_xy(b)) else np.array([as_xy(a), as_xy(b)])
    else:
        pts = np.vstack([as_xy(a), np.asarray(path[1:-1]).reshape(-1, 2), as_xy(b)])
    if obstacles is not None:
        pts = shortcut(pts, obstacles, robot_fp)
    return pts, polyline_length(pts)


# ---------------------------------------------------------------------------
# motion feasibility


def footprints_clear(fp: Footprint | None, act, targets: np.ndarray, region: Region) -> np.ndarray:
    """Vectorised :func:`footprint_plan` for many candidate end points."""
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    a = as_xy(act)
    if fp is None:
        return segments_clear(region, a[None, :], targets)
    if region.is_empty:
        return np.ones(len(targets), dtype=bool)
    if fp.is_convex():
        start = fp.placed(a)
        pts = np.concatenate(
            [np.broadcast_to(start, (len(targets), len(start), 2)), targets[:, None, :] + fp.points[None]], axis=1
        )
        swept = shapely.convex_hull(shapely.multipoints(pts))
    else:
        swept = np.array([minkowski_sum(fp.placed(a), np.array([[0.0, 0.0], w - a])).geom for w in targets])
    g = region.geom
    hit = shapely.intersects(g, swept)
    out = np.ones(len(targets), dtype=bool)
    if np.any(hit):
        out[hit] = shapely.relate_pattern(g, swept[hit], "F********")
    return out


def footprint_plan(fp: Footprint | None, act, w, sz: Region) -> bool:
    """True iff translating the robot from ``act`` to ``w`` keeps its swept area out of ``sz``."""
    return bool(footprints_clear(fp, act, np.atleast_2d(as_xy(w)), sz)[0])


def robot_overlaps(fp: Footprint | None, act, region: Region) -> bool:
    if fp is None:
        return region.contains_point(act)
    return region.overlaps_interior(fp.polygon(act))


# ---------------------------------------------------------------------------
# decisions


def decide_velocity(act, Q, v_max: float, dt: float = 1.0, prev_direction: float = 0.0) -> tuple[float, float]:
    """Head straight for Q at min(v_max, |Q - act| / dt)."""
    if dt <= 0:
        raise ValueError("time step must be positive")
    a, q = as_xy(act), as_xy(Q)
    dist = float(np.hypot(*(q - a)))
    if dist < 1e-12:
        return 0.0, prev_direction
    return min(v_max, dist / dt), bearing(a, q)


def _pick(act, cands: np.ndarray, values: np.ndarray, prev_direction: float) -> int:
    """Index of the minimum value; ties by heading change, then x, then y."""
    vmin = values.min()
    tied = np.flatnonzero(values <= vmin + ARGMIN_TOL)
    if len(tied) == 1:
        return int(tied[0])
    a = as_xy(act)
    d = cands[tied] - a
    turn = np.abs(np.vectorize(wrap_pi)(np.arctan2(d[:, 1], d[:, 0]) - prev_direction))
    turn[np.hypot(d[:, 0], d[:, 1]) < 1e-12] = 0.0
    order = np.lexsort((cands[tied, 1], cands[tied, 0], np.round(turn, 12)))
    return int(tied[order[0]])


def select_target(
    act,
    sz: Region,
    g: PlanGrid,
    goal,
    phi: np.ndarray | None = None,
    prev_direction: float = 0.0,
    robot_fp: Footprint | None = None,
    obstacles: Region | None = None,
    v_max: float = 1.0,
    dt: float = 1.0,
    batch: int = 256,
) -> PlanStep | None:
    """Free, directly reachable cell centre nearest the goal by grid path length.

    ``sz`` is the safe-zone union and ``obstacles`` the known static
    obstacles; the straight move to the candidate must avoid both. The goal
    itself is taken when it is directly reachable. Returns None when no
    candidate is reachable (the caller escalates to :func:`run_away`).
    """
    forbidden = sz if obstacles is None else union([sz, obstacles])
    if phi is None:
        phi = distance_field(g, goal)
    a = as_xy(act)
    goal_xy = as_xy(goal)
    if not robot_overlaps(robot_fp, goal_xy, forbidden) and footprint_plan(robot_fp, a, goal_xy, forbidden):
        speed, direction = decide_velocity(a, goal_xy, v_max, dt, prev_direction)
        return PlanStep(NORMAL, EuclidPoint(*goal_xy), speed, direction, 0.0)

    centers = g.centers().reshape(-1, 2)
    vals = phi.reshape(-1)
    ok = np.isfinite(vals) & ~g.blocked.reshape(-1)
    idx = np.flatnonzero(ok)
    if len(idx) == 0:
        return None
    idx = idx[np.argsort(vals[idx], kind="stable")]
    best = None
    visible: list[int] = []
    for start in range(0, len(idx), batch):
        chunk = idx[start : start + batch]
        if best is not None and vals[chunk[0]] > best + ARGMIN_TOL:
            break
        clear = footprints_clear(robot_fp, a, centers[chunk], forbidden)
        if robot_fp is None:
            clear &= ~forbidden.contains_xy(centers[chunk])
        for i in chunk[clear]:
            if best is None:
                best = vals[i]
            if vals[i] <= best + ARGMIN_TOL:
                visible.append(int(i))
    if not visible:
        return None
    visible_arr = np.asarray(visible)
    k = visible_arr[_pick(a, centers[visible_arr], vals[visible_arr], prev_direction)]
    q = centers[k]
    speed, direction = decide_velocity(a, q, v_max, dt, prev_direction)
    return PlanStep(NORMAL, EuclidPoint(*q), speed, direction, float(vals[k]))


def motion_clear(robot_fp: Footprint | None, act, targets: np.ndarray, states: Sequence,
                 z: float | None = None) -> np.ndarray:
    """Moves act -> target that never touch any object moving with its expected velocity.

    Works in each object's frame: the robot's relative displacement is its
    own minus the object's, swept against the object's footprint. With a
    confidence ``z`` the footprint is grown by the largest gap between the
    expected displacement and any displacement inside the error bounds.
    """
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    a = as_xy(act)
    ok = np.ones(len(targets), dtype=bool)
    for s, fp in states:
        u = s.expected_speed * np.array([math.cos(s.expected_direction), math.sin(s.expected_direction)])
        body = Region.from_footprint(fp)
        if z is not None:
            dv, dth = error_bounds(s.speed_model, s.direction_model, z)
            if dv > 0 or dth > 0:
                # farthest displacement in the error band sits at one of its corners
                v = s.expected_speed
                speeds = np.array([max(v - dv, 0.0), v + dv])
                angles = s.expected_direction + np.array([-dth, dth])
                corners = speeds[:, None, None] * np.stack([np.cos(angles), np.sin(angles)], axis=-1)[None]
                grow = float(np.max(np.hypot(*(corners.reshape(-1, 2) - u).T)))
                body = Region(body.geom.buffer(grow, quad_segs=8))
        start = a - s.xy
        ok &= footprints_clear(robot_fp, start, start + (targets - a) - u, body)
    return ok


def disc_candidates(g: PlanGrid, disc: ReachableDisc) -> np.ndarray:
    """Flat indices of grid cells whose centres lie in the reachable disc."""
    centers = g.centers().reshape(-1, 2)
    inside = disc.contains_xy(centers)
    xmin, ymin, xmax, ymax = g.bounds
    inside &= (centers[:, 0] <= xmax) & (centers[:, 1] <= ymax)
    return np.flatnonzero(inside)


def run_away(
    act,
    disc: ReachableDisc,
    threatening: Sequence[SafeZone],
    states: Sequence,
    g: PlanGrid,
    goal,
    phi: np.ndarray,
    avoid: Region | None = None,
    prev_direction: float = 0.0,
    robot_fp: Footprint | None = None,
    dt: float = 1.0,
    z: float = 2.0,
) -> PlanStep | None:
    """Escape move when the robot already sits inside one or more safe zones.

    With a non-empty skip zone (reachable disc minus the threatening zones)
    the target is the skip-zone cell nearest the goal. Otherwise the target
    is, among the disc cells of least summed threat density, the one nearest
    the goal. ``avoid`` (static obstacles plus non-threatening zones) must
    stay clear of both the target and the straight move; ``phi`` is the
    distance field ignoring the threatening zones.

    Returns None when ``threatening`` is empty.
    """
    if not threatening:
        return None
    avoid = Region() if avoid is None else avoid
    a = as_xy(act)
    centers = g.centers().reshape(-1, 2)
    cand = disc_candidates(g, disc)
    if len(cand):
        pts = centers[cand]
        ok = footprints_clear(robot_fp, a, pts, avoid)
        if robot_fp is None:
            ok &= ~avoid.contains_xy(pts)
        cand = cand[ok]
    vals = phi.reshape(-1)

    D = skip_zone(disc, threatening)
    if not D.is_empty and len(cand):
        if robot_fp is None:
            in_d = D.contains_xy(centers[cand])
        else:
            tz = union([z.region for z in threatening])
            in_d = np.array([not tz.overlaps_interior(robot_fp.polygon(p)) for p in centers[cand]])
            in_d &= D.contains_xy(centers[cand])
        sel = cand[in_d]
        if len(sel) and states:
            # prefer escapes that also dodge the threats' expected motion mid-step
            for zz in (z, None):
                safe = motion_clear(robot_fp, a, centers[sel], states, zz)
                if np.any(safe):
                    sel = sel[safe]
                    break
        if len(sel):
            k = sel[_pick(a, centers[sel], vals[sel], prev_direction)]
            q = centers[k]
            speed, direction = decide_velocity(a, q, disc.radius / dt, dt, prev_direction)
            return PlanStep(SKIP_ZONE, EuclidPoint(*q), speed, direction, float(vals[k]))

    if not len(cand):
        return PlanStep(NO_SKIP_ZONE, EuclidPoint(*a), 0.0, prev_direction, math.inf)
    dens = np.array([threat_density(p, states, dt) for p in centers[cand]])
    M = cand[dens <= dens.min() + ARGMIN_TOL]
    k = M[_pick(a, centers[M], vals[M], prev_direction)]
    q = centers[k]
    speed, direction = decide_velocity(a, q, disc.radius / dt, dt, prev_direction)
    return PlanStep(NO_SKIP_ZONE, EuclidPoint(*q), speed, direction, float(vals[k]))


# ---------------------------------------------------------------------------
# objective


def min_steps(sp_length: float, v_max: float, dt: float = 1.0) -> int:
    """Fewest steps to cover ``sp_length`` at full speed (at least 1)."""
    return max(1, math.ceil(sp_length / (v_max * dt) - 1e-9))


def _dist2_to_polyline(p: np.ndarray, line: np.ndarray) -> float:
    if len(line) == 1:
        return float(np.sum((p - line[0]) ** 2))
    a, b = line[:-1], line[1:]
    e = b - a
    ee = np.einsum("ij,ij->i", e, e)
    t = np.clip(np.einsum("ij,ij->i", p - a, e) / np.where(ee == 0, 1.0, ee), 0.0, 1.0)
    q = a + t[:, None] * e
    return float(np.min(np.sum((q - p) ** 2, axis=1)))


def evaluate_objective(positions, sp, t_min: int, valid: bool = True) -> float | None:
    """Scale-free time/deviation score of a trajectory; None marks an invalid trace.

    ``positions`` are P_0..P_T, ``sp`` the static shortest path polyline
    from A to B and ``t_min`` the fewest steps it needs. The score is
    sqrt((T / t_min)^2 + (sum_t min_P |P_t - P|^2 / |sp|^2)^2), where the
    inner minimum runs over the whole polyline; 1.0 is an on-path run at
    full speed.
    """
    if not valid:
        return None
    pts = np.atleast_2d(np.asarray(positions, dtype=float))
    line = np.atleast_2d(np.asarray(sp, dtype=float))
    T = len(pts) - 1
    L = polyline_length(line)
    if L <= 0:
        raise ValueError("shortest path must have positive length")
    if t_min < 1:
        raise ValueError("t_min must be >= 1")
    if T == 0:
        return None
    dev = sum(_dist2_to_polyline(p, line) for p in pts)
    return math.sqrt((T / t_min) ** 2 + (dev / L**2) ** 2)


# ---------------------------------------------------------------------------
# one planning step


@dataclass
class Planner:
    """Stateful wrapper that plans one robot step from the current beliefs."""

    bounds: tuple[float, float, float, float]
    goal: np.ndarray
    v_max: float
    dt: float = 1.0
    cell: float | None = None
    robot_fp: Footprint | None = None
    static: Region = field(default_factory=Region)
    confidence: float = 2.0
    _static_grid: PlanGrid | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.goal = as_xy(self.goal)
        if self.cell is None:
            self.cell = self.v_max * self.dt / 4.0
        self.set_static(self.static)

    def set_static(self, static: Region) -> None:
        self.static = static
        self._static_grid = PlanGrid.build(self.bounds, self.cell, static, self.robot_fp)

    @property
    def static_grid(self) -> PlanGrid:
        return self._static_grid

    def zone_grid(self, zones: Sequence[SafeZone]) -> PlanGrid:
        g = self._static_grid.copy()
        for z in zones:
            g.block(z.region, self.robot_fp)
        return g

    def plan(self, act, zones: Sequence[SafeZone], beliefs: dict, prev_direction: float = 0.0) -> PlanStep:
        """Choose the next move.

        ``beliefs`` maps object id to (ObjectState, Footprint) for the objects
        whose zones are in ``zones``.
        """
        a = as_xy(act)
        threatening = [z for z in zones if robot_overlaps(self.robot_fp, a, z.region)]
        if not threatening:
            sz = union([z.region for z in zones])
            grid = self.zone_grid(zones)
            phi = distance_field(grid, self.goal)
            step = select_target(a, sz, grid, self.goal, phi, prev_direction, self.robot_fp,
                                 self.static, self.v_max, self.dt)
            if step is not None:
                return step
            # nothing reachable and not inside any zone: hold position
            return PlanStep(NORMAL, EuclidPoint(*a), 0.0, prev_direction, math.inf)
        others = [z for z in zones if z not in threatening]
        grid = self.zone_grid(others)
        phi = distance_field(grid, self.goal)
        avoid = union([self.static, *[z.region for z in others]])
        ids = {z.obj_id for z in threatening}
        states = [beliefs[i] for i in ids if i in beliefs]
        states.sort(key=lambda t: t[0].xy.tolist())
        disc = ReachableDisc(tuple(a), self.v_max * self.dt)
        return run_away(a, disc, threatening, states, grid, self.goal, phi, avoid, prev_direction,
                        self.robot_fp, self.dt, self.confidence)
