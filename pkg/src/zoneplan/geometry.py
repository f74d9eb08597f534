"""
Planar geometry kernel: polar/Euclidean points, polygonal footprints,
support-point extraction, boundary curves with radial envelopes, and
polygonal regions.

Angles are radians. Footprints are stored in centroid-local coordinates
and placed on the map by translation only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import shapely
from shapely.geometry import LineString, MultiPolygon, Point, Polygon
from shapely.geometry.polygon import orient
from shapely.ops import unary_union

TWO_PI = 2.0 * math.pi
DEFAULT_RESOLUTION = 360

# relative tolerance for tangency ties and star-shape checks
TIE_TOL = 1e-9


class GeometryError(ValueError):
    """Invalid geometric input."""


class DegenerateFootprintError(GeometryError):
    """Footprint has zero area or fewer than three vertices."""


class ShapeError(GeometryError):
    """Footprint is not star-shaped about its centroid."""


def wrap_angle(a: float) -> float:
    """Normalize an angle to [0, 2*pi)."""
    a = math.fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    # fmod can return 2*pi - tiny for tiny negatives
    if a >= TWO_PI:
        a = 0.0
    return a


def wrap_pi(a: float) -> float:
    """Normalize an angle to [-pi, pi)."""
    a = wrap_angle(a + math.pi) - math.pi
    return a


@dataclass(frozen=True)
class PolarPoint:
    angle: float
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.angle) and math.isfinite(self.radius)):
            raise GeometryError("polar point must be finite")
        if self.radius < 0.0:
            raise GeometryError(f"radius must be >= 0, got {self.radius}")
        object.__setattr__(self, "angle", wrap_angle(float(self.angle)))
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True)
class EuclidPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError("Euclidean point must be finite")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def __iter__(self):
        yield self.x
        yield self.y


def polar_to_euclid(p: PolarPoint) -> EuclidPoint:
    return EuclidPoint(p.radius * math.cos(p.angle), p.radius * math.sin(p.angle))


def euclid_to_polar(e: EuclidPoint) -> PolarPoint:
    """Convert to polar form; the origin maps to angle 0, radius 0."""
    if e.x == 0.0 and e.y == 0.0:
        return PolarPoint(0.0, 0.0)
    return PolarPoint(math.atan2(e.y, e.x), math.hypot(e.x, e.y))


def as_xy(p) -> np.ndarray:
    """Coerce a PolarPoint, EuclidPoint or length-2 sequence to an xy array."""
    if isinstance(p, PolarPoint):
        e = polar_to_euclid(p)
        return np.array([e.x, e.y])
    if isinstance(p, EuclidPoint):
        return np.array([p.x, p.y])
    arr = np.asarray(p, dtype=float)
    if arr.shape != (2,):
        raise GeometryError(f"expected a 2D point, got shape {arr.shape}")
    return arr


def bearing(a, b) -> float:
    """Direction of the segment a->b in [0, 2*pi)."""
    a, b = as_xy(a), as_xy(b)
    d = b - a
    return wrap_angle(math.atan2(d[1], d[0]))


# ---------------------------------------------------------------------------
# footprints


def _signed_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _area_centroid(pts: np.ndarray) -> np.ndarray:
    x, y = pts[:, 0], pts[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = cross.sum() / 2.0
    cx = ((x + xn) * cross).sum() / (6.0 * a)
    cy = ((y + yn) * cross).sum() / (6.0 * a)
    return np.array([cx, cy])


@dataclass(frozen=True)
class Footprint:
    """Closed simple polygon in centroid-local coordinates, counter-clockwise.

    Use :meth:`from_polygon` (or the shape constructors) rather than the raw
    constructor; it orients the ring and moves the area centroid to the
    origin.
    """

    vertices: tuple[tuple[float, float], ...]
    _arr: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.vertices, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
            raise DegenerateFootprintError("footprint needs at least 3 vertices")
        if not np.all(np.isfinite(pts)):
            raise GeometryError("footprint vertices must be finite")
        area = _signed_area(pts)
        scale = max(float(np.abs(pts).max()), 1e-300)
        if abs(area) <= 1e-12 * scale * scale:
            raise DegenerateFootprintError("footprint has zero area")
        if area < 0:
            raise GeometryError("footprint vertices must be counter-clockwise")
        if not Polygon(pts).is_valid:
            raise GeometryError("footprint polygon is self-intersecting")
        c = _area_centroid(pts)
        if np.hypot(*c) > 1e-9 * max(scale, 1.0):
            raise GeometryError(f"footprint centroid {c} is not at the origin")
        pts.setflags(write=False)
        object.__setattr__(self, "_arr", pts)

    @classmethod
    def from_polygon(cls, points: Iterable[Sequence[float]]) -> tuple["Footprint", np.ndarray]:
        """Build a footprint from map-frame vertices.

        Returns the footprint and the map position of its centroid.
        """
        pts = np.asarray(list(points), dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
            raise DegenerateFootprintError("footprint needs at least 3 vertices")
        if np.allclose(pts[0], pts[-1]) and len(pts) > 3:
            pts = pts[:-1]
        area = _signed_area(pts)
        if abs(area) <= 1e-12 * max(float(np.abs(pts).max()), 1e-300) ** 2:
            raise DegenerateFootprintError("footprint has zero area")
        if area < 0:
            pts = pts[::-1]
        c = _area_centroid(pts)
        scale = max(float(np.abs(pts).max()), 1.0)
        if np.hypot(*c) > 1e-12 * scale:
            local = pts - c
        else:
            local, c = pts, np.zeros(2)
        return cls(tuple((float(x), float(y)) for x, y in local)), c

    @classmethod
    def local(cls, points: Iterable[Sequence[float]]) -> "Footprint":
        """Footprint from vertices, re-centred on the area centroid."""
        return cls.from_polygon(points)[0]

    @classmethod
    def disc(cls, radius: float, n: int = DEFAULT_RESOLUTION) -> "Footprint":
        """Regular ``n``-gon inscribed in a circle, first vertex at angle 0."""
        if radius <= 0:
            raise DegenerateFootprintError("disc radius must be positive")
        k = np.arange(n)
        ang = TWO_PI * k / n
        pts = np.column_stack([radius * np.cos(ang), radius * np.sin(ang)])
        return cls(tuple((float(x), float(y)) for x, y in pts))

    @classmethod
    def rectangle(cls, width: float, height: float) -> "Footprint":
        w, h = width / 2.0, height / 2.0
        return cls(((-w, -h), (w, -h), (w, h), (-w, h)))

    @property
    def points(self) -> np.ndarray:
        return self._arr

    @property
    def area(self) -> float:
        return _signed_area(self._arr)

    @property
    def radius(self) -> float:
        """Largest vertex distance from the centroid."""
        return float(np.hypot(self._arr[:, 0], self._arr[:, 1]).max())

    def placed(self, center) -> np.ndarray:
        return self._arr + as_xy(center)

    def polygon(self, center=(0.0, 0.0)) -> Polygon:
        return Polygon(self.placed(center))

    def is_convex(self) -> bool:
        p = self._arr
        e = np.roll(p, -1, axis=0) - p
        cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
        return bool(np.all(cross >= -TIE_TOL * self.radius**2))

    def is_star_shaped(self) -> bool:
        """True when every edge turns strictly counter-clockwise about the centroid."""
        p = self._arr
        q = np.roll(p, -1, axis=0)
        cross = p[:, 0] * q[:, 1] - p[:, 1] * q[:, 0]
        return bool(np.all(cross > TIE_TOL * self.radius**2))


# ---------------------------------------------------------------------------
# support points and boundary curves


def support_points(fp: Footprint, centroid_pose, dir_hi: float, dir_lo: float):
    """Last touching points of parallel-line sweeps along ``dir_hi`` and ``dir_lo``.

    ``A`` is the set of boundary vertices extremal along the left normal of
    ``dir_hi``; ``B`` the set extremal along the right normal of ``dir_lo``.
    When an edge is parallel to the sweep both of its end vertices (and any
    collinear vertices) are returned. Points are in map coordinates, ordered
    along the counter-clockwise boundary.

    Returns
    -------
    (A, B) : tuple of ndarray, each of shape (k, 2)
    """
    if abs(fp.area) <= 0.0:
        raise DegenerateFootprintError("zero-area footprint")
    center = as_xy(centroid_pose)
    pts = fp.points
    left_hi = np.array([-math.sin(dir_hi), math.cos(dir_hi)])
    right_lo = np.array([math.sin(dir_lo), -math.cos(dir_lo)])
    tol = TIE_TOL * fp.radius
    out = []
    for n in (left_hi, right_lo):
        off = pts @ n
        idx = np.flatnonzero(off >= off.max() - tol)
        out.append(pts[_ring_order(idx, len(pts))] + center)
    return out[0], out[1]


def _ring_order(idx: np.ndarray, n: int) -> np.ndarray:
    """Order ring indices so that a contiguous run that wraps past n-1 stays contiguous."""
    idx = np.sort(idx)
    if len(idx) > 1:
        gaps = np.diff(np.concatenate([idx, [idx[0] + n]]))
        start = (int(np.argmax(gaps)) + 1) % len(idx)
        idx = np.roll(idx, -start)
    return idx


def tangency_cut(points: np.ndarray, direction: float) -> np.ndarray:
    """Pick the element of a tangency set that lies furthest along ``direction``."""
    pts = np.atleast_2d(points)
    u = np.array([math.cos(direction), math.sin(direction)])
    return pts[int(np.argmax(pts @ u))]


@dataclass(frozen=True)
class BoundaryCurve:
    """Boundary samples in polar form about ``origin``.

    ``deg`` is unwrapped (monotone along the curve), so a curve crossing the
    0/2*pi seam keeps increasing past 2*pi. ``start``/``end`` are the
    endpoint samples (the support points for a split curve).
    """

    deg: np.ndarray
    dist: np.ndarray
    origin: tuple[float, float] = (0.0, 0.0)
    monotone: bool = True

    def __post_init__(self):
        deg = np.asarray(self.deg, dtype=float)
        dist = np.asarray(self.dist, dtype=float)
        if deg.shape != dist.shape or deg.ndim != 1:
            raise GeometryError("deg and dist must be matching 1-D arrays")
        if len(deg) == 0:
            raise GeometryError("empty curve")
        if np.any(dist < 0):
            raise GeometryError("negative distance in curve")
        if self.monotone and len(deg) > 1 and np.any(np.diff(deg) <= 0):
            raise ShapeError("curve is not monotone in angle (footprint not star-shaped)")
        deg.setflags(write=False)
        dist.setflags(write=False)
        object.__setattr__(self, "deg", deg)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    def __len__(self):
        return len(self.deg)

    @property
    def start(self) -> np.ndarray:
        return self.points()[0]

    @property
    def end(self) -> np.ndarray:
        return self.points()[-1]

    def points(self) -> np.ndarray:
        """Samples as map-frame xy array of shape (n, 2)."""
        o = np.asarray(self.origin)
        return o + np.column_stack([self.dist * np.cos(self.deg), self.dist * np.sin(self.deg)])

    def length(self) -> float:
        p = self.points()
        return float(np.hypot(*np.diff(p, axis=0).T).sum())

    @classmethod
    def from_points(cls, pts: np.ndarray, origin=(0.0, 0.0), resolution: int | None = DEFAULT_RESOLUTION):
        """Curve through a polyline, resampled where it crosses the angular grid.

        The polyline vertices are kept; extra samples are inserted on each
        edge at every multiple of ``2*pi/resolution`` it sweeps through.
        """
        o = np.asarray(origin, dtype=float)
        rel = np.asarray(pts, dtype=float) - o
        ang = np.arctan2(rel[:, 1], rel[:, 0])
        ang = np.unwrap(ang)
        ang = ang - TWO_PI * math.floor(ang[0] / TWO_PI)
        if resolution is None or len(rel) < 2:
            return cls(ang, np.hypot(rel[:, 0], rel[:, 1]), tuple(o))
        step = TWO_PI / resolution
        a0, a1 = ang[:-1], ang[1:]
        k0 = np.floor(a0 / step + 1e-12).astype(int) + 1
        k1 = np.ceil(a1 / step - 1e-12).astype(int) - 1
        counts = np.where(a1 > a0, np.maximum(k1 - k0 + 1, 0), 0)
        edge = np.repeat(np.arange(len(a0)), counts)
        first = np.repeat(np.cumsum(counts) - counts, counts)
        k = k0[edge] + np.arange(len(edge)) - first
        theta = k * step
        p, q = rel[:-1][edge], rel[1:][edge]
        e = q - p
        den = np.cos(theta) * e[:, 1] - np.sin(theta) * e[:, 0]
        safe = np.abs(den) >= 1e-300
        t = np.full(len(edge), -1.0)
        t[safe] = (np.sin(theta[safe]) * p[safe, 0] - np.cos(theta[safe]) * p[safe, 1]) / den[safe]
        keep = (t > 0.0) & (t < 1.0)
        edge, theta, t = edge[keep], theta[keep], t[keep]
        ins = rel[:-1][edge] + t[:, None] * (rel[1:][edge] - rel[:-1][edge])

        # order: start vertex, then per edge its inserted samples and its end vertex
        m = len(rel) - 1
        key_edge = np.concatenate([[-1], edge, np.arange(m)])
        key_t = np.concatenate([[0.0], t, np.ones(m)])
        xy = np.concatenate([rel[:1], ins, rel[1:]])
        out_a = np.concatenate([ang[:1], theta, a1])
        order = np.lexsort((key_t, key_edge))
        xy, out_a = xy[order], out_a[order]
        return cls(out_a, np.hypot(xy[:, 0], xy[:, 1]), tuple(o))


def _locate_on_ring(ring: np.ndarray, x: np.ndarray, tol: float) -> tuple[int, float]:
    """Edge index i and parameter t with ring[i] + t*(ring[i+1]-ring[i]) == x."""
    n = len(ring)
    e = np.roll(ring, -1, axis=0) - ring
    ee = np.einsum("ij,ij->i", e, e)
    t = np.clip(np.einsum("ij,ij->i", x - ring, e) / np.where(ee == 0, 1.0, ee), 0.0, 1.0)
    d = np.hypot(*(ring + t[:, None] * e - x).T)
    i = int(np.argmin(d))
    if d[i] > tol:
        raise GeometryError(f"point {x} is not on the footprint boundary")
    t = float(t[i])
    if t >= 1.0 - 1e-12:
        return (i + 1) % n, 0.0
    return i, t


def split_boundary(fp: Footprint, A, B, center=(0.0, 0.0), resolution: int | None = DEFAULT_RESOLUTION):
    """Split the boundary at A and B into ``f`` (A->B) and ``g`` (B->A).

    Both chains follow the counter-clockwise orientation, so for a sweep
    along +x with A on top and B at the bottom, ``f`` is the trailing (left)
    chain and ``g`` the leading (right) chain. A and B may lie anywhere on
    the boundary; they are inserted as vertices when they fall on an edge.
    Curves are expressed about the footprint centroid.
    """
    c = as_xy(center)
    a = as_xy(A) - c
    b = as_xy(B) - c
    tol = 1e-7 * fp.radius
    if np.hypot(*(a - b)) <= tol:
        raise GeometryError("degenerate split: A and B coincide")
    ring = fp.points
    n = len(ring)
    ia, ta = _locate_on_ring(ring, a, tol)
    ib, tb = _locate_on_ring(ring, b, tol)

    # walk vertex positions as (edge index + t) along the ring
    pos_a = ia + ta
    pos_b = ib + tb

    def walk(p0: float, x0: np.ndarray, p1: float, x1: np.ndarray) -> np.ndarray:
        if p1 <= p0:
            p1 += n
        chain = [x0]
        k = math.floor(p0) + 1
        while k < p1 - 1e-12:
            chain.append(ring[k % n])
            k += 1
        chain.append(x1)
        return np.asarray(chain)

    f_pts = walk(pos_a, a, pos_b, b) + c
    g_pts = walk(pos_b, b, pos_a, a) + c
    f = BoundaryCurve.from_points(f_pts, origin=c, resolution=resolution)
    g = BoundaryCurve.from_points(g_pts, origin=c, resolution=resolution)
    return f, g


def _extreme_window(d: np.ndarray, mode: str) -> tuple[int, int]:
    """Index window between the first and last local extremum of ``mode`` kind.

    Plateaus count as neither increasing nor decreasing, so a run of equal
    values ends a strictly monotone prefix/suffix.
    """
    n = len(d)
    i0 = 0
    i1 = n - 1
    if mode == "max":
        while i0 + 1 < n and d[i0 + 1] > d[i0]:
            i0 += 1
        while i1 - 1 >= 0 and d[i1 - 1] > d[i1]:
            i1 -= 1
    else:
        while i0 + 1 < n and d[i0 + 1] < d[i0]:
            i0 += 1
        while i1 - 1 >= 0 and d[i1 - 1] < d[i1]:
            i1 -= 1
    return i0, i1


def radial_envelope(curve: BoundaryCurve, mode: str = "max") -> BoundaryCurve:
    """Flatten the curve between its first and last local maxima (or minima).

    Inside that window every sample takes the window's extreme distance;
    outside it the curve is unchanged. In ``max`` mode the result bounds the
    input from outside, in ``min`` mode from inside.
    """
    if mode not in ("max", "min"):
        raise ValueError(f"mode must be 'max' or 'min', got {mode!r}")
    if len(curve) == 0:
        raise GeometryError("empty curve")
    d = np.array(curve.dist)
    i0, i1 = _extreme_window(d, mode)
    if i0 < i1:
        seg = d[i0 : i1 + 1]
        d[i0 : i1 + 1] = seg.max() if mode == "max" else seg.min()
    return BoundaryCurve(curve.deg, d, curve.origin, curve.monotone)


def transform_curve(curve: BoundaryCurve, centroid_pose, predicted_disp) -> BoundaryCurve:
    """Translate a centroid-relative curve by the predicted centroid displacement.

    ``centroid_pose`` is the current centroid (map frame) and
    ``predicted_disp`` the displacement relative to it. The result is
    expressed in polar coordinates about the map origin.
    """
    c = as_xy(centroid_pose)
    disp = as_xy(predicted_disp)
    rel = curve.points() - np.asarray(curve.origin)
    pts = rel + c + disp
    return BoundaryCurve(
        np.arctan2(pts[:, 1], pts[:, 0]) % TWO_PI,
        np.hypot(pts[:, 0], pts[:, 1]),
        (0.0, 0.0),
        monotone=False,
    )


def curve_polygon(*curves: BoundaryCurve) -> np.ndarray:
    """Concatenate curve samples into one ring, dropping repeated joints."""
    parts = []
    for c in curves:
        p = c.points()
        if parts and np.allclose(parts[-1][-1], p[0], atol=1e-12):
            p = p[1:]
        parts.append(p)
    ring = np.vstack(parts)
    if np.allclose(ring[0], ring[-1], atol=1e-12):
        ring = ring[:-1]
    return ring


# ---------------------------------------------------------------------------
# regions


class Region:
    """Closed planar point set made of polygons with holes.

    A thin immutable wrapper around a shapely geometry. Exterior rings are
    kept counter-clockwise and holes clockwise.
    """

    __slots__ = ("_geom", "_prepared")

    def __init__(self, geom=None):
        if geom is None or geom.is_empty:
            geom = Polygon()
        else:
            if not geom.is_valid:
                geom = shapely.make_valid(geom)
            geom = _polygonal(geom)
            if isinstance(geom, Polygon):
                geom = orient(geom, 1.0)
            elif isinstance(geom, MultiPolygon):
                geom = MultiPolygon([orient(g, 1.0) for g in geom.geoms])
        self._geom = geom
        self._prepared = False

    @classmethod
    def empty(cls) -> "Region":
        return cls()

    @classmethod
    def from_ring(cls, ring) -> "Region":
        return cls(Polygon(np.asarray(ring, dtype=float)))

    @classmethod
    def from_footprint(cls, fp: Footprint, center=(0.0, 0.0)) -> "Region":
        return cls(fp.polygon(center))

    @classmethod
    def rectangle(cls, xmin: float, ymin: float, xmax: float, ymax: float) -> "Region":
        return cls(shapely.box(xmin, ymin, xmax, ymax))

    @property
    def geom(self):
        if not self._prepared and not self._geom.is_empty:
            shapely.prepare(self._geom)
            self._prepared = True
        return self._geom

    @property
    def is_empty(self) -> bool:
        return self._geom.is_empty

    @property
    def area(self) -> float:
        return float(self._geom.area)

    def polygons(self) -> list[Polygon]:
        g = self._geom
        if g.is_empty:
            return []
        if isinstance(g, Polygon):
            return [g]
        return list(g.geoms)

    def rings(self) -> list[tuple[np.ndarray, list[np.ndarray]]]:
        """(outer ring, holes) coordinate arrays per polygon, without the closing vertex."""
        out = []
        for p in self.polygons():
            outer = np.asarray(p.exterior.coords)[:-1]
            holes = [np.asarray(h.coords)[:-1] for h in p.interiors]
            out.append((outer, holes))
        return out

    def contains_point(self, p) -> bool:
        if self.is_empty:
            return False
        x, y = as_xy(p)
        return bool(shapely.contains_xy(self.geom, x, y))

    def contains_xy(self, xy: np.ndarray) -> np.ndarray:
        xy = np.atleast_2d(xy)
        if self.is_empty:
            return np.zeros(len(xy), dtype=bool)
        return shapely.contains_xy(self.geom, xy[:, 0], xy[:, 1])

    def segment_clear(self, a, b) -> bool:
        return bool(segments_clear(self, np.atleast_2d(as_xy(a)), np.atleast_2d(as_xy(b)))[0])

    def overlaps_interior(self, geom) -> bool:
        """True when ``geom`` shares interior points with the region."""
        if self.is_empty or geom.is_empty:
            return False
        if not shapely.intersects(self.geom, geom):
            return False
        return not shapely.relate_pattern(self.geom, geom, "F********")

    def union(self, *others: "Region") -> "Region":
        return union([self, *others])

    def intersect(self, other: "Region") -> "Region":
        return intersect(self, other)

    def difference(self, other: "Region") -> "Region":
        if self.is_empty or other.is_empty:
            return self
        return Region(shapely.difference(self._geom, other._geom))

    def fill_holes(self) -> "Region":
        polys = self.polygons()
        if not polys:
            return self
        if all(len(p.interiors) == 0 for p in polys):
            return self
        return Region(unary_union([Polygon(p.exterior) for p in polys]))

    def __repr__(self):
        return f"Region(area={self.area:.6g}, parts={len(self.polygons())})"


def _polygonal(geom):
    if isinstance(geom, (Polygon, MultiPolygon)):
        return geom
    parts = []
    for g in getattr(geom, "geoms", []):
        g = _polygonal(g)
        if isinstance(g, Polygon) and not g.is_empty:
            parts.append(g)
        elif isinstance(g, MultiPolygon):
            parts.extend(g.geoms)
    if not parts:
        return Polygon()
    return unary_union(parts)


def point_in(r: Region, p) -> bool:
    """Interior membership; boundary points are not inside."""
    return r.contains_point(p)


def segments_clear(r: Region, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorised :func:`segment_clear` over arrays of start and end points."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    a, b = np.broadcast_arrays(a, b)
    n = len(a)
    if r.is_empty:
        return np.ones(n, dtype=bool)
    coords = np.stack([a, b], axis=1)
    same = np.all(a == b, axis=1)
    out = np.ones(n, dtype=bool)
    if np.any(same):
        out[same] = ~r.contains_xy(a[same])
    idx = np.flatnonzero(~same)
    if len(idx):
        lines = shapely.linestrings(coords[idx])
        g = r.geom
        hit = shapely.intersects(g, lines)
        if np.any(hit):
            sub = idx[hit]
            touching_only = shapely.relate_pattern(g, lines[hit], "F********")
            out[sub] = touching_only
    return out


def segment_clear(r: Region, a, b) -> bool:
    """True iff the open segment a-b avoids the region interior."""
    return r.segment_clear(a, b)


def union(rs: Sequence[Region]) -> Region:
    geoms = [r._geom for r in rs if not r.is_empty]
    if not geoms:
        return Region()
    if len(geoms) == 1:
        return Region(geoms[0])
    return Region(unary_union(geoms))


def intersect(a: Region, b: Region) -> Region:
    if a.is_empty or b.is_empty:
        return Region()
    return Region(shapely.intersection(a._geom, b._geom))


def difference(a: Region, b: Region) -> Region:
    return a.difference(b)


def area(r: Region) -> float:
    return r.area


def disc_region(center, radius: float, n: int = DEFAULT_RESOLUTION) -> Region:
    """Polygonal disc circumscribing the true circle (vertices outside, edges tangent)."""
    c = as_xy(center)
    if radius <= 0:
        return Region(Point(c))
    r = radius / math.cos(math.pi / n)
    ang = TWO_PI * np.arange(n) / n
    return Region(Polygon(c + r * np.column_stack([np.cos(ang), np.sin(ang)])))


# ---------------------------------------------------------------------------
# sweeps


def sector_polygon(radius: float, lo: float, hi: float, resolution: int = DEFAULT_RESOLUTION) -> np.ndarray:
    """Polygon covering the circular sector {r*(cos a, sin a): r <= radius, lo <= a <= hi}.

    The arc is replaced by a circumscribed polyline, so the polygon contains
    the exact sector. Includes the apex at the origin unless the sector is a
    full disc.
    """
    span = hi - lo
    if radius <= 0:
        return np.zeros((1, 2))
    if span >= TWO_PI - 1e-12:
        n = resolution
        r = radius / math.cos(math.pi / n)
        ang = lo + TWO_PI * np.arange(n) / n
        return r * np.column_stack([np.cos(ang), np.sin(ang)])
    n = max(1, math.ceil(span / (TWO_PI / resolution)))
    h = span / n
    if n == 1 and span == 0:
        return np.array([[0.0, 0.0], [radius * math.cos(lo), radius * math.sin(lo)]])
    r = radius / math.cos(h / 2.0)
    # endpoints on the true arc, interior vertices on the circumscribed circle
    mids = lo + h * (np.arange(n) + 0.5)
    arc = [np.array([radius * math.cos(lo), radius * math.sin(lo)])]
    arc += [r * np.array([math.cos(m), math.sin(m)]) for m in mids]
    arc.append(np.array([radius * math.cos(hi), radius * math.sin(hi)]))
    return np.vstack([[0.0, 0.0], *arc])


def minkowski_sum(shape: np.ndarray, motion: np.ndarray, shape_convex: bool | None = None) -> Region:
    """Region swept by polygon ``shape`` translated over polygon ``motion``.

    ``motion`` may be a single point, a segment or any polygon. Non-convex
    motion sets are fanned into triangles from their first vertex. Holes that
    appear in the sum are filled, which can only enlarge the region.
    """
    shape = np.asarray(shape, dtype=float)
    motion = np.atleast_2d(np.asarray(motion, dtype=float))
    if shape_convex is None:
        shape_convex = _ring_convex(shape)
    pieces = _convex_pieces(motion)
    out = []
    for piece in pieces:
        if shape_convex:
            pts = (shape[:, None, :] + piece[None, :, :]).reshape(-1, 2)
            out.append(shapely.convex_hull(shapely.multipoints(pts)))
        else:
            edges = np.stack([shape, np.roll(shape, -1, axis=0)], axis=1)
            allpts = (edges[:, :, None, :] + piece[None, None, :, :]).reshape(len(edges), -1, 2)
            hulls = shapely.convex_hull(shapely.multipoints(allpts))
            out.append(unary_union(hulls))
            out.append(Polygon(shape + piece[0]))
    geom = unary_union(out)
    return Region(geom).fill_holes()


def _ring_convex(ring: np.ndarray) -> bool:
    e = np.roll(ring, -1, axis=0) - ring
    cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
    scale = float(np.abs(ring).max()) ** 2 + 1e-300
    return bool(np.all(cross >= -TIE_TOL * scale) or np.all(cross <= TIE_TOL * scale))


def _convex_pieces(motion: np.ndarray) -> list[np.ndarray]:
    if len(motion) <= 2 or _ring_convex(motion):
        return [motion]
    return [np.array([motion[0], motion[i], motion[i + 1]]) for i in range(1, len(motion) - 1)]
