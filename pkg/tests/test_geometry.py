import math

import numpy as np
import pytest
import shapely
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_support, raster_area, region_rings
from zoneplan.geometry import (
    BoundaryCurve,
    DegenerateFootprintError,
    EuclidPoint,
    Footprint,
    GeometryError,
    PolarPoint,
    Region,
    area,
    disc_region,
    euclid_to_polar,
    intersect,
    point_in,
    polar_to_euclid,
    radial_envelope,
    segment_clear,
    segments_clear,
    split_boundary,
    support_points,
    transform_curve,
    union,
    wrap_pi,
)


def _close(p, xy, tol=1e-12):
    return abs(p.x - xy[0]) < tol and abs(p.y - xy[1]) < tol


def random_convex(rng, n=12):
    pts = rng.normal(size=(n, 2)) * rng.uniform(0.2, 3.0, size=2)
    hull = shapely.convex_hull(shapely.multipoints(pts))
    return Footprint.from_polygon(np.asarray(hull.exterior.coords)[:-1])[0]


class TestPolar:
    def test_examples(self):
        assert _close(polar_to_euclid(PolarPoint(0.0, 1.0)), (1, 0))
        assert _close(polar_to_euclid(PolarPoint(math.pi / 2, 2.0)), (0, 2))
        assert _close(polar_to_euclid(PolarPoint(math.pi / 4, math.sqrt(2))), (1, 1), 1e-12)

    def test_inverse_examples(self):
        p = euclid_to_polar(EuclidPoint(1, 0))
        assert (p.angle, p.radius) == (0.0, 1.0)
        p = euclid_to_polar(EuclidPoint(-1, 0))
        assert p.angle == pytest.approx(math.pi) and p.radius == 1.0
        p = euclid_to_polar(EuclidPoint(1, 1))
        assert p.angle == pytest.approx(math.pi / 4, abs=1e-15)
        assert p.radius == pytest.approx(math.sqrt(2), abs=1e-15)

    def test_origin_convention(self):
        p = euclid_to_polar(EuclidPoint(0, 0))
        assert (p.angle, p.radius) == (0.0, 0.0)

    def test_quadrants(self):
        for x, y, ang in [(1, 1, 0.25), (-1, 1, 0.75), (-1, -1, 1.25), (1, -1, 1.75)]:
            assert euclid_to_polar(EuclidPoint(x, y)).angle == pytest.approx(ang * math.pi)

    @given(st.floats(-50, 50), st.floats(0, 1e6))
    def test_round_trip(self, ang, r):
        p = PolarPoint(ang, r)
        q = euclid_to_polar(polar_to_euclid(p))
        a, b = polar_to_euclid(p), polar_to_euclid(q)
        assert math.hypot(a.x - b.x, a.y - b.y) < 1e-9
        assert 0.0 <= q.angle < 2 * math.pi

    def test_negative_radius_rejected(self):
        with pytest.raises(GeometryError):
            PolarPoint(0.0, -1.0)


class TestFootprint:
    def test_from_polygon_centres_and_orients(self):
        fp, c = Footprint.from_polygon([(2, 2), (2, 4), (4, 4), (4, 2)])
        assert np.allclose(c, (3, 3))
        assert fp.area == pytest.approx(4.0)

    def test_zero_area(self):
        with pytest.raises(DegenerateFootprintError):
            Footprint.from_polygon([(0, 0), (1, 1), (2, 2)])

    def test_star_shape(self):
        assert Footprint.disc(1.0, 32).is_star_shaped()
        # thin C shape: the centroid sees part of the boundary edge-on from behind
        c = [(0, 0), (3, 0), (3, 0.2), (0.2, 0.2), (0.2, 2.8), (3, 2.8), (3, 3), (0, 3)]
        assert not Footprint.local(c).is_star_shaped()


class TestSupportPoints:
    def test_disc(self):
        fp = Footprint.disc(1.0, 360)
        A, B = support_points(fp, PolarPoint(0, 0), 0.0, 0.0)
        assert np.allclose(A.mean(axis=0), (0, 1), atol=1e-3)
        assert np.allclose(B.mean(axis=0), (0, -1), atol=1e-3)

    def test_square_edge_tangency(self):
        fp = Footprint.rectangle(1.0, 1.0)
        A, B = support_points(fp, (0, 0), 0.0, 0.0)
        assert sorted(map(tuple, A)) == [(-0.5, 0.5), (0.5, 0.5)]
        assert sorted(map(tuple, B)) == [(-0.5, -0.5), (0.5, -0.5)]

    def test_collapsed_cone_antipodal(self):
        fp = Footprint.local([(0, 0), (3, 0), (2, 2), (0, 1)])
        A, B = support_points(fp, (0, 0), 0.7, 0.7)
        n = np.array([-math.sin(0.7), math.cos(0.7)])
        assert (A @ n).min() > (B @ n).max()

    def test_translated_by_centroid(self):
        fp = Footprint.rectangle(2.0, 1.0)
        A0, B0 = support_points(fp, (0, 0), 0.3, -0.3)
        A1, B1 = support_points(fp, (5, -2), 0.3, -0.3)
        assert np.allclose(A1 - A0, (5, -2)) and np.allclose(B1 - B0, (5, -2))

    def test_matches_brute_scan(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            fp = random_convex(rng)
            d = rng.uniform(0, 2 * math.pi)
            w = rng.uniform(0, 1.0)
            A, B = support_points(fp, (0, 0), d + w, d - w)
            tol = 1e-9 * fp.radius
            ia = brute_support(fp.points, (-math.sin(d + w), math.cos(d + w)), tol)
            ib = brute_support(fp.points, (math.sin(d - w), -math.cos(d - w)), tol)
            assert sorted(map(tuple, A)) == sorted(map(tuple, fp.points[ia]))
            assert sorted(map(tuple, B)) == sorted(map(tuple, fp.points[ib]))


class TestSplitBoundary:
    def test_disc_halves(self):
        fp = Footprint.disc(1.0, 360)
        f, g = split_boundary(fp, (0, 1), (0, -1))
        assert np.all(f.points()[1:-1, 0] < 0)
        assert np.all(g.points()[1:-1, 0] > 0)
        assert f.length() == pytest.approx(math.pi, rel=1e-3)

    def test_square_corners(self):
        fp = Footprint.rectangle(1.0, 1.0)
        f, g = split_boundary(fp, (0.5, 0.5), (-0.5, -0.5), resolution=None)
        assert len(f) == 3 and len(g) == 3
        assert f.length() == pytest.approx(2.0) and g.length() == pytest.approx(2.0)
        assert np.allclose(f.points()[1], (-0.5, 0.5))
        assert np.allclose(g.points()[1], (0.5, -0.5))

    def test_triangle_vertex_and_midpoint(self):
        fp, c = Footprint.from_polygon([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])
        A = np.array([0.0, 0.0]) - c
        B = np.array([0.75, math.sqrt(3) / 4]) - c
        f, g = split_boundary(fp, A, B, resolution=None)
        assert sorted([f.length(), g.length()]) == pytest.approx([1.5, 1.5])

    def test_chains_share_only_endpoints(self):
        fp = Footprint.rectangle(2.0, 1.0)
        f, g = split_boundary(fp, (1, 0.5), (-1, -0.5))
        assert np.allclose(f.start, g.end) and np.allclose(f.end, g.start)
        total = f.length() + g.length()
        assert total == pytest.approx(6.0)

    def test_degenerate(self):
        with pytest.raises(GeometryError):
            split_boundary(Footprint.rectangle(1, 1), (0.5, 0.5), (0.5, 0.5))

    def test_point_off_boundary(self):
        with pytest.raises(GeometryError):
            split_boundary(Footprint.rectangle(1, 1), (0.0, 0.0), (0.5, 0.5))


def _window_oracle(d, mode):
    """Brute force: indices of local extrema of the requested kind, then flatten between first and last."""
    n = len(d)
    better = (lambda a, b: a > b) if mode == "max" else (lambda a, b: a < b)
    ext = [i for i in range(n)
           if (i == 0 or not better(d[i - 1], d[i])) and (i == n - 1 or not better(d[i + 1], d[i]))]
    out = d.copy()
    if len(ext) >= 2:
        a, b = ext[0], ext[-1]
        seg = d[a : b + 1]
        out[a : b + 1] = seg.max() if mode == "max" else seg.min()
    return out


def _curve(dist):
    dist = np.asarray(dist, dtype=float)
    return BoundaryCurve(np.linspace(0.1, 3.0, len(dist)), dist)


class TestRadialEnvelope:
    def test_monotone_unchanged(self):
        c = _curve(np.linspace(1, 2, 20))
        for mode in ("max", "min"):
            assert np.array_equal(radial_envelope(c, mode).dist, c.dist)

    def test_dip_filled(self):
        d = np.array([1.0, 1.5, 2.0, 1.2, 0.8, 1.2, 2.0, 1.5, 1.0])
        out = radial_envelope(_curve(d), "max").dist
        assert np.array_equal(out, [1.0, 1.5, 2.0, 2.0, 2.0, 2.0, 2.0, 1.5, 1.0])

    def test_bump_flattened(self):
        d = np.array([2.0, 1.5, 1.0, 1.4, 1.9, 1.4, 1.0, 1.5, 2.0])
        out = radial_envelope(_curve(d), "min").dist
        assert np.array_equal(out, [2.0, 1.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.5, 2.0])

    @given(st.lists(st.floats(0.1, 10.0), min_size=2, max_size=40), st.sampled_from(["max", "min"]))
    def test_oracle_idempotent_dominance(self, dist, mode):
        c = _curve(dist)
        e = radial_envelope(c, mode)
        assert np.allclose(e.dist, _window_oracle(np.asarray(dist), mode))
        assert np.array_equal(radial_envelope(e, mode).dist, e.dist)
        if mode == "max":
            assert np.all(e.dist >= c.dist)
        else:
            assert np.all(e.dist <= c.dist)

    def test_empty_curve_rejected(self):
        with pytest.raises(GeometryError):
            BoundaryCurve(np.array([]), np.array([]))

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            radial_envelope(_curve([1, 2]), "mean")


class TestTransformCurve:
    def test_zero_displacement(self):
        c = BoundaryCurve(np.linspace(0, math.pi, 50), np.ones(50))
        t = transform_curve(c, (0, 0), PolarPoint(0, 0))
        assert np.allclose(t.points(), c.points(), atol=1e-12)

    def test_semicircle_shift(self):
        ang = np.linspace(-math.pi / 2, math.pi / 2, 91)
        c = BoundaryCurve(ang, np.ones_like(ang))
        t = transform_curve(c, (0, 0), PolarPoint(0.0, 1.0))
        expect = np.column_stack([1 + np.cos(ang), np.sin(ang)])
        assert np.allclose(t.points(), expect, atol=1e-12)

    def test_point_curve(self):
        c = BoundaryCurve(np.array([0.0]), np.array([1.0]))
        t = transform_curve(c, (0, 0), PolarPoint(math.pi / 2, 1.0))
        assert t.deg[0] == pytest.approx(math.pi / 4)
        assert t.dist[0] == pytest.approx(math.sqrt(2))

    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 2 * math.pi), st.floats(0, 10))
    def test_rigid(self, cx, cy, ang, r):
        rng = np.random.default_rng(3)
        deg = np.sort(rng.uniform(0, 2 * math.pi, 30))
        c = BoundaryCurve(deg, rng.uniform(0.5, 2.0, 30), origin=(cx, cy), monotone=False)
        t = transform_curve(c, (cx, cy), PolarPoint(ang, r))
        p, q = c.points(), t.points()
        dp = np.hypot(*(p[:, None] - p[None]).transpose(2, 0, 1))
        dq = np.hypot(*(q[:, None] - q[None]).transpose(2, 0, 1))
        assert np.abs(dp - dq).max() < 1e-9


class TestRegions:
    def test_examples(self):
        disc = disc_region((0, 0), 1.0, 64)
        assert point_in(disc, EuclidPoint(0, 0))
        assert not segment_clear(disc, (-2, 0), (2, 0))
        sq = union([Region.rectangle(0, 0, 1, 1), Region.rectangle(3, 0, 4, 1)])
        assert area(sq) == pytest.approx(2.0, abs=1e-6)
        assert raster_area(region_rings(sq), (-1, -1, 5, 2), 600) == pytest.approx(2.0, rel=1e-3)

    def test_boundary_semantics(self):
        sq = Region.rectangle(0, 0, 1, 1)
        assert not point_in(sq, (1, 0.5))
        assert segment_clear(sq, (0, -1), (0, 2))  # runs along an edge
        assert not segment_clear(sq, (-1, 0.5), (0.5, 0.5))

    def test_empty_identity_and_annihilator(self):
        sq = Region.rectangle(0, 0, 1, 1)
        assert union([sq, Region()]).area == pytest.approx(1.0)
        assert intersect(sq, Region()).is_empty
        assert union([]).is_empty

    def test_segments_clear_vectorized(self):
        rng = np.random.default_rng(5)
        r = union([disc_region(rng.uniform(0, 10, 2), rng.uniform(0.3, 1.5), 32) for _ in range(6)])
        a, b = rng.uniform(0, 10, (500, 2)), rng.uniform(0, 10, (500, 2))
        vec = segments_clear(r, a, b)
        one = [segment_clear(r, p, q) for p, q in zip(a, b)]
        assert vec.tolist() == one

    @given(st.floats(0, 3), st.floats(0, 3), st.floats(0.2, 1.5), st.floats(0.2, 1.5))
    def test_union_area_bound(self, x, y, w, h):
        a = Region.rectangle(0, 0, 1, 1)
        b = Region.rectangle(x, y, x + w, y + h)
        u = union([a, b])
        oracle = raster_area(region_rings(u), (-0.5, -0.5, 5, 5), 550)
        assert u.area == pytest.approx(oracle, rel=1e-2, abs=2e-3)
        assert u.area <= a.area + b.area + 1e-12
        overlap = intersect(a, b).area
        assert u.area == pytest.approx(a.area + b.area - overlap, abs=1e-12)
        if overlap == 0:
            assert u.area == pytest.approx(a.area + b.area, rel=1e-3)

    def test_wrap_pi(self):
        assert wrap_pi(math.pi) == pytest.approx(-math.pi)
        assert wrap_pi(-math.pi) == pytest.approx(-math.pi)
        assert wrap_pi(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
