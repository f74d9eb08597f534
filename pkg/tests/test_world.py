import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import swept_convex_hits
from zoneplan.geometry import Footprint, Region
from zoneplan.sim.collision import collision_check
from zoneplan.sim.scenario import load_scenario
from zoneplan.sim.trace import Trace
from zoneplan.sim.world import COLLISION, GOAL, TIMEOUT, World, run, step_world

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

BASE = {"environment": {"bounds": [0, 0, 20, 10]}, "robot": {"start": [1, 5], "goal": [11, 5], "v_max": 1.0}}


def scenario(**over):
    d = {**BASE, **over}
    return load_scenario(d)


def square(side=1.0):
    return Footprint.rectangle(side, side)


class TestCollision:
    def test_overlapping_squares(self):
        hits = collision_check(square(), (0, 0), (0, 0), [("a", square(), (0.5, 0.0), (0.5, 0.0))])
        assert hits == [("a", 0.1)]

    def test_shared_edge_is_not_collision(self):
        assert collision_check(square(), (0, 0), (0, 0), [("a", square(), (1.0, 0.0), (1.0, 0.0))]) == []

    def test_static_region(self):
        wall = Region.rectangle(2, -1, 3, 1)
        hits = collision_check(None, (0, 0), (4, 0), [], [("w", wall)])
        assert hits == [("w", 0.6)]
        assert collision_check(None, (0, 0), (2, 0), [], [("w", wall)]) == []

    def test_tunneling_caught_between_endpoints(self):
        # both endpoints are clear; the sub-step at fraction 0.5 is not
        body = np.array([[-0.25, -1], [0.25, -1], [0.25, 1], [-0.25, 1]])
        fp = Footprint.local(body)
        r = Footprint.rectangle(0.2, 0.2)
        hits = collision_check(r, (0, 0), (10, 0), [("w", fp, (5.0, 0.0), (5.0, 0.0))])
        assert hits == [("w", 0.5)]
        assert swept_convex_hits(r.points, (0, 0), (10, 0), body + (5, 0), (0, 0), (0, 0))

    def test_thin_wall_needs_finer_substeps(self):
        # thinner than the sub-step travel: the continuous test sees it, K=10 does not
        body = np.array([[-0.05, -1], [0.05, -1], [0.05, 1], [-0.05, 1]])
        fp = Footprint.local(body)
        r = Footprint.rectangle(0.2, 0.2)
        moves = [("w", fp, (5.5, 0.0), (5.5, 0.0))]
        assert swept_convex_hits(r.points, (0, 0), (10, 0), body + (5.5, 0), (0, 0), (0, 0))
        assert collision_check(r, (0, 0), (10, 0), moves) == []
        assert collision_check(r, (0, 0), (10, 0), moves, substeps=100) != []

    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-2, 2), st.floats(-2, 2))
    def test_sampled_hit_implies_swept_hit(self, x1, y1, ox, oy, vx, vy):
        r = square(0.6)
        o = Footprint.rectangle(0.8, 0.4)
        moves = [("o", o, (ox, oy), (ox + vx, oy + vy))]
        sampled = collision_check(r, (0, 0), (x1, y1), moves)
        cont = swept_convex_hits(r.points, (0, 0), (x1, y1), o.points, (ox, oy), (ox + vx, oy + vy))
        if sampled:
            assert cont
        if not cont:
            assert not collision_check(r, (0, 0), (x1, y1), moves, substeps=200)


class TestWorld:
    def test_static_objects_do_not_move(self):
        o = {"id": "s", "footprint": {"disc": {"radius": 0.5}}, "position": [6, 8],
             "motion": {"type": "scripted", "steps": []}}
        tr = run(scenario(objects=[o]))
        xs = {(ob["x"], ob["y"]) for s in tr.steps for ob in s["objects"]}
        assert xs == {(6.0, 8.0)}

    def test_scripted_speed_one(self):
        o = {"id": "m", "footprint": {"disc": {"radius": 0.3}}, "position": [2, 9],
             "motion": {"type": "scripted", "steps": [{"speed": 1, "direction": 0, "repeat": 30}]}}
        tr = run(scenario(objects=[o]))
        x = np.array([s["objects"][0]["x"] for s in tr.steps])
        assert np.array_equal(np.diff(x), np.ones(len(x) - 1))

    def test_scripted_zero_residual(self):
        o = {"id": "m", "footprint": {"disc": {"radius": 0.3}}, "position": [2, 9],
             "motion": {"type": "scripted", "steps": [{"speed": 0.5, "direction": 0.1, "repeat": 30}]}}
        w = World(scenario(objects=[o]))
        for _ in range(4):
            step_world(w)
        h = w.histories["m"]
        assert np.allclose(h.speed_residuals, 0.0, atol=1e-12)
        assert np.allclose(h.direction_residuals, 0.0, atol=1e-12)

    def test_empty_map(self):
        tr = run(scenario())
        assert tr.outcome == GOAL
        assert abs(tr.terminal["steps"] - 10) <= 1
        assert tr.objective == pytest.approx(1.0, abs=0.02)

    def test_same_seed_same_bytes(self):
        sc = load_scenario(SCENARIOS / "stochastic_crowd.json")
        assert run(sc, 42).dumps() == run(sc, 42).dumps()
        assert run(sc, 42).dumps() != run(sc, 43).dumps()

    def test_replay(self):
        tr = run(load_scenario(SCENARIOS / "crossing_traffic.json"), 3)
        assert np.max(np.abs(tr.replay() - tr.positions())) < 1e-9

    def test_trace_round_trip(self, tmp_path):
        tr = run(load_scenario(SCENARIOS / "head_on.json"))
        again = Trace.load(tr.save(tmp_path / "t.json"))
        assert again.dumps() == tr.dumps()

    def test_static_trap_times_out(self):
        tr = run(load_scenario(SCENARIOS / "static_trap.json"))
        assert tr.outcome == TIMEOUT
        assert tr.collisions() == []
        assert tr.terminal["valid"] is False

    def test_head_on(self):
        tr = run(load_scenario(SCENARIOS / "head_on.json"))
        assert tr.outcome == GOAL and tr.collisions() == []

    def test_collision_terminates(self):
        # a body parked across the straight line, with the planner blind to it
        o = {"id": "x", "footprint": {"rect": {"width": 1, "height": 4}}, "position": [6, 5],
             "motion": {"type": "scripted", "steps": []}}
        sc = scenario(objects=[o], parameters={"sensing_radius": 0.1})
        tr = run(sc)
        assert tr.outcome == COLLISION
        assert tr.collisions()[0][1] == "x"
        assert tr.objective is None and tr.terminal["valid"] is False

    def test_stepping_terminal_world_fails(self):
        w = World(scenario())
        while not w.done:
            step_world(w)
        with pytest.raises(RuntimeError):
            step_world(w)

    def test_trace_rejects_gaps(self):
        doc = run(scenario()).to_dict()
        doc["steps"][2]["t"] = 7
        with pytest.raises(ValueError):
            Trace.from_dict(doc)
