"""
Discrete-time world: true object motion, robot motion, sensing, planning.

One :class:`World` owns one run. Each call to :func:`step_world` moves every
body over one step, checks collisions on the true placements, then lets the
planner observe, update its histories, build safe zones and decide the next
velocity. Every step appends one record to the trace.
"""

from __future__ import annotations

import math

import numpy as np
import shapely

from ..geometry import Region, as_xy, bearing, union
from ..planner import PlanGrid, Planner, PlanStep, evaluate_objective, min_steps, static_shortest_path
from ..prediction import ObjectState, believed_state, observe_motion, update_states
from ..safezone import SafeZone, build_safe_zone
from ..uncertainty import DirectionErrorModel, RngStream, SpeedErrorModel, sample_errors
from .collision import collision_check
from .scenario import Scenario, to_dict
from .trace import Trace, region_outline

GOAL, TIMEOUT, COLLISION = "goal", "timeout", "collision"

# spawn key of the predictor stream; object streams use their index
_PREDICTOR_STREAM = 1 << 20


class World:
    """Mutable state of one simulation run."""

    def __init__(self, sc: Scenario, seed: int | None = None):
        self.sc = sc
        self.seed = sc.params.seed if seed is None else int(seed)
        self.dt = sc.params.dt
        self.t = 0
        self.outcome: str | None = None
        self.obj_rng = {o.id: RngStream(self.seed, i) for i, o in enumerate(sc.objects)}
        self.pred_rng = RngStream(self.seed, _PREDICTOR_STREAM)

        self.robot_xy = np.asarray(sc.robot.start, dtype=float)
        self.robot_direction = bearing(sc.robot.start, sc.robot.goal)
        self.obj_xy = {o.id: np.asarray(o.position, dtype=float) for o in sc.objects}
        self.obj_motion = {o.id: o.initial_motion() for o in sc.objects}

        self.histories: dict = {}
        self.known_static: list[int] = []
        self.planner = Planner(sc.bounds, sc.robot.goal, sc.robot.v_max, self.dt, sc.grid_cell,
                               sc.robot.footprint, Region(), sc.params.confidence)
        self.plan: PlanStep | None = None
        self.trace = Trace(scenario=to_dict(sc), seed=self.seed)
        self._observe_and_plan(collisions=[])

    # -- sensing -----------------------------------------------------------

    def _visible(self, geom) -> bool:
        R = self.sc.sensing_radius
        if math.isinf(R):
            return True
        fp = self.sc.robot.footprint
        me = shapely.Point(self.robot_xy) if fp is None else fp.polygon(self.robot_xy)
        return shapely.distance(me, geom) <= R

    def _sense_static(self) -> None:
        new = [i for i, s in enumerate(self.sc.static)
               if i not in self.known_static and self._visible(s.region.geom)]
        if new:
            self.known_static = sorted(self.known_static + new)
            self.planner.set_static(union([self.sc.static[i].region for i in self.known_static]))

    def _beliefs(self) -> tuple[list[SafeZone], dict, list[dict]]:
        p = self.sc.params
        observed = []
        seen = []
        for o in self.sc.objects:
            xy = self.obj_xy[o.id]
            if not self._visible(o.footprint.polygon(xy)):
                continue
            speed, direction = self.obj_motion[o.id]
            if o.stochastic:
                sv, sd = o.motion.sigma_v, o.motion.sigma_d
            else:
                sv = sd = 0.0
            observed.append((o.id, ObjectState.at(xy, speed, direction, sv, sd, step=self.t)))
            seen.append(o)
        update_states(self.histories, observed, p.predictor, self.pred_rng, p.history)

        zones, beliefs, rows = [], {}, []
        for o in seen:
            xy = self.obj_xy[o.id]
            if o.stochastic:
                b = believed_state(self.histories[o.id], o.motion.sigma_v, o.motion.sigma_d)
            else:
                # scripted motion is known exactly
                speed, direction = o.motion.at(self.t)
                b = ObjectState.at(xy, speed, direction, step=self.t)
            step_state = self._per_step(b)
            zone = build_safe_zone(step_state, o.footprint, p.confidence, o.id, self.t + 1, p.resolution)
            zones.append(zone)
            beliefs[o.id] = (step_state, o.footprint)
            rows.append({
                "id": o.id,
                "speed": b.expected_speed,
                "direction": b.expected_direction,
                "sigma_v": b.sigma_v,
                "sigma_d": b.sigma_d,
                "moving": b.moving,
            })
        return zones, beliefs, rows

    def _per_step(self, s: ObjectState) -> ObjectState:
        """Rescale speeds (map units per time) to displacement per step."""
        if self.dt == 1.0:
            return s
        v = s.expected_speed * self.dt
        return ObjectState(
            pose=s.pose,
            expected_direction=s.expected_direction,
            expected_speed=v,
            speed_model=SpeedErrorModel(v, s.sigma_v * self.dt),
            direction_model=s.direction_model,
            deterministic=s.deterministic,
            step=s.step,
        )

    # -- planning ----------------------------------------------------------

    def _observe_and_plan(self, collisions: list) -> None:
        self._sense_static()
        zones, beliefs, belief_rows = self._beliefs()
        sz = union([z.region for z in zones])
        terminal = self._terminal(collisions)
        if terminal is None:
            self.plan = self.planner.plan(self.robot_xy, zones, beliefs, self.robot_direction)
        else:
            self.plan = None
            self.outcome = terminal
        by_id = {r["id"]: r for r in belief_rows}
        self.trace.add_step(
            t=self.t,
            robot=self.robot_xy,
            objects=[
                {
                    "id": o.id,
                    "x": float(self.obj_xy[o.id][0]),
                    "y": float(self.obj_xy[o.id][1]),
                    "speed": self.obj_motion[o.id][0],
                    "direction": self.obj_motion[o.id][1],
                    "believed": by_id.get(o.id),
                }
                for o in self.sc.objects
            ],
            zones=region_outline(sz),
            plan=self.plan,
            collisions=collisions,
            known_static=list(self.known_static),
        )
        if terminal is not None:
            self._finish()

    def _terminal(self, collisions: list) -> str | None:
        if collisions:
            return COLLISION
        if np.hypot(*(self.robot_xy - as_xy(self.sc.robot.goal))) <= self.sc.grid_cell + 1e-12:
            return GOAL
        if self.t >= self.sc.params.max_steps:
            return TIMEOUT
        return None

    def _finish(self) -> None:
        sc = self.sc
        walls = sc.static_region()
        grid = PlanGrid.build(sc.bounds, sc.grid_cell, walls, sc.robot.footprint)
        sp, sp_len = static_shortest_path(grid, sc.robot.start, sc.robot.goal, walls, sc.robot.footprint)
        valid = self.outcome != COLLISION
        score = None
        t_min = None
        if sp is not None and sp_len > 0:
            t_min = min_steps(sp_len, sc.robot.v_max, self.dt)
            score = evaluate_objective(self.trace.positions(), sp, t_min, valid)
        self.trace.finish(
            outcome=self.outcome,
            steps=self.t,
            objective=score,
            valid=valid and score is not None,
            t_min=t_min,
            sp_length=None if sp is None else sp_len,
            sp=None if sp is None else sp.tolist(),
        )

    @property
    def done(self) -> bool:
        return self.outcome is not None


def _advance(xy: np.ndarray, speed: float, direction: float, dt: float) -> np.ndarray:
    return xy + speed * dt * np.array([math.cos(direction), math.sin(direction)])


def step_world(world: World) -> World:
    """Advance every body one step, check collisions, then observe and plan."""
    if world.done:
        raise RuntimeError("world is already terminal")
    sc, dt, t = world.sc, world.dt, world.t

    moves = []
    new_xy = {}
    new_motion = {}
    for o in sc.objects:
        if o.stochastic:
            m = o.motion
            dv, dth = sample_errors(SpeedErrorModel(m.speed, m.sigma_v), DirectionErrorModel(m.direction, m.sigma_d),
                                    world.obj_rng[o.id])
            speed, direction = m.speed + dv, m.direction + dth
        else:
            speed, direction = o.motion.at(t)
        prev = world.obj_xy[o.id]
        nxt = _advance(prev, speed, direction, dt)
        new_xy[o.id] = nxt
        # what a sensor sees: the realized displacement of this step
        new_motion[o.id] = observe_motion(prev, nxt, dt) if o.stochastic else (speed, direction)
        moves.append((o.id, o.footprint, prev, nxt))

    plan = world.plan
    r_prev = world.robot_xy
    r_next = _advance(r_prev, plan.speed, plan.direction, dt)
    statics = [(s.id, s.region) for s in sc.static]
    hits = collision_check(sc.robot.footprint, r_prev, r_next, moves, statics, sc.params.collision_substeps)

    world.obj_xy = new_xy
    world.obj_motion = new_motion
    world.robot_xy = r_next
    world.robot_direction = plan.direction
    world.t = t + 1
    world._observe_and_plan([{"id": i, "fraction": f} for i, f in hits])
    return world


def run(sc: Scenario, seed: int | None = None) -> Trace:
    """Simulate until goal, collision or the step limit."""
    w = World(sc, seed)
    while not w.done:
        step_world(w)
    return w.trace
