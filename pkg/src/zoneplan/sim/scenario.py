"""
Scenario documents: loading, validation and serialization.

A scenario is a JSON object; ``scenario.schema.json`` (shipped next to this
module) fixes the field names. Structural problems are reported by the JSON
schema validator, semantic ones (start inside a wall, non-positive sigma)
by :func:`validate`. Both raise :class:`ScenarioError` carrying the
offending field path.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from ..geometry import Footprint, GeometryError, Region, union
from ..prediction import DEFAULT_HISTORY, PREDICTORS


class ScenarioError(ValueError):
    """Invalid scenario document; ``field`` is a dotted path, ``line`` a 1-based line or None."""

    def __init__(self, message: str, field: str = "", line: int | None = None):
        self.field = field
        self.line = line
        where = field or "<document>"
        if line is not None:
            where = f"line {line}: {where}"
        super().__init__(f"{where}: {message}")


@lru_cache(maxsize=None)
def schema() -> dict:
    text = resources.files(__package__).joinpath("scenario.schema.json").read_text()
    return json.loads(text)


# ---------------------------------------------------------------------------
# footprints


def build_footprint(spec: dict, where: str = "footprint") -> tuple[Footprint, np.ndarray]:
    """Footprint plus the offset of its area centroid in the document's coordinates."""
    try:
        if "polygon" in spec:
            return Footprint.from_polygon(spec["polygon"])
        if "disc" in spec:
            d = spec["disc"]
            return Footprint.disc(d["radius"], d.get("segments", 48)), np.zeros(2)
        if "rect" in spec:
            r = spec["rect"]
            return Footprint.rectangle(r["width"], r["height"]), np.zeros(2)
    except GeometryError as e:
        raise ScenarioError(str(e), where) from e
    raise ScenarioError("unknown footprint kind", where)


# ---------------------------------------------------------------------------
# motion scripts


@dataclass(frozen=True)
class ScriptedMotion:
    """Exactly known motion: one (speed, direction) per step.

    After the last entry the object rests, unless ``loop`` restarts it.
    """

    steps: tuple[tuple[float, float], ...]
    loop: bool = False

    def at(self, k: int) -> tuple[float, float]:
        if not self.steps:
            return 0.0, 0.0
        if self.loop:
            return self.steps[k % len(self.steps)]
        if k < len(self.steps):
            return self.steps[k]
        return 0.0, self.steps[-1][1]


@dataclass(frozen=True)
class StochasticMotion:
    speed: float
    direction: float
    sigma_v: float
    sigma_d: float


def compile_waypoints(start, waypoints, speed: float, loop: bool = False) -> tuple[tuple[float, float], ...]:
    """Per-step (speed, direction) list that visits each waypoint exactly.

    Each leg is covered at full speed, finishing with one shorter step that
    lands on the waypoint. A looping script returns to ``start`` last.
    """
    pts = [np.asarray(start, dtype=float)] + [np.asarray(w, dtype=float) for w in waypoints]
    if loop:
        pts.append(pts[0])
    out = []
    for a, b in zip(pts[:-1], pts[1:]):
        d = b - a
        dist = float(np.hypot(*d))
        if dist <= 1e-12:
            continue
        heading = math.atan2(d[1], d[0])
        full = int(dist // speed)
        rest = dist - full * speed
        out.extend([(float(speed), heading)] * full)
        if rest > 1e-12:
            out.append((rest, heading))
    return tuple(out)


# ---------------------------------------------------------------------------
# scenario


@dataclass(frozen=True)
class Parameters:
    dt: float = 1.0
    history: int = DEFAULT_HISTORY
    confidence: float = 2.0
    grid_cell: float | None = None
    sensing_radius: float | None = None
    predictor: str = "mean"
    max_steps: int = 200
    seed: int = 0
    collision_substeps: int = 10
    resolution: int = 72


@dataclass(frozen=True, eq=True)
class StaticObstacle:
    id: str
    vertices: tuple[tuple[float, float], ...]
    source: dict = field(compare=False, repr=False)

    @property
    def region(self) -> Region:
        return Region.from_ring(self.vertices)


@dataclass(frozen=True, eq=True)
class ObjectSpec:
    id: str
    footprint: Footprint
    position: tuple[float, float]
    motion: ScriptedMotion | StochasticMotion
    source: dict = field(compare=False, repr=False)

    @property
    def stochastic(self) -> bool:
        return isinstance(self.motion, StochasticMotion)

    def initial_motion(self) -> tuple[float, float]:
        if self.stochastic:
            return self.motion.speed, self.motion.direction
        return self.motion.at(0)


@dataclass(frozen=True, eq=True)
class RobotSpec:
    start: tuple[float, float]
    goal: tuple[float, float]
    v_max: float
    footprint: Footprint | None
    source: dict = field(compare=False, repr=False)


@dataclass(frozen=True, eq=True)
class Scenario:
    bounds: tuple[float, float, float, float]
    robot: RobotSpec
    static: tuple[StaticObstacle, ...] = ()
    objects: tuple[ObjectSpec, ...] = ()
    params: Parameters = Parameters()
    name: str = ""
    description: str = ""

    @property
    def grid_cell(self) -> float:
        p = self.params
        return p.grid_cell if p.grid_cell is not None else self.robot.v_max * p.dt / 4.0

    @property
    def sensing_radius(self) -> float:
        r = self.params.sensing_radius
        return math.inf if r is None else r

    def static_region(self) -> Region:
        return union([s.region for s in self.static])

    def with_params(self, **kw) -> "Scenario":
        kw = {k: v for k, v in kw.items() if v is not None}
        sc = replace(self, params=replace(self.params, **kw))
        validate(sc)
        return sc


def _point(v) -> tuple[float, float]:
    return float(v[0]), float(v[1])


def from_dict(doc: dict) -> Scenario:
    """Build and validate a Scenario from a parsed JSON document."""
    v = jsonschema.Draft202012Validator(schema())
    e = jsonschema.exceptions.best_match(v.iter_errors(doc))
    if e is not None:
        path = ".".join(str(p) if isinstance(p, str) else f"[{p}]" for p in e.absolute_path).replace(".[", "[")
        raise ScenarioError(e.message, path)
    doc = copy.deepcopy(doc)

    statics = []
    for i, s in enumerate(doc.get("static_obstacles", [])):
        where = f"static_obstacles[{i}]"
        if "polygon" in s:
            ring = np.asarray(s["polygon"], dtype=float)
            try:
                Footprint.from_polygon(ring)
            except GeometryError as e:
                raise ScenarioError(str(e), where + ".polygon") from e
            if len(ring) > 3 and np.array_equal(ring[0], ring[-1]):
                ring = ring[:-1]
            area2 = np.sum(ring[:, 0] * np.roll(ring[:, 1], -1) - np.roll(ring[:, 0], -1) * ring[:, 1])
            verts = ring if area2 > 0 else ring[::-1]
        else:
            fp, c = build_footprint(s["footprint"], where + ".footprint")
            verts = fp.points + c + np.asarray(s["position"], dtype=float)
        statics.append(StaticObstacle(s.get("id", f"static{i}"), tuple(map(_point, verts)), s))

    objects = []
    for i, o in enumerate(doc.get("objects", [])):
        where = f"objects[{i}]"
        fp, c = build_footprint(o["footprint"], where + ".footprint")
        pos = np.asarray(o["position"], dtype=float) + c
        m = o["motion"]
        if m["type"] == "stochastic":
            motion = StochasticMotion(float(m["speed"]), float(m["direction"]), float(m["sigma_v"]), float(m["sigma_d"]))
        elif "steps" in m:
            steps = []
            for st in m["steps"]:
                steps.extend([(float(st["speed"]), float(st["direction"]))] * st.get("repeat", 1))
            motion = ScriptedMotion(tuple(steps), m.get("loop", False))
        else:
            motion = ScriptedMotion(compile_waypoints(pos, m["waypoints"], m["speed"], m.get("loop", False)),
                                    m.get("loop", False))
        objects.append(ObjectSpec(o["id"], fp, _point(pos), motion, o))

    r = doc["robot"]
    rfp = None
    if r.get("footprint") is not None:
        rfp, _ = build_footprint(r["footprint"], "robot.footprint")
    robot = RobotSpec(_point(r["start"]), _point(r["goal"]), float(r["v_max"]), rfp, r)

    pdoc = doc.get("parameters", {})
    params = Parameters(**{k: pdoc[k] for k in pdoc})
    sc = Scenario(
        bounds=tuple(float(b) for b in doc["environment"]["bounds"]),
        robot=robot,
        static=tuple(statics),
        objects=tuple(objects),
        params=params,
        name=doc.get("name", ""),
        description=doc.get("description", ""),
    )
    validate(sc)
    return sc


def validate(sc: Scenario) -> None:
    """Semantic checks the schema cannot express."""
    xmin, ymin, xmax, ymax = sc.bounds
    if not (xmin < xmax and ymin < ymax):
        raise ScenarioError("bounds must satisfy xmin < xmax and ymin < ymax", "environment.bounds")
    p = sc.params
    if not p.dt > 0:
        raise ScenarioError("must be > 0", "parameters.dt")
    if p.predictor not in PREDICTORS:
        raise ScenarioError(f"unknown predictor {p.predictor!r}", "parameters.predictor")
    for i, o in enumerate(sc.objects):
        if o.stochastic:
            for name in ("sigma_v", "sigma_d"):
                if not getattr(o.motion, name) > 0:
                    raise ScenarioError("must be > 0 for a stochastic object", f"objects[{i}].motion.{name}")
    ids = [o.id for o in sc.objects]
    if len(set(ids)) != len(ids):
        raise ScenarioError("object ids must be unique", "objects")

    walls = sc.static_region()
    fp = sc.robot.footprint
    for name in ("start", "goal"):
        pt = getattr(sc.robot, name)
        where = f"robot.{name}"
        if not (xmin <= pt[0] <= xmax and ymin <= pt[1] <= ymax):
            raise ScenarioError("outside the environment", where)
        if fp is None:
            inside = walls.contains_point(pt)
        else:
            inside = walls.overlaps_interior(fp.polygon(pt))
        if inside:
            raise ScenarioError("inside a static obstacle", where)


def load_scenario(source) -> Scenario:
    """Load a scenario from a path, a JSON string or an already parsed dict."""
    if isinstance(source, dict):
        return from_dict(source)
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text()
        except OSError as e:
            raise ScenarioError(f"cannot read scenario: {e}") from e
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(e.msg, line=e.lineno) from e
    if not isinstance(doc, dict):
        raise ScenarioError("top level must be an object")
    return from_dict(doc)


def to_dict(sc: Scenario) -> dict[str, Any]:
    """JSON-ready document; loading it again yields an equal Scenario."""
    doc: dict[str, Any] = {}
    if sc.name:
        doc["name"] = sc.name
    if sc.description:
        doc["description"] = sc.description
    doc["environment"] = {"bounds": list(sc.bounds)}
    if sc.static:
        doc["static_obstacles"] = [{"id": s.id, "polygon": [list(v) for v in s.vertices]} for s in sc.static]
    if sc.objects:
        objs = []
        for o in sc.objects:
            if o.stochastic:
                m = {"type": "stochastic", **asdict(o.motion)}
            else:
                m = {
                    "type": "scripted",
                    "steps": [{"speed": s, "direction": d} for s, d in o.motion.steps],
                    "loop": o.motion.loop,
                }
            objs.append({
                "id": o.id,
                "footprint": {"polygon": o.footprint.points.tolist()},
                "position": list(o.position),
                "motion": m,
            })
        doc["objects"] = objs
    r = sc.robot
    doc["robot"] = {
        "start": list(r.start),
        "goal": list(r.goal),
        "v_max": r.v_max,
        "footprint": None if r.footprint is None else {"polygon": r.footprint.points.tolist()},
    }
    doc["parameters"] = asdict(sc.params)
    return doc


def dumps(sc: Scenario) -> str:
    return json.dumps(to_dict(sc), indent=2, sort_keys=True)
