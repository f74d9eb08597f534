"""
Run traces: one record per step plus a terminal record, stored as JSON.

Robot positions and decided velocities are kept at full float precision so
a trace can be replayed exactly; safe-zone outlines are rounded to six
decimals to keep files small. Serialization sorts keys, so equal runs give
equal bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from ..geometry import Region
from ..planner import PlanStep

TRACE_FORMAT = "zoneplan-trace"
TRACE_VERSION = 1
OUTLINE_DECIMALS = 6


@lru_cache(maxsize=None)
def schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("trace.schema.json").read_text())


def _finite(x):
    return None if x is None or not math.isfinite(x) else float(x)


def region_outline(r: Region) -> list[dict]:
    out = []
    for ext, holes in r.rings():
        out.append({
            "exterior": np.round(ext, OUTLINE_DECIMALS).tolist(),
            "holes": [np.round(h, OUTLINE_DECIMALS).tolist() for h in holes],
        })
    return out


def plan_record(p: PlanStep | None) -> dict | None:
    if p is None:
        return None
    return {
        "mode": p.mode,
        "target": [float(p.target.x), float(p.target.y)],
        "speed": float(p.speed),
        "direction": float(p.direction),
        "path_length": _finite(p.path_length),
    }


@dataclass
class Trace:
    scenario: dict
    seed: int
    steps: list = field(default_factory=list)
    terminal: dict | None = None

    def add_step(self, t: int, robot, objects, zones, plan, collisions, known_static) -> None:
        if t != len(self.steps):
            raise ValueError(f"step {t} out of order (expected {len(self.steps)})")
        if self.terminal is not None:
            raise ValueError("trace already terminated")
        self.steps.append({
            "t": t,
            "robot": [float(robot[0]), float(robot[1])],
            "objects": objects,
            "zones": zones,
            "plan": plan_record(plan),
            "collisions": collisions,
            "known_static": known_static,
        })

    def finish(self, **terminal) -> None:
        if self.terminal is not None:
            raise ValueError("trace already terminated")
        self.terminal = terminal

    # -- queries -----------------------------------------------------------

    @property
    def outcome(self) -> str | None:
        return None if self.terminal is None else self.terminal["outcome"]

    @property
    def objective(self) -> float | None:
        return None if self.terminal is None else self.terminal["objective"]

    def positions(self) -> np.ndarray:
        return np.array([s["robot"] for s in self.steps], dtype=float)

    def plans(self) -> list[dict | None]:
        return [s["plan"] for s in self.steps]

    def collisions(self) -> list[tuple[int, str, float]]:
        return [(s["t"], c["id"], c["fraction"]) for s in self.steps for c in s["collisions"]]

    def replay(self) -> np.ndarray:
        """Robot positions rebuilt from the start point and the decided velocities."""
        dt = self.scenario.get("parameters", {}).get("dt", 1.0)
        pos = [np.asarray(self.steps[0]["robot"], dtype=float)]
        for s in self.steps[:-1]:
            p = s["plan"]
            step = p["speed"] * dt * np.array([math.cos(p["direction"]), math.sin(p["direction"])])
            pos.append(pos[-1] + step)
        return np.array(pos)

    # -- persistence -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": TRACE_FORMAT,
            "version": TRACE_VERSION,
            "seed": self.seed,
            "scenario": self.scenario,
            "steps": self.steps,
            "terminal": self.terminal,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), allow_nan=False)

    def save(self, path) -> Path:
        path = Path(path)
        path.write_text(self.dumps())
        return path

    @classmethod
    def from_dict(cls, doc: dict) -> "Trace":
        if doc.get("format") != TRACE_FORMAT:
            raise ValueError("not a zoneplan trace")
        if doc.get("version") != TRACE_VERSION:
            raise ValueError(f"unsupported trace version {doc.get('version')}")
        err = jsonschema.exceptions.best_match(jsonschema.Draft202012Validator(schema()).iter_errors(doc))
        if err is not None:
            where = "/".join(str(p) for p in err.absolute_path) or "<root>"
            raise ValueError(f"{where}: {err.message}")
        steps = doc["steps"]
        for i, s in enumerate(steps):
            if s["t"] != i:
                raise ValueError(f"trace step indices not contiguous at position {i}")
        return cls(doc["scenario"], doc["seed"], steps, doc["terminal"])

    @classmethod
    def load(cls, path) -> "Trace":
        return cls.from_dict(json.loads(Path(path).read_text()))
