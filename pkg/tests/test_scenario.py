import json
import math
from pathlib import Path

import numpy as np
import pytest

from zoneplan.sim.scenario import (
    ScenarioError,
    ScriptedMotion,
    compile_waypoints,
    dumps,
    load_scenario,
    schema,
    to_dict,
)

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

MINIMAL = {"environment": {"bounds": [0, 0, 10, 10]}, "robot": {"start": [1, 1], "goal": [9, 9], "v_max": 1.0}}


def doc(**over):
    d = json.loads(json.dumps(MINIMAL))
    for k, v in over.items():
        d[k] = v
    return d


def test_minimal():
    sc = load_scenario(MINIMAL)
    assert sc.objects == () and sc.static == ()
    assert sc.params.dt == 1.0 and sc.params.confidence == 2.0
    assert sc.grid_cell == 0.25 and math.isinf(sc.sensing_radius)


@pytest.mark.parametrize("path", sorted(SCENARIOS.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_round_trip(path):
    sc = load_scenario(path)
    again = load_scenario(dumps(sc))
    assert again == sc
    assert dumps(again) == dumps(sc)


def test_goal_inside_wall():
    d = doc(static_obstacles=[{"polygon": [[8, 8], [10, 8], [10, 10], [8, 10]]}])
    with pytest.raises(ScenarioError) as e:
        load_scenario(d)
    assert e.value.field == "robot.goal"


def test_start_outside_environment():
    d = doc(robot={"start": [-1, 1], "goal": [9, 9], "v_max": 1.0})
    with pytest.raises(ScenarioError) as e:
        load_scenario(d)
    assert e.value.field == "robot.start"


def test_footprint_robot_overlapping_wall():
    d = doc(static_obstacles=[{"polygon": [[1.2, 0], [2, 0], [2, 2], [1.2, 2]]}],
            robot={"start": [1, 1], "goal": [9, 9], "v_max": 1.0, "footprint": {"disc": {"radius": 0.5}}})
    with pytest.raises(ScenarioError, match="robot.start"):
        load_scenario(d)


@pytest.mark.parametrize("sigma", ["sigma_v", "sigma_d"])
def test_nonpositive_sigma(sigma):
    m = {"type": "stochastic", "speed": 1.0, "direction": 0.0, "sigma_v": 0.1, "sigma_d": 0.1}
    m[sigma] = 0.0
    d = doc(objects=[{"id": "a", "footprint": {"rect": {"width": 1, "height": 1}}, "position": [5, 5], "motion": m}])
    with pytest.raises(ScenarioError) as e:
        load_scenario(d)
    assert e.value.field.endswith(sigma)


def test_nonpositive_dt():
    with pytest.raises(ScenarioError) as e:
        load_scenario(doc(parameters={"dt": 0}))
    assert "parameters" in e.value.field and "dt" in e.value.field


def test_schema_violation_names_field():
    with pytest.raises(ScenarioError) as e:
        load_scenario(doc(robot={"start": [1, 1], "goal": [9, 9], "v_max": "fast"}))
    assert e.value.field == "robot.v_max"


def test_unknown_key_rejected():
    with pytest.raises(ScenarioError):
        load_scenario(doc(extra=1))


def test_duplicate_ids():
    o = {"id": "a", "footprint": {"rect": {"width": 1, "height": 1}}, "position": [5, 5],
         "motion": {"type": "scripted", "steps": []}}
    with pytest.raises(ScenarioError, match="unique"):
        load_scenario(doc(objects=[o, dict(o, position=[3, 3])]))


def test_json_syntax_error_has_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "environment": {\n    "bounds": [0, 0, 1, 1],\n  }\n}\n')
    with pytest.raises(ScenarioError) as e:
        load_scenario(p)
    assert e.value.line == 4


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(tmp_path / "nope.json")


def test_polygon_object_centroid():
    o = {"id": "a", "footprint": {"polygon": [[0, 0], [2, 0], [2, 2], [0, 2]]}, "position": [4, 4],
         "motion": {"type": "scripted", "steps": [{"speed": 1, "direction": 0, "repeat": 3}]}}
    sc = load_scenario(doc(objects=[o]))
    assert sc.objects[0].position == (5.0, 5.0)
    assert sc.objects[0].motion.steps == ((1.0, 0.0),) * 3


def test_waypoints_compile_exactly():
    steps = compile_waypoints((0, 0), [(2.5, 0), (2.5, 1)], 1.0)
    pos = np.zeros(2)
    for v, d in steps:
        pos = pos + v * np.array([math.cos(d), math.sin(d)])
    assert np.allclose(pos, (2.5, 1.0), atol=1e-12)
    assert [round(v, 12) for v, _ in steps] == [1.0, 1.0, 0.5, 1.0]


def test_script_after_end_rests():
    m = ScriptedMotion(((1.0, 0.5), (2.0, 1.0)))
    assert m.at(1) == (2.0, 1.0) and m.at(5) == (0.0, 1.0)
    loop = ScriptedMotion(((1.0, 0.5), (2.0, 1.0)), loop=True)
    assert loop.at(5) == (2.0, 1.0)


def test_with_params_validates():
    sc = load_scenario(MINIMAL)
    assert sc.with_params(max_steps=7, seed=None).params.max_steps == 7
    with pytest.raises(ScenarioError):
        sc.with_params(predictor="oracle")


def test_schema_is_packaged():
    s = schema()
    assert s["type"] == "object" and "robot" in s["required"]
    assert to_dict(load_scenario(MINIMAL))["robot"]["footprint"] is None
