import numpy as np
import pytest

from pathatlas.conf import conf
from pathatlas.core import Interval, RegCurve, StepCurve, primitive
from pathatlas.errors import ScenarioError
from pathatlas.lifts import FieldRep
from pathatlas.pathspace import PathChartSystem, PathRep
from pathatlas.schemas import (
    curve_from_json, curve_to_json, field_from_json, field_to_json, rep_from_json, rep_to_json,
    scenario_from_json, system_from_json, system_to_json
)


def test_curve_layout():
    c = primitive(StepCurve([0.0, 0.5, 1.0], [[1.0], [2.0]]), [3.0])

    assert curve_to_json(c) == {
        "domain": [0.0, 1.0],
        "k": 1,
        "jet": [[3.0]],
        "top": {"breaks": [0.0, 0.5, 1.0], "values": [[1.0], [2.0]]},
        "mode": "regulated",
    }


@pytest.mark.parametrize("curve", [
    StepCurve([0.0, 0.25, 1.0], [[1.0, -1.0], [0.5, 2.0]]),
    RegCurve([[0.0], [1.0]], StepCurve([0.0, 0.5, 1.0], [[2.0], [-2.0]])),
    RegCurve.ck([[0.0]], [0.0, 0.5, 1.0], [0.0, 1.0, 0.0]),
])
def test_curves_survive_json(curve):
    assert curve_from_json(curve_to_json(curve)) == curve


def test_chart_systems_use_tau():
    system = PathChartSystem.make([0.0, 0.5, 1.0], ["N", "S"])

    assert system_to_json(system) == {"tau": [0.0, 0.5, 1.0], "charts": ["N", "S"]}
    assert system_from_json(system_to_json(system)) == system


def test_lift_reps_carry_fibers():
    pieces = (StepCurve.constant(Interval(0.0, 0.5), [1.0]), StepCurve.constant(Interval(0.5, 1.0), [2.0]))
    rep = PathRep([0.5], pieces)
    lift = PathRep([0.5], pieces, (StepCurve.constant(Interval(0.0, 0.5), [1.0]), StepCurve.constant(Interval(0.5, 1.0), [-1.0])))

    assert "fibers" not in rep_to_json(rep)
    assert rep_from_json(rep_to_json(rep)) == rep
    assert rep_from_json(rep_to_json(lift)) == lift


def test_fields_survive_json():
    phi = primitive(StepCurve.constant(Interval.unit(), [1.0, 0.0]), [0.0, 1.0])
    field = FieldRep(phi, StepCurve.constant(Interval.unit(), [2.0]))

    assert "theta" not in field_to_json(FieldRep(phi))
    assert field_from_json(field_to_json(field)) == field


@pytest.mark.parametrize("payload", [
    {"domain": [0.0, 1.0], "k": 1, "jet": [], "top": {"breaks": [0.0, 1.0], "values": [[1.0]]}},
    {"domain": [0.0, 1.0], "k": 0, "top": {"breaks": [0.0, 0.5], "values": [[1.0]]}},
    {"domain": [0.0, 1.0], "k": 0, "top": {"breaks": [0.0, 1.0], "values": [[1.0], [2.0]]}},
    {"domain": [0.0, 1.0], "k": -1, "top": {"breaks": [0.0, 1.0], "values": [[1.0]]}},
])
def test_invalid_curves_are_scenario_errors(payload):
    with pytest.raises(ScenarioError):
        curve_from_json(payload)


def test_reps_need_step_pieces():
    c = primitive(StepCurve.constant(Interval.unit(), [1.0]), [0.0])

    with pytest.raises(ScenarioError):
        rep_from_json({"x": [0.0], "pieces": [curve_to_json(c)]})


def test_invalid_scenarios_are_usage_errors():
    with pytest.raises(ScenarioError) as e:
        scenario_from_json({"operation": "fly", "space": {"name": "torus"}})

    assert e.value.exit_code == 2

    with pytest.raises(ScenarioError):
        system_from_json({"tau": [0.0, 0.5], "charts": ["N"]})


def test_scenario_defaults():
    scenario = scenario_from_json({
        "operation": "margin",
        "space": {"name": "euclidean", "params": {"dim": 1}},
        "system": {"tau": [0.0, 1.0], "charts": ["E"]},
        "rep": {"x": [0.0], "pieces": [curve_to_json(StepCurve.constant(Interval.unit(), [1.0]))]},
    })

    assert scenario.tol == 1e-7
    assert scenario.trials == conf.sampling.margin_trials == 1000
    assert scenario.target is None
    assert np.array_equal(rep_from_json(scenario.rep).x, [0.0])
