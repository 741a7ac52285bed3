from typing import Any, Dict, List, Literal, Optional

import numpy as np

from pydantic import BaseModel, Field, ValidationError, model_validator

from .conf import conf
from .core import Curve, RegCurve, StepCurve, make_curve
from .errors import PathAtlasError, ScenarioError
from .lifts import FieldRep
from .objects import CurveMode
from .pathspace import PathChartSystem, PathRep


class TopModel(BaseModel):
    breaks: List[float]
    values: List[List[float]]


class CurveModel(BaseModel):
    """
    Every curve: `top` is the stored step curve (the top derivative in regulated mode, its
    derivative in C^k mode) and `jet` the values at the left endpoint of the levels below it
    """

    domain: List[float] = Field(min_length=2, max_length=2)
    k: int = Field(ge=0)
    jet: List[List[float]] = []
    top: TopModel
    mode: CurveMode = CurveMode.REGULATED

    @model_validator(mode="after")
    def _depth(self) -> "CurveModel":
        depth = self.k if self.mode == CurveMode.REGULATED else self.k + 1

        if len(self.jet) != depth:
            raise ValueError(f"A curve of order {self.k} in {self.mode} mode needs {depth} jet rows, got {len(self.jet)}")

        if self.top.breaks and (self.top.breaks[0], self.top.breaks[-1]) != tuple(self.domain):
            raise ValueError(f"Breaks {self.top.breaks} do not span the domain {self.domain}")

        return self


class SystemModel(BaseModel):
    tau: List[float]
    charts: List[str]


class RepModel(BaseModel):
    x: List[float]
    pieces: List[CurveModel]
    fibers: Optional[List[CurveModel]] = None


class FieldModel(BaseModel):
    phi: CurveModel
    theta: Optional[CurveModel] = None


class BuiltinModel(BaseModel):
    name: str
    params: Dict[str, Any] = {}


class ScenarioModel(BaseModel):
    operation: Literal["transition", "transport", "margin", "reconstruct"]
    space: BuiltinModel
    system: SystemModel
    rep: RepModel
    target: Optional[SystemModel] = None
    tol: float = Field(default=1e-7, gt=0)
    seed: int = 0
    trials: int = Field(default_factory=lambda: conf.sampling.margin_trials, gt=0)


# Converters
def curve_to_json(c: Curve) -> dict:
    base = c if isinstance(c, StepCurve) else c.base

    return CurveModel(
        domain=[c.domain.lo, c.domain.hi],
        k=c.order,
        jet=[] if isinstance(c, StepCurve) else c.jet.tolist(),
        top=TopModel(breaks=base.breaks.tolist(), values=base.values.tolist()),
        mode=CurveMode.REGULATED if isinstance(c, StepCurve) else c.mode
    ).model_dump(mode="json")


def _curve(model: CurveModel) -> Curve:
    try:
        base = StepCurve(model.top.breaks, np.array(model.top.values, dtype=float))
        return make_curve(np.array(model.jet, dtype=float) if model.jet else [], base, model.mode)

    except PathAtlasError as e:
        raise ScenarioError(f"Invalid curve payload: {e}")


def curve_from_json(data: dict | CurveModel) -> Curve:
    try:
        model = data if isinstance(data, CurveModel) else CurveModel.model_validate(data)

    except ValidationError as e:
        raise ScenarioError(f"Invalid curve payload: {e}")

    return _curve(model)


def _step(model: CurveModel) -> StepCurve:
    c = _curve(model)

    if not isinstance(c, StepCurve):
        raise ScenarioError(f"Expected a step curve (k = 0), got order {model.k}")

    return c


def system_to_json(system: PathChartSystem) -> dict:
    return SystemModel(tau=list(system.knots), charts=list(system.charts)).model_dump()


def system_from_json(data: dict | SystemModel) -> PathChartSystem:
    try:
        model = data if isinstance(data, SystemModel) else SystemModel.model_validate(data)
        return PathChartSystem.make(model.tau, model.charts)

    except (ValidationError, PathAtlasError) as e:
        raise ScenarioError(f"Invalid chart system: {e}")


def rep_to_json(rep: PathRep) -> dict:
    data = {"x": rep.x.tolist(), "pieces": [curve_to_json(y) for y in rep.pieces]}

    if rep.is_lift:
        data["fibers"] = [curve_to_json(u) for u in rep.fibers]

    return data


def rep_from_json(data: dict | RepModel) -> PathRep:
    try:
        model = data if isinstance(data, RepModel) else RepModel.model_validate(data)
        fibers = tuple(_step(u) for u in model.fibers) if model.fibers is not None else None
        return PathRep(np.array(model.x, dtype=float), tuple(_step(y) for y in model.pieces), fibers)

    except ScenarioError:
        raise

    except (ValidationError, PathAtlasError) as e:
        raise ScenarioError(f"Invalid rep: {e}")


def field_to_json(field: FieldRep) -> dict:
    data = {"phi": curve_to_json(field.phi)}

    if field.theta is not None:
        data["theta"] = curve_to_json(field.theta)

    return data


def field_from_json(data: dict) -> FieldRep:
    try:
        model = FieldModel.model_validate(data)

    except ValidationError as e:
        raise ScenarioError(f"Invalid field payload: {e}")

    theta = _curve(model.theta) if model.theta is not None else None
    return FieldRep(_curve(model.phi), theta)


def scenario_from_json(data: dict) -> ScenarioModel:
    try:
        return ScenarioModel.model_validate(data)

    except ValidationError as e:
        raise ScenarioError(f"Invalid scenario: {e.error_count()} errors\n{e}")


def scenario_to_json(scenario: ScenarioModel) -> dict:
    return scenario.model_dump(mode="json", exclude_none=True)
