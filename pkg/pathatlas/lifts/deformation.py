from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

from ..atlas import BundleAtlas
from ..conf import conf
from ..core import StepCurve
from ..errors import CoverError, DomainError
from ..log import Logger
from ..pathspace import (
    BundleLift, ManifoldPath, PathRep, TransitionPlan,
    apply_transition, chart_map, lift_chart_map, lift_reconstruct, linearized_reconstruct, reconstruct
)
from .fields import FieldRep
from .trivialization import build_trivialization, represent_section, tangent_trivialization

logger = Logger.LIFTS

Member = ManifoldPath | BundleLift


def _path(member: Member) -> ManifoldPath:
    return member.base if isinstance(member, BundleLift) else member


def _rep(member: Member) -> PathRep:
    return lift_chart_map(member) if isinstance(member, BundleLift) else chart_map(member)


@dataclass(frozen=True)
class Deformation:
    """
    epsilon -> D(epsilon) for |epsilon| <= delta, a path or lift for every epsilon, all in
    the chart system of D(0). The evaluator must be pure
    """

    evaluator: Callable[[float], Member]
    delta: float

    @cached_property
    def base(self) -> Member:
        return self.evaluator(0.0)

    @property
    def system(self):
        return _path(self.base).system

    def __call__(self, eps: float) -> Member:
        if abs(eps) > self.delta:
            raise DomainError(f"Deformation defined for |eps| <= {self.delta}, got {eps}")

        if eps == 0.0:
            return self.base

        member = self.evaluator(eps)

        if _path(member).system != self.system:
            raise CoverError(f"Deformation changes the chart system at eps = {eps}", 0.0)

        return member


def _fiber_coordinate(member: BundleLift) -> StepCurve:
    triv = build_trivialization(member.base, member.bundle)
    return represent_section(triv, list(member.fibers))


def deformation_tangent(D: Deformation, h: Optional[float] = None) -> FieldRep:
    """
    dD/d(eps) at eps = 0 as a field along D(0).

    Central differences of the chart coordinates at +-h and +-h/2, combined by one Richardson
    step (4 D(h/2) - D(h)) / 3. The base part is carried through the tangent map of the
    reconstruction and glued in the tangent trivialization; for lifts the fiber part is the
    same difference of the glued fiber coordinate
    """

    h = conf.numerics.richardson_h if h is None else h

    if not 0 < h <= D.delta:
        raise DomainError(f"Step {h} outside (0, {D.delta}]")

    members = {eps: D(eps) for eps in (-h, -h / 2, h / 2, h)}
    reps = {eps: _rep(member) for eps, member in members.items()}

    coarse = (reps[h] - reps[-h]) * (1.0 / (2 * h))
    fine = (reps[h / 2] - reps[-h / 2]) * (1.0 / h)
    drep = (fine * 4.0 - coarse) * (1.0 / 3.0)

    base = _path(D.base)
    components = linearized_reconstruct(base, drep.base)
    phi = represent_section(tangent_trivialization(base), components)

    if not isinstance(D.base, BundleLift):
        return FieldRep(phi)

    w = {eps: _fiber_coordinate(member) for eps, member in members.items()}
    coarse = (w[h] - w[-h]) * (1.0 / (2 * h))
    fine = (w[h / 2] - w[-h / 2]) * (1.0 / h)

    return FieldRep(phi, (fine * 4.0 - coarse) * (1.0 / 3.0))


def transport_deformation(D: Deformation, plan: TransitionPlan) -> Deformation:
    """
    D presented in the destination system of `plan`; the plan is fixed so the result stays
    smooth in epsilon
    """

    if plan.src != D.system:
        raise CoverError("The plan does not start from the chart system of the deformation", 0.0)

    def evaluator(eps: float) -> Member:
        member = D(eps)
        rep = apply_transition(plan, _rep(member))

        if isinstance(member, BundleLift):
            if not isinstance(plan.space, BundleAtlas):
                raise DomainError("Lifts are transported by plans over a bundle")

            return lift_reconstruct(plan.space, plan.dst, rep)

        return reconstruct(plan.manifold, plan.dst, rep)

    return Deformation(evaluator, D.delta)
