from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..core import Curve, RegCurve, StepCurve, concat_many, linear_push, norm, restrict
from ..errors import DimensionError, OrderError
from ..helpers import sup_norm
from ..log import Logger
from .trivialization import PathTrivialization, represent_section, section_pieces

logger = Logger.LIFTS


@dataclass(frozen=True)
class FieldRep:
    """
    A vector field along a path (or lift) in glued global coordinates: `phi` is the
    order-1 tangent part in R^m, `theta` the fiber part in R^d for fields along lifts
    """

    phi: RegCurve
    theta: Optional[Curve] = None

    def __post_init__(self) -> None:
        if not isinstance(self.phi, RegCurve) or self.phi.order != 1:
            raise OrderError("The tangent part of a field is an order-1 curve")

        if self.theta is not None and self.theta.domain != self.phi.domain:
            raise DimensionError(f"Field parts on {self.phi.domain} and {self.theta.domain}")

    @property
    def base(self) -> "FieldRep":
        return FieldRep(self.phi)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldRep):
            return NotImplemented

        return self.phi == other.phi and self.theta == other.theta

    __hash__ = None


def represent_field(
        tangent: PathTrivialization,
        components: Sequence[RegCurve],
        fiber: Optional[PathTrivialization] = None,
        fiber_components: Optional[Sequence[Curve]] = None
) -> FieldRep:
    """
    T_gamma (or T_c with the fiber data): per-piece chart components glued by the tangent
    frames, and the fiber components glued by the bundle frames
    """

    phi = represent_section(tangent, list(components))

    if fiber_components is None:
        return FieldRep(phi)

    if fiber is None:
        raise DimensionError("Fiber components need the bundle trivialization")

    return FieldRep(phi, represent_section(fiber, list(fiber_components)))


def field_components(
        tangent: PathTrivialization,
        field: FieldRep,
        fiber: Optional[PathTrivialization] = None
) -> tuple[list[Curve], Optional[list[Curve]]]:
    """
    The inverse of `represent_field`
    """

    base = section_pieces(tangent, field.phi)

    if field.theta is None:
        return base, None

    if fiber is None:
        raise DimensionError("A field with a fiber part needs the bundle trivialization")

    return base, section_pieces(fiber, field.theta)


def covariant_derivative(triv: PathTrivialization, section: Sequence[RegCurve] | RegCurve) -> StepCurve:
    """
    nabla_gamma of an order-1 section, in piece coordinates: C_i^-1 w' on piece i, where
    w is the glued global coordinate. Accepts the fiber pieces or w itself
    """

    w = section if isinstance(section, RegCurve) else represent_section(triv, list(section))

    if not isinstance(w, RegCurve) or w.order != 1:
        raise OrderError("The covariant derivative needs an order-1 section")

    inverses = np.linalg.inv(triv.frames)
    return concat_many([
        linear_push(Ci, restrict(w.base, piece))
        for Ci, piece in zip(inverses, triv.path.system.pieces())
    ])


@dataclass(frozen=True)
class NormEquivalence:
    """
    N1 = |X(0)| + |nabla X|_inf and N2 = |||w|||^1 of one section, with the certified
    constant K = (1 + len) kappa such that N1 / K <= N2 <= K N1
    """

    n1: float
    n2: float
    initial: float
    derivative: float
    kappa: float
    length: float

    @property
    def constant(self) -> float:
        return (1.0 + self.length) * self.kappa

    @property
    def ratio(self) -> float:
        if self.n1 == 0.0:
            return 1.0 if self.n2 == 0.0 else np.inf

        return self.n2 / self.n1

    @property
    def holds(self) -> bool:
        K = self.constant
        return self.n2 <= K * self.n1 and self.n1 <= K * self.n2


def norm_equivalence(triv: PathTrivialization, section: Sequence[RegCurve] | RegCurve) -> NormEquivalence:
    w = section if isinstance(section, RegCurve) else represent_section(triv, list(section))
    nabla = covariant_derivative(triv, w)

    initial = sup_norm(w.jet[0])
    derivative = nabla.sup_norm()

    return NormEquivalence(
        n1=initial + derivative,
        n2=norm(w, 1),
        initial=initial,
        derivative=derivative,
        kappa=triv.kappa(),
        length=w.domain.length
    )
