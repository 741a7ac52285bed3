import math

from typing import Callable, Optional, Sequence

import numpy as np

from ..conf import conf
from ..errors import BudgetError, DimensionError, DomainError, OrderError
from ..log import Logger
from .interval import Interval
from .regcurve import Curve, RegCurve, make_curve
from .step import StepCurve

logger = Logger.CORE


def evaluate(c: Curve, t, deriv_order: int = 0) -> np.ndarray:
    """
    The `deriv_order`-th derivative of c at t. The top derivative of a regulated curve
    follows the cadlag convention; lower derivatives are continuous
    """

    if isinstance(c, StepCurve):
        if deriv_order != 0:
            raise OrderError(f"Derivative order {deriv_order} requested from a step curve")

        return c.evaluate(t)

    return c.evaluate(t, deriv_order)


def norm(c: Curve, order: Optional[int] = None) -> float:
    """
    |||c|||^order = max over l <= order of sup |c^(l)|, max-coordinate norm on R^d
    """

    order = c.order if order is None else order

    if order < 0 or order > c.order:
        raise OrderError(f"Norm of order {order} requested from a curve of order {c.order}")

    if isinstance(c, StepCurve):
        return c.sup_norm()

    return max(c.level_sup(level) for level in range(order + 1))


def primitive(c: Curve, x0) -> RegCurve:
    """
    The primitive of c starting at x0; its order is one more than c's
    """

    x0 = np.array(x0, dtype=float).reshape(-1)

    if x0.shape[0] != c.dim:
        raise DimensionError(f"Initial value of dimension {x0.shape[0]} for a curve of dimension {c.dim}")

    if isinstance(c, StepCurve):
        return RegCurve(x0[None, :], c)

    return RegCurve(np.vstack([x0[None, :], c.jet]), c.base, c.mode)


def derivative_split(c: Curve) -> tuple[np.ndarray, Curve]:
    """
    c -> (c(t0), c'); the exact inverse of `primitive`
    """

    if isinstance(c, StepCurve) or c.order < 1:
        raise OrderError("derivative_split needs a curve of order >= 1")

    return c.jet[0], make_curve(c.jet[1:], c.base, c.mode)


def integrate(c: Curve, a: Optional[float] = None, b: Optional[float] = None) -> np.ndarray:
    """
    Integral of c over [a, b]
    """

    if isinstance(c, StepCurve):
        return c.integral(a, b)

    p = primitive(c, np.zeros(c.dim))
    a = c.domain.lo if a is None else a
    b = c.domain.hi if b is None else b
    return p.evaluate(b) - p.evaluate(a)


def concat(c1: StepCurve, c2: StepCurve) -> StepCurve:
    """
    Concatenation on adjacent domains [a, b] and [b, c]; the junction takes c2's value
    """

    return concat_many([c1, c2])


def concat_many(curves: Sequence[StepCurve]) -> StepCurve:
    if not curves:
        raise DomainError("Nothing to concatenate")

    for c in curves:
        if not isinstance(c, StepCurve):
            raise OrderError("Only step curves can be concatenated")

    dim = curves[0].dim

    for left, right in zip(curves, curves[1:]):
        if left.breaks[-1] != right.breaks[0]:
            raise DomainError(f"Domains are not adjacent: {left.domain} and {right.domain}")

        if right.dim != dim:
            raise DimensionError(f"Dimensions differ: {dim} and {right.dim}")

    breaks = np.concatenate([curves[0].breaks] + [c.breaks[1:] for c in curves[1:]])
    values = np.concatenate([c.values for c in curves])
    return StepCurve(breaks, values)


def restrict(c: Curve, J: Interval) -> Curve:
    """
    The strong regulated restriction to J: equal to c on [s0, s1), left limit at s1
    """

    dom = c.domain

    if not dom.contains_interval(J):
        raise DomainError(f"{J} is not contained in the domain {dom}")

    if J == dom:
        return c

    if isinstance(c, StepCurve):
        breaks = c.breaks
        i0 = int(np.searchsorted(breaks, J.lo, side="right")) - 1
        i1 = int(np.searchsorted(breaks, J.hi, side="left"))
        inner = breaks[i0 + 1:i1]
        return StepCurve(np.concatenate([[J.lo], inner, [J.hi]]), c.values[i0:i1])

    jet = np.stack([c.evaluate(J.lo, level) for level in range(c.depth)])
    return RegCurve(jet, restrict(c.base, J), c.mode)


def linear_push(A, c: Curve) -> Curve:
    """
    t -> A c(t) for a d' x d matrix A
    """

    A = np.atleast_2d(np.asarray(A, dtype=float))

    if A.shape[1] != c.dim:
        raise DimensionError(f"Matrix of shape {A.shape} cannot act on dimension {c.dim}")

    if isinstance(c, StepCurve):
        return StepCurve(c.breaks, c.values @ A.T)

    return RegCurve(c.jet @ A.T, StepCurve(c.base.breaks, c.base.values @ A.T), c.mode)


def reparametrize_affine(c: Curve, target: Interval) -> Curve:
    """
    The pullback of c by the increasing affine map h: target -> domain
    """

    dom = c.domain

    if target == dom:
        return c

    slope = dom.length / target.length
    breaks = target.lo + (c.base.breaks - dom.lo) / slope if isinstance(c, RegCurve) else \
        target.lo + (c.breaks - dom.lo) / slope
    breaks[0], breaks[-1] = target.lo, target.hi

    if isinstance(c, StepCurve):
        return StepCurve(breaks, c.values)

    scale = slope ** np.arange(c.depth)
    base = StepCurve(breaks, c.base.values * slope ** c.depth)
    return RegCurve(c.jet * scale[:, None], base, c.mode)


def lipschitz_bound(c: Curve) -> float:
    """
    sup |c'| for curves of positive depth, 0 for step curves (they move only by jumps)
    """

    if isinstance(c, StepCurve):
        return 0.0

    return c.level_sup(1)


def image_net_with_times(c: Curve, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Times and points of an eps-net of c(domain). Step curves give their exact finite value set
    (one time per piece); other curves are sampled on a grid of spacing <= eps / L together
    with all their breakpoints
    """

    if not eps > 0:
        raise DomainError(f"Net resolution must be positive, got {eps}")

    if isinstance(c, StepCurve):
        return c.breaks[:-1].copy(), c.values.copy()

    L = lipschitz_bound(c)
    dom = c.domain
    n = int(math.ceil(dom.length * L / eps)) if L > 0 else 1

    if n > conf.numerics.max_cells:
        raise BudgetError(n, conf.numerics.max_cells, "net points")

    times = np.union1d(np.linspace(dom.lo, dom.hi, n + 1), c.base.breaks)
    return times, c.evaluate(times)


def image_net(c: Curve, eps: float) -> np.ndarray:
    """
    A finite eps-net of the image of c
    """

    _, points = image_net_with_times(c, eps)
    return np.unique(points, axis=0)


def _sample(f: Callable, times: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(f(times), dtype=float)

        if values.shape[0] == times.shape[0]:
            return values.reshape(times.shape[0], -1)

    except (TypeError, ValueError):
        pass

    return np.array([np.asarray(f(t), dtype=float).reshape(-1) for t in times])


def step_approximate(
        source: Curve | Callable,
        eps: float,
        domain: Optional[Interval] = None,
        lipschitz: Optional[float] = None
) -> StepCurve:
    """
    A step curve within eps of `source` in sup norm.

    Args:
        source: a step curve (returned as is), a curve of positive order, or a callable t -> R^d
        eps: the sup-norm tolerance
        domain: required for callables
        lipschitz: a Lipschitz bound of the callable; without it the grid is refined dyadically
            until cell oscillations, probed at cell midpoints and right ends, fall below eps
    """

    if not eps > 0:
        raise DomainError(f"Tolerance must be positive, got {eps}")

    if isinstance(source, StepCurve):
        return source

    if isinstance(source, RegCurve):
        domain, lipschitz = source.domain, lipschitz_bound(source)
        f = source.evaluate

    else:
        if domain is None:
            raise DomainError("A domain is needed to approximate a callable")

        f = source

    if lipschitz is not None:
        n = max(1, int(math.ceil(lipschitz * domain.length / eps)))

        if n > conf.numerics.max_cells:
            raise BudgetError(n, conf.numerics.max_cells)

        breaks = np.linspace(domain.lo, domain.hi, n + 1)
        breaks[0], breaks[-1] = domain.lo, domain.hi
        return StepCurve(breaks, _sample(f, breaks[:-1]))

    n = 1

    while n <= conf.numerics.max_cells:
        breaks = np.linspace(domain.lo, domain.hi, n + 1)
        left = _sample(f, breaks[:-1])
        mids = _sample(f, 0.5 * (breaks[:-1] + breaks[1:]))
        right = _sample(f, breaks[1:] - 1e-9 * (breaks[1:] - breaks[:-1]))
        oscillation = max(np.max(np.abs(mids - left)), np.max(np.abs(right - left)))

        if oscillation <= eps / 2:
            logger.debug(f"step_approximate: {n} cells, probed oscillation {oscillation:.3e}")
            return StepCurve(breaks, left)

        n *= 2

    raise BudgetError(n, conf.numerics.max_cells)
