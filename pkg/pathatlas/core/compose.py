"""
Composition with smooth maps, change of variables and monotone reparametrization.

`compose_smooth` is the one place where a curve leaves the step-dense model: the top
derivative of f o c is re-projected to a step curve on a grid fine enough for a sampled
Lipschitz certificate to guarantee the requested tolerance. The grid can be computed
once (`compose_grid`) and reused, which makes the composition a smooth function of the
curve's data for a fixed plan.
"""

import math

from typing import Callable, Optional, Protocol

import numpy as np

from scipy import integrate as sp_integrate
from scipy import optimize as sp_optimize

from ..conf import conf
from ..errors import BudgetError, CertificateError, DomainError, OrderError
from ..log import Logger
from ..objects import CurveMode
from .calculus import image_net_with_times
from .regcurve import Curve, RegCurve, SmoothScalarRepar
from .step import StepCurve, regularize

logger = Logger.CORE


class Differentiable(Protocol):
    dim_in: int
    dim_out: int

    def __call__(self, x: np.ndarray) -> np.ndarray: ...
    def jacobian(self, x: np.ndarray) -> np.ndarray: ...
    def second(self, x: np.ndarray) -> np.ndarray: ...
    def margin(self, x: np.ndarray) -> np.ndarray: ...


def check_image(f: Differentiable, c: Curve) -> None:
    eps = conf.numerics.net_eps
    times, points = image_net_with_times(c, eps)
    margins = np.asarray(f.margin(points))
    slack = 0.0 if isinstance(c, StepCurve) else eps

    bad = np.flatnonzero(margins <= slack)

    if bad.size:
        i = bad[0]
        raise DomainError(
            f"Image of the curve leaves the map's domain near t={times[i]:.12g} "
            f"(point {points[i].tolist()}, margin {margins[i]:.3e})"
        )


def _top_target(f: Differentiable, c: RegCurve, t: np.ndarray, pieces: np.ndarray) -> np.ndarray:
    """
    The top derivative of f o c at times t, evaluated on the given base pieces
    """

    x = c.evaluate(t, 0, piece=pieces)
    v = c.evaluate(t, 1, piece=pieces) if c.depth > 1 else c.base.values[pieces]
    J = f.jacobian(x)

    if c.order == 1:
        return np.einsum("...ij,...j->...i", J, v)

    a = c.base.values[pieces]
    H = f.second(x)
    return np.einsum("...ijk,...j,...k->...i", H, v, v) + np.einsum("...ij,...j->...i", J, a)


def _top_slope(f: Differentiable, c: RegCurve, t: np.ndarray, pieces: np.ndarray) -> np.ndarray:
    """
    d/dt of the top derivative of f o c for an order-1 curve: f''(c)[c', c']
    """

    x = c.evaluate(t, 0, piece=pieces)
    v = c.base.values[pieces]
    return np.einsum("...ijk,...j,...k->...i", f.second(x), v, v)


def refinement_grid(
        breaks: np.ndarray,
        target: Callable[[np.ndarray, np.ndarray], np.ndarray],
        tol: float,
        slope: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
) -> np.ndarray:
    """
    Breakpoints refining `breaks` on which the midpoint step approximation of `target` is
    within `tol`. `target(t, pieces)` evaluates on the given pieces of `breaks`, so values at
    a piece's right end are one-sided.

    Each piece of length h gets n = max(1, ceil(L h / (2 tol))) uniform cells. With `slope`
    (the time derivative of `target`) L is the largest probed slope plus its largest change
    between neighbouring probes; without it L is the largest difference quotient over
    `lipschitz-probes` probes times `safety-factor`.
    """

    if not tol > 0:
        raise DomainError(f"Tolerance must be positive, got {tol}")

    probes = conf.numerics.lipschitz_probes
    h = np.diff(breaks)
    n_pieces = h.shape[0]

    u = np.linspace(0.0, 1.0, probes)
    times = breaks[:-1, None] + u[None, :] * h[:, None]
    pieces = np.repeat(np.arange(n_pieces)[:, None], probes, axis=1)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if slope is not None:
            s = np.asarray(slope(times.reshape(-1), pieces.reshape(-1))).reshape(n_pieces, probes, -1)
            s = np.max(np.abs(s), axis=2)
            L = np.max(s, axis=1) + np.max(np.abs(np.diff(s, axis=1)), axis=1)
        else:
            values = np.asarray(target(times.reshape(-1), pieces.reshape(-1))).reshape(n_pieces, probes, -1)
            dv = np.max(np.max(np.abs(np.diff(values, axis=1)), axis=2), axis=1)
            L = np.where(dv > 0, conf.numerics.safety_factor * dv * (probes - 1) / h, 0.0)

        cells = np.where(h > 0, L * h / (2.0 * tol), 0.0)

    if not np.all(np.isfinite(cells)):
        raise BudgetError(math.inf, conf.numerics.max_cells)

    total_estimate = float(np.sum(np.maximum(1.0, np.ceil(cells))))

    if total_estimate > conf.numerics.max_cells:
        raise BudgetError(int(total_estimate), conf.numerics.max_cells)

    counts = np.maximum(1, np.ceil(cells)).astype(np.int64)
    total = int(counts.sum())

    logger.debug(f"refinement_grid: {n_pieces} pieces -> {total} cells (tol {tol:.1e})")

    starts = np.repeat(breaks[:-1], counts)
    widths = np.repeat(h / counts, counts)
    offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    grid = np.append(starts + offsets * widths, breaks[-1])
    grid[np.cumsum(counts)[:-1]] = breaks[1:-1]
    return grid


def compose_grid(f: Differentiable, c: RegCurve, tol: float) -> np.ndarray:
    """
    The re-projection grid of (f o c)^(k), refining c's base
    """

    slope = (lambda t, pieces: _top_slope(f, c, t, pieces)) if c.order == 1 else None
    return refinement_grid(c.base.breaks, lambda t, pieces: _top_target(f, c, t, pieces), tol, slope)


def compose_smooth(f: Differentiable, c: Curve, tol: float, grid: Optional[np.ndarray] = None) -> Curve:
    """
    f o c with the same order as c.

    Step curves are mapped exactly, value by value. For orders 1 and 2 the jet is mapped
    exactly by the chain rule and the top derivative is re-projected to a step curve within
    `tol` in sup norm; pass `grid` (from `compose_grid`) to reuse a fixed plan.
    """

    if c.dim != f.dim_in:
        raise DomainError(f"Curve of dimension {c.dim} cannot be composed with a map from R^{f.dim_in}")

    check_image(f, c)

    if isinstance(c, StepCurve):
        return StepCurve(c.breaks, f(c.values))

    if c.mode != CurveMode.REGULATED or c.order > 2:
        raise OrderError(f"compose_smooth supports regulated curves of order <= 2, got {c.mode} order {c.order}")

    if grid is None:
        grid = compose_grid(f, c, tol)

    mids = 0.5 * (grid[:-1] + grid[1:])
    pieces = c.base.piece_index(mids)
    top = StepCurve(grid, _top_target(f, c, mids, pieces))

    x0 = c.jet[0]
    jet = [f(x0)]

    if c.order == 2:
        jet.append(f.jacobian(x0) @ c.jet[1])

    return RegCurve(np.stack(jet), top)


def _inverse(phi: SmoothScalarRepar, targets: np.ndarray) -> np.ndarray:
    """
    phi^-1 at points of phi's image
    """

    curve = phi.curve
    dom = phi.domain

    if phi.is_piecewise_linear:
        knots = curve.base.breaks
        nodes = curve.nodes[:, 0, 0]

        if phi.sign < 0:
            knots, nodes = knots[::-1], nodes[::-1]

        return np.interp(targets, nodes, knots)

    return np.array([
        sp_optimize.brentq(lambda r, y=y: float(phi(r)) - y, dom.lo, dom.hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        for y in targets
    ])


def change_of_variables(
        c: StepCurve,
        phi: SmoothScalarRepar,
        s0: Optional[float] = None,
        s1: Optional[float] = None,
        tol: float = 1e-12
) -> np.ndarray:
    """
    The integral over [s0, s1] of phi'(r) c(phi(r)) dr, equal to the integral of c from phi(s0) to phi(s1).

    The left side is computed on the cells of [s0, s1] where c o phi is constant. For
    piecewise-linear phi each cell contributes slope * length * value exactly; otherwise the
    preimages of c's breakpoints are bracketed with scipy and phi' is integrated per cell by
    adaptive quadrature within `tol`.
    """

    if not isinstance(phi, SmoothScalarRepar):
        raise CertificateError("change_of_variables needs a certified monotone reparametrization")

    dom = phi.domain
    s0 = dom.lo if s0 is None else float(s0)
    s1 = dom.hi if s1 is None else float(s1)
    dom.check(np.array([s0, s1]))

    if s1 < s0:
        return -change_of_variables(c, phi, s1, s0, tol)

    image = phi.image()

    if not c.domain.contains_interval(image):
        raise DomainError(f"Reparametrization image {image} escapes the curve domain {c.domain}")

    inner = c.breaks[(c.breaks > image.lo) & (c.breaks < image.hi)]
    cuts = np.unique(np.concatenate([[s0, s1], _inverse(phi, inner)]))
    cuts = cuts[(cuts >= s0) & (cuts <= s1)]

    if phi.is_piecewise_linear:
        cuts = np.union1d(cuts, phi.curve.base.breaks[(phi.curve.base.breaks > s0) & (phi.curve.base.breaks < s1)])

    total = np.zeros(c.dim)

    for a, b in zip(cuts, cuts[1:]):
        mid = 0.5 * (a + b)
        value = c.evaluate(float(phi(mid)))

        if phi.is_piecewise_linear:
            slope = float(phi.curve.evaluate(mid, 1)[0])
            weight = slope * (b - a)
        else:
            inner_breaks = phi.curve.base.breaks
            points = inner_breaks[(inner_breaks > a) & (inner_breaks < b)]
            weight, _ = sp_integrate.quad(
                lambda r: float(phi.curve.evaluate(r, 1)[0]), a, b,
                epsabs=tol, epsrel=0.0, points=points if points.size else None, limit=200
            )

        total = total + weight * value

    return total


def reparametrize(c: StepCurve, phi: SmoothScalarRepar) -> StepCurve:
    """
    c o phi on phi's domain, as a strong regulated curve
    """

    if not isinstance(c, StepCurve):
        raise OrderError("Only step curves are pulled back by general reparametrizations")

    image = phi.image()

    if not c.domain.contains_interval(image):
        raise DomainError(f"Reparametrization image {image} escapes the curve domain {c.domain}")

    dom = phi.domain
    inner = c.breaks[(c.breaks > image.lo) & (c.breaks < image.hi)]
    cuts = np.unique(np.concatenate([[dom.lo, dom.hi], _inverse(phi, inner)]))
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    values = c.evaluate(np.clip(phi(mids), image.lo, image.hi))
    return regularize(cuts, values)

