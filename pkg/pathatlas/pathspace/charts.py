from typing import Optional

import numpy as np

from ..atlas import BundleAtlas, Manifold, Point
from ..core import Interval, RegCurve, StepCurve, concat_many, primitive, restrict
from ..errors import ChartEscapeError, CoverError, DimensionError, DomainError
from ..log import Logger
from .system import BundleLift, ManifoldPath, PathChartSystem, PathRep

logger = Logger.PATHSPACE


def chart_map(p: ManifoldPath) -> PathRep:
    """
    (gamma_1(0), gamma_1', ..., gamma_n')
    """

    return PathRep(p.curves[0].jet[0], tuple(c.base for c in p.curves))


def lift_chart_map(c: BundleLift) -> PathRep:
    rep = chart_map(c.base)
    return PathRep(rep.x, rep.pieces, c.fibers)


def _check_rep(system: PathChartSystem, rep: PathRep) -> None:
    if not rep.matches(system):
        raise DomainError(f"Rep pieces on {rep.knots} do not match the partition {list(system.knots)}")


def reconstruct(manifold: Manifold, system: PathChartSystem, rep: PathRep) -> ManifoldPath:
    """
    The path with chart coordinates `rep`: piece 1 is x + int y_1 and piece i + 1 starts at
    the transition of piece i's endpoint. Raises ChartEscapeError when a piece leaves its chart
    """

    _check_rep(system, rep)

    if rep.dim != manifold.dim:
        raise DimensionError(f"Rep of dimension {rep.dim} on a manifold of dimension {manifold.dim}")

    curves = []
    start = rep.x

    for i, (y, chart) in enumerate(zip(rep.pieces, system.charts)):
        if i:
            prev_chart = system.charts[i - 1]
            end = curves[-1].nodes[-1, 0]
            t = system.knots[i]

            if prev_chart != chart:
                overlap = manifold.overlap(prev_chart, chart)
                margin = float(overlap.margin(end))

                if margin <= 0:
                    raise ChartEscapeError(i - 1, t, f"{prev_chart}&{chart}", margin)

            start = manifold.transition(prev_chart, chart)(end)

        curves.append(primitive(y, start))

    return ManifoldPath(manifold, system, tuple(curves))


def lift_reconstruct(bundle: BundleAtlas, system: PathChartSystem, rep: PathRep) -> BundleLift:
    if not rep.is_lift:
        raise DimensionError("A lift rep needs fiber pieces")

    base = reconstruct(bundle.base, system, rep.base)
    return BundleLift(bundle, base, rep.fibers)


def assemble(rep: PathRep) -> RegCurve:
    """
    x + int (y_1 * ... * y_n): the single-chart form of the chart coordinates
    """

    return primitive(concat_many(list(rep.pieces)), rep.x)


def disassemble(curve: RegCurve, system: PathChartSystem) -> PathRep:
    """
    The inverse of `assemble`: initial value and the top derivative sliced along the partition
    """

    if curve.order != 1 or curve.domain != Interval.unit():
        raise DomainError("disassemble needs an order-1 curve on [0, 1]")

    return PathRep(curve.jet[0], tuple(restrict(curve.base, piece) for piece in system.pieces()))


def evaluate_path(p: ManifoldPath, t: float) -> Point:
    """
    The point at time t; at a knot the right piece wins, except at t = 1
    """

    i = p.system.locate(t)
    return Point(p.system.charts[i], p.curves[i].evaluate(t))


def evaluate_lift(c: BundleLift, t: float) -> tuple[Point, np.ndarray]:
    i = c.system.locate(t)
    return Point(c.system.charts[i], c.base.curves[i].evaluate(t)), c.fibers[i].evaluate(t)


def linearized_reconstruct(p: ManifoldPath, drep: PathRep) -> list[RegCurve]:
    """
    The tangent map of `reconstruct` at p applied to drep: per-piece order-1 curves of
    tangent vectors in chart coordinates, handed over at knots by transition Jacobians
    """

    _check_rep(p.system, drep)
    M, charts = p.manifold, p.system.charts
    out = []
    start = drep.x

    for i, y in enumerate(drep.pieces):
        if i:
            J = M.tangent_cocycle(charts[i - 1], charts[i], p.endpoint(i - 1))
            start = J @ out[-1].nodes[-1, 0]

        out.append(primitive(y, start))

    return out


def transported_endpoint(p: ManifoldPath, chart: Optional[str] = None) -> Point:
    """
    gamma(1), optionally converted into another chart
    """

    end = Point(p.system.charts[-1], p.endpoint(p.system.n_pieces - 1))

    if chart is None or chart == end.chart:
        return end

    try:
        return p.manifold.convert_point(end, chart)
    except (CoverError, DomainError) as e:
        raise CoverError(f"Endpoint of the path cannot be expressed in chart '{chart}': {e}", 1.0)


def constant_rep(system: PathChartSystem, x, rank: Optional[int] = None) -> PathRep:
    x = np.asarray(x, dtype=float).reshape(-1)
    pieces = tuple(StepCurve.zero(piece, x.shape[0]) for piece in system.pieces())
    fibers = tuple(StepCurve.zero(piece, rank) for piece in system.pieces()) if rank else None
    return PathRep(x, pieces, fibers)
