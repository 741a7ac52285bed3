"""
Chart transitions of path coordinates.

A transition runs on the common refinement of the source and destination partitions:
every cell is reconstructed in its source chart, restricted, rewritten in the destination
chart and concatenated per destination piece. Cells whose two charts agree are pure
slicing and exact. Otherwise the derivative (T o gamma)' and the fiber pieces g(gamma) u
are re-projected to step curves within the tolerance; the re-projection grids are fixed
by `plan_transition` at one rep so that `apply_transition` is smooth in the rep for a
given plan.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..atlas import BundleAtlas, Manifold
from ..core import (
    Interval, Partition, RegCurve, StepCurve,
    check_image, compose_grid, compose_smooth, concat_many, refinement_grid, restrict
)
from ..errors import CoverError, DomainError
from ..helpers import op_norm
from ..log import Logger
from .charts import reconstruct
from .system import ManifoldPath, PathChartSystem, PathRep

logger = Logger.PATHSPACE


@dataclass(frozen=True)
class TransitionCell:
    interval: Interval
    src_piece: int
    dst_piece: int
    src_chart: str
    dst_chart: str
    grid: Optional[np.ndarray] = None
    fiber_grid: Optional[np.ndarray] = None

    @property
    def same_chart(self) -> bool:
        return self.src_chart == self.dst_chart

    @property
    def n_cells(self) -> int:
        base = 1 if self.grid is None else self.grid.shape[0] - 1
        fiber = 0 if self.fiber_grid is None else self.fiber_grid.shape[0] - 1
        return base + fiber


@dataclass(frozen=True)
class TransitionPlan:
    space: Manifold | BundleAtlas
    src: PathChartSystem
    dst: PathChartSystem
    tol: float
    cells: tuple[TransitionCell, ...]

    @property
    def manifold(self) -> Manifold:
        return self.space.base if isinstance(self.space, BundleAtlas) else self.space

    @property
    def bundle(self) -> Optional[BundleAtlas]:
        return self.space if isinstance(self.space, BundleAtlas) else None

    @property
    def refinement(self) -> Partition:
        return Partition.from_knots([self.cells[0].interval.lo] + [c.interval.hi for c in self.cells])

    @property
    def is_refinement_only(self) -> bool:
        return all(cell.same_chart for cell in self.cells)


def _fiber_target(bundle: BundleAtlas, cell: TransitionCell, gamma: RegCurve, u: StepCurve, breaks: np.ndarray):
    def target(t, pieces):
        x = gamma.evaluate(t)
        g = bundle.cocycle(cell.src_chart, cell.dst_chart, x)
        return np.einsum("...ij,...j->...i", g, u.evaluate(breaks[pieces]))

    return target


def _cell_curve(M: Manifold, cell: TransitionCell, path: ManifoldPath) -> RegCurve:
    local = restrict(path.curves[cell.src_piece], cell.interval)

    if not cell.same_chart:
        try:
            check_image(M.transition(cell.src_chart, cell.dst_chart), local)
        except DomainError as e:
            raise CoverError(
                f"Path leaves the overlap of '{cell.src_chart}' and '{cell.dst_chart}' on {cell.interval}: {e}",
                cell.interval.lo
            )

    return local


def plan_transition(
        space: Manifold | BundleAtlas,
        src: PathChartSystem,
        dst: PathChartSystem,
        rep: PathRep,
        tol: float
) -> TransitionPlan:
    bundle = space if isinstance(space, BundleAtlas) else None
    M = bundle.base if bundle else space
    path = reconstruct(M, src, rep.base)

    breaks = np.union1d(np.asarray(src.knots), np.asarray(dst.knots))
    cells = []

    for a, b in zip(breaks, breaks[1:]):
        mid = 0.5 * (a + b)
        i, j = src.locate(mid), dst.locate(mid)
        cell = TransitionCell(Interval(a, b), i, j, src.charts[i], dst.charts[j])

        if not cell.same_chart:
            local = _cell_curve(M, cell, path)
            grid = compose_grid(M.transition(cell.src_chart, cell.dst_chart), local, tol)
            fiber_grid = None

            if bundle and rep.is_lift:
                u = restrict(rep.fibers[i], cell.interval)
                fbreaks = np.union1d(local.base.breaks, u.breaks)
                fiber_grid = refinement_grid(fbreaks, _fiber_target(bundle, cell, local, u, fbreaks), tol)

            cell = TransitionCell(cell.interval, i, j, cell.src_chart, cell.dst_chart, grid, fiber_grid)

        cells.append(cell)

    plan = TransitionPlan(space, src, dst, tol, tuple(cells))
    logger.debug(f"Transition plan: {len(cells)} cells, {sum(c.n_cells for c in cells)} re-projection cells")
    return plan


def apply_transition(plan: TransitionPlan, rep: PathRep) -> PathRep:
    M, bundle = plan.manifold, plan.bundle
    path = reconstruct(M, plan.src, rep.base)
    lift = bundle is not None and rep.is_lift

    tops: list[list[StepCurve]] = [[] for _ in range(plan.dst.n_pieces)]
    fibers: list[list[StepCurve]] = [[] for _ in range(plan.dst.n_pieces)]
    x = None

    for cell in plan.cells:
        local = _cell_curve(M, cell, path)

        if cell.same_chart:
            out = local
        else:
            grid = np.union1d(cell.grid, local.base.breaks)
            out = compose_smooth(M.transition(cell.src_chart, cell.dst_chart), local, plan.tol, grid=grid)

        if x is None:
            x = out.jet[0]

        tops[cell.dst_piece].append(out.base)

        if lift:
            u = restrict(rep.fibers[cell.src_piece], cell.interval)

            if not cell.same_chart:
                grid = np.union1d(u.breaks, local.base.breaks)

                if cell.fiber_grid is None:
                    grid = refinement_grid(grid, _fiber_target(bundle, cell, local, u, grid), plan.tol)
                else:
                    grid = np.union1d(cell.fiber_grid, grid)

                mids = 0.5 * (grid[:-1] + grid[1:])
                g = bundle.cocycle(cell.src_chart, cell.dst_chart, local.evaluate(mids))
                u = StepCurve(grid, np.einsum("...ij,...j->...i", g, u.evaluate(mids)))

            fibers[cell.dst_piece].append(u)

    pieces = tuple(concat_many(parts) for parts in tops)
    return PathRep(x, pieces, tuple(concat_many(parts) for parts in fibers) if lift else None)


def transition_rep(
        space: Manifold | BundleAtlas,
        src: PathChartSystem,
        dst: PathChartSystem,
        rep: PathRep,
        tol: float
) -> PathRep:
    """
    The coordinates in `dst` of the path (or lift) with coordinates `rep` in `src`; every
    re-projected derivative and fiber piece is within `tol` in sup norm
    """

    return apply_transition(plan_transition(space, src, dst, rep, tol), rep)


def round_trip_amplification(plan: TransitionPlan, rep: PathRep) -> float:
    """
    Sampled factor by which the plan's re-projections amplify an error of size e in the
    pieces and positions of `rep`: sup |T'| + sup |T''| |gamma'| over the changed cells (and
    sup |g| for fibers), at least 1. A transition of a rep that is itself within tol of exact
    coordinates is then within (1 + amplification) * tol
    """

    M, bundle = plan.manifold, plan.bundle
    path = reconstruct(M, plan.src, rep.base)
    amp = 1.0

    for cell in plan.cells:
        if cell.same_chart:
            continue

        local = _cell_curve(M, cell, path)
        T = M.transition(cell.src_chart, cell.dst_chart)
        t = 0.5 * (cell.grid[:-1] + cell.grid[1:])
        x = local.evaluate(t)
        v = local.base.evaluate(t)

        curvature = np.einsum("...ijk,...k->...ij", T.second(x), v)
        amp = max(amp, op_norm(T.jacobian(x)) + op_norm(curvature))

        if bundle is not None and rep.is_lift:
            amp = max(amp, op_norm(bundle.cocycle(cell.src_chart, cell.dst_chart, x)))

    return amp
