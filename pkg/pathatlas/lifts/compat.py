"""
Compatibility automorphisms between two trivializations of one bundle along one path.

Two chart systems for the same path give two trivializations. The global coordinates they
assign to a section differ by a matrix field: on the cell where piece i of the first system
meets piece j of the second, w_B(t) = C^B_j g_ij(gamma(t)) (C^A_i)^-1 w_A(t). The field
is constant on a cell whenever both pieces use the same chart.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..conf import conf
from ..core import (
    Curve, Interval, RegCurve, StepCurve, concat_many, linear_push, primitive, refinement_grid, restrict
)
from ..errors import DimensionError, DomainError, OrderError
from ..helpers import op_norm
from ..log import Logger
from ..pathspace import BundleLift, evaluate_path
from .trivialization import PathTrivialization

logger = Logger.LIFTS


@dataclass(frozen=True)
class AutomorphismCell:
    interval: Interval
    src_piece: int
    dst_piece: int
    src_chart: str
    dst_chart: str

    @property
    def constant(self) -> bool:
        return self.src_chart == self.dst_chart


class AutomorphismField:
    """
    t -> A(t) in GL(d) with rep_B = A rep_A, on the common refinement of both partitions
    """

    def __init__(self, src: PathTrivialization, dst: PathTrivialization, cells: tuple[AutomorphismCell, ...]) -> None:
        self.src = src
        self.dst = dst
        self.cells = cells
        self._left = np.linalg.inv(src.frames)

    @property
    def rank(self) -> int:
        return self.src.rank

    @property
    def knots(self) -> np.ndarray:
        return np.array([self.cells[0].interval.lo] + [cell.interval.hi for cell in self.cells])

    def is_piecewise_constant(self) -> bool:
        return all(cell.constant for cell in self.cells)

    def _cell_index(self, t: np.ndarray) -> np.ndarray:
        knots = self.knots
        return np.clip(np.searchsorted(knots, t, side="right") - 1, 0, len(self.cells) - 1)

    def _on_cell(self, k: int, t: np.ndarray) -> np.ndarray:
        cell = self.cells[k]
        C_dst = self.dst.frames[cell.dst_piece]
        C_src_inv = self._left[cell.src_piece]

        if cell.constant:
            return np.broadcast_to(C_dst @ C_src_inv, t.shape + (self.rank, self.rank))

        x = self.src.path.curves[cell.src_piece].evaluate(t)
        g = self.src.bundle.cocycle(cell.src_chart, cell.dst_chart, x)
        return C_dst @ g @ C_src_inv

    def evaluate(self, t) -> np.ndarray:
        """
        A(t) for one time (d x d) or an array of times (n x d x d)
        """

        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty(t.shape + (self.rank, self.rank))
        index = self._cell_index(t)

        for k in np.unique(index):
            mask = index == k
            out[mask] = self._on_cell(int(k), t[mask])

        return out[0] if scalar else out

    def __call__(self, t) -> np.ndarray:
        return self.evaluate(t)

    def act(self, t, w) -> np.ndarray:
        """
        A(t) w for fiber vectors w given at the times t
        """

        return np.einsum("...ij,...j->...i", self.evaluate(t), np.asarray(w, dtype=float))

    def _derivative(self, k: int, t: np.ndarray) -> np.ndarray:
        cell = self.cells[k]

        if cell.constant:
            return np.zeros(t.shape + (self.rank, self.rank))

        h = conf.numerics.fd_step * max(1.0, cell.interval.length)
        lo, hi = np.maximum(t - h, cell.interval.lo), np.minimum(t + h, cell.interval.hi)
        return (self._on_cell(k, hi) - self._on_cell(k, lo)) / (hi - lo)[..., None, None]

    def apply_section(self, w: Curve, tol: Optional[float] = None) -> Curve:
        """
        rep_B of the section with rep_A = w. Exact on constant cells; elsewhere the step curve
        (or the top derivative of an order-1 w) is re-projected within `tol`
        """

        tol = conf.sampling.atlas_tol if tol is None else tol

        if w.dim != self.rank:
            raise DimensionError(f"Section of dimension {w.dim} for rank {self.rank}")

        if isinstance(w, StepCurve):
            return concat_many([self._apply_step(k, restrict(w, cell.interval), tol) for k, cell in enumerate(self.cells)])

        if not isinstance(w, RegCurve) or w.order != 1:
            raise OrderError("Sections are step curves or order-1 curves")

        tops = []

        for k, cell in enumerate(self.cells):
            local = restrict(w, cell.interval)

            if cell.constant:
                tops.append(linear_push(self._on_cell(k, np.array(cell.interval.lo)), local.base))
                continue

            # (A w)' = A' w + A w'
            def target(t, pieces, k=k, local=local):
                return (
                    np.einsum("...ij,...j->...i", self._derivative(k, t), local.evaluate(t, 0, piece=pieces))
                    + np.einsum("...ij,...j->...i", self._on_cell(k, t), local.base.values[pieces])
                )

            grid = refinement_grid(local.base.breaks, target, tol)
            mids = 0.5 * (grid[:-1] + grid[1:])
            tops.append(StepCurve(grid, target(mids, local.base.piece_index(mids))))

        return primitive(concat_many(tops), self.act(0.0, w.jet[0]))

    def _apply_step(self, k: int, u: StepCurve, tol: float) -> StepCurve:
        cell = self.cells[k]

        if cell.constant:
            return linear_push(self._on_cell(k, np.array(cell.interval.lo)), u)

        def target(t, pieces):
            return np.einsum("...ij,...j->...i", self._on_cell(k, t), u.values[pieces])

        grid = refinement_grid(u.breaks, target, tol)
        mids = 0.5 * (grid[:-1] + grid[1:])
        return StepCurve(grid, target(mids, u.piece_index(mids)))

    def bounds(self) -> tuple[float, float]:
        """
        sup |A| and sup |A^-1| in the max-norm operator norm; exact on constant cells,
        sampled times the safety factor elsewhere
        """

        probes = 8 * conf.numerics.lipschitz_probes
        fwd = inv = 0.0

        for k, cell in enumerate(self.cells):
            if cell.constant:
                A = self._on_cell(k, np.array(cell.interval.lo))
                fwd, inv = max(fwd, op_norm(A)), max(inv, op_norm(np.linalg.inv(A)))
                continue

            A = self._on_cell(k, np.linspace(cell.interval.lo, cell.interval.hi, probes))
            fwd = max(fwd, conf.numerics.safety_factor * op_norm(A))
            inv = max(inv, conf.numerics.safety_factor * op_norm(np.linalg.inv(A)))

        return fwd, inv

    def kappa(self) -> float:
        return max(self.bounds())


def compatibility_automorphisms(
        src: PathTrivialization,
        dst: PathTrivialization,
        tol: float = 1e-6
) -> AutomorphismField:
    """
    The matrix field taking global coordinates of `src` to those of `dst`.

    Both trivializations must be of the same bundle along the same path, possibly presented in
    different chart systems; the two paths are compared at every cell midpoint within `tol`
    """

    if src.bundle.name != dst.bundle.name or src.bundle.base.name != dst.bundle.base.name:
        raise DomainError(f"Trivializations of {src.bundle.name} and {dst.bundle.name}")

    A, B = src.path.system, dst.path.system
    breaks = np.union1d(np.asarray(A.knots), np.asarray(B.knots))
    M = src.path.manifold
    cells = []

    for a, b in zip(breaks, breaks[1:]):
        mid = 0.5 * (a + b)
        i, j = A.locate(mid), B.locate(mid)
        cell = AutomorphismCell(Interval(float(a), float(b)), i, j, A.charts[i], B.charts[j])

        here = M.convert_point(evaluate_path(src.path, mid), cell.dst_chart).coords
        there = evaluate_path(dst.path, mid).coords
        gap = float(np.max(np.abs(here - there)))

        if gap > tol:
            raise DomainError(f"Trivializations along different paths: {gap:.3e} apart at t = {mid}")

        cells.append(cell)

    field = AutomorphismField(src, dst, tuple(cells))
    logger.debug(f"Compatibility field on {len(cells)} cells, piecewise constant: {field.is_piecewise_constant()}")
    return field


class LiftAutomorphismField:
    """
    The compatibility field of fields along a lift c, acting on pairs (phi, theta).

    In block form [[A_gamma, 0], [B, A_E]]: the tangent block is the compatibility field of
    the tangent trivializations, the fiber block that of the bundle trivializations, and B
    carries the derivative of the cocycle applied to the fiber value of c
    """

    def __init__(self, lift: BundleLift, tangent: AutomorphismField, fiber: AutomorphismField) -> None:
        if tangent.src.path is not lift.base or fiber.src.path is not lift.base:
            raise DomainError("The source trivializations must be along the base of the lift")

        self.lift = lift
        self.tangent = tangent
        self.fiber = fiber

    def project(self) -> AutomorphismField:
        """
        q_1 of the block field: the tangent compatibility field
        """

        return self.tangent

    def _coupling(self, t: float) -> np.ndarray:
        m, d = self.tangent.rank, self.fiber.rank
        k = int(self.fiber._cell_index(np.array([t]))[0])
        j = int(self.tangent._cell_index(np.array([t]))[0])
        cell = self.fiber.cells[k]

        if cell.constant:
            return np.zeros((d, m))

        x = self.lift.base.curves[cell.src_piece].evaluate(t)
        u = self.lift.fibers[cell.src_piece].evaluate(t)
        bundle = self.fiber.src.bundle
        h = conf.numerics.fd_step * (1.0 + float(np.max(np.abs(x))))
        eye = np.eye(m)

        # dg_x[e_k] u, in chart-i tangent coordinates
        columns = [
            (bundle.cocycle(cell.src_chart, cell.dst_chart, x + h * eye[c])
             - bundle.cocycle(cell.src_chart, cell.dst_chart, x - h * eye[c])) @ u / (2 * h)
            for c in range(m)
        ]
        dg = np.stack(columns, axis=-1)

        C_tangent = self.tangent.src.frames[self.tangent.cells[j].src_piece]
        return self.fiber.dst.frames[cell.dst_piece] @ dg @ np.linalg.inv(C_tangent)

    def block(self, t: float) -> np.ndarray:
        m, d = self.tangent.rank, self.fiber.rank
        out = np.zeros((m + d, m + d))
        out[:m, :m] = self.tangent.evaluate(t)
        out[m:, m:] = self.fiber.evaluate(t)
        out[m:, :m] = self._coupling(t)
        return out


def lift_compatibility(
        lift: BundleLift,
        tangent_src: PathTrivialization,
        tangent_dst: PathTrivialization,
        fiber_src: PathTrivialization,
        fiber_dst: PathTrivialization,
        tol: float = 1e-6
) -> LiftAutomorphismField:
    if tangent_src.rank != lift.base.dim:
        raise DimensionError("The tangent trivializations must be of the tangent bundle of the base")

    return LiftAutomorphismField(
        lift,
        compatibility_automorphisms(tangent_src, tangent_dst, tol),
        compatibility_automorphisms(fiber_src, fiber_dst, tol)
    )
