from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..atlas import BundleAtlas, Manifold
from ..conf import conf
from ..core import Interval, Partition, RegCurve, StepCurve, image_net_with_times
from ..errors import ChartEscapeError, CoverError, DimensionError, DomainError, OrderError
from ..helpers import as_vector
from ..log import Logger
from ..objects import CurveMode

logger = Logger.PATHSPACE


@dataclass(frozen=True)
class PathChartSystem:
    """
    A strict partition of [0, 1] with one chart per piece
    """

    partition: Partition
    charts: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "charts", tuple(self.charts))

        if self.partition.interval != Interval.unit():
            raise DomainError(f"A chart system partitions [0, 1], got {self.partition.interval}")

        if not self.partition.is_strict:
            object.__setattr__(self, "partition", self.partition.strict())

        if len(self.charts) != self.partition.n_pieces:
            raise DimensionError(f"{len(self.charts)} charts for {self.partition.n_pieces} pieces")

    @classmethod
    def make(cls, knots: Sequence[float], charts: Sequence[str]) -> "PathChartSystem":
        return cls(Partition.from_knots(knots), tuple(charts))

    @classmethod
    def single(cls, chart: str) -> "PathChartSystem":
        return cls(Partition.from_knots([0.0, 1.0]), (chart,))

    @property
    def knots(self) -> tuple[float, ...]:
        return self.partition.knots

    @property
    def n_pieces(self) -> int:
        return len(self.charts)

    def pieces(self) -> list[Interval]:
        return self.partition.pieces()

    def locate(self, t: float) -> int:
        return self.partition.locate(t)

    def check(self, manifold: Manifold) -> None:
        for chart in self.charts:
            manifold.region(chart)


@dataclass(frozen=True)
class PathRep:
    """
    Chart-side coordinates of a path: the initial point x and the derivative pieces y_i.
    A lift rep also carries the fiber pieces u_i.
    """

    x: np.ndarray
    pieces: tuple[StepCurve, ...]
    fibers: Optional[tuple[StepCurve, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", as_vector(self.x))
        object.__setattr__(self, "pieces", tuple(self.pieces))

        if self.fibers is not None:
            object.__setattr__(self, "fibers", tuple(self.fibers))

        dim = self.x.shape[0]

        for y in self.pieces:
            if y.dim != dim:
                raise DimensionError(f"Derivative piece of dimension {y.dim} for a base of dimension {dim}")

        for left, right in zip(self.pieces, self.pieces[1:]):
            if left.domain.hi != right.domain.lo:
                raise DomainError(f"Piece domains {left.domain} and {right.domain} do not tile")

        if self.fibers is not None:
            if len(self.fibers) != len(self.pieces):
                raise DimensionError(f"{len(self.fibers)} fiber pieces for {len(self.pieces)} base pieces")

            ranks = {u.dim for u in self.fibers}

            if len(ranks) > 1:
                raise DimensionError(f"Fiber pieces of mixed dimensions {sorted(ranks)}")

            for y, u in zip(self.pieces, self.fibers):
                if y.domain != u.domain:
                    raise DomainError(f"Fiber piece on {u.domain} does not match base piece on {y.domain}")

    @property
    def is_lift(self) -> bool:
        return self.fibers is not None

    @property
    def dim(self) -> int:
        return self.x.shape[0]

    @property
    def knots(self) -> list[float]:
        return [self.pieces[0].domain.lo] + [y.domain.hi for y in self.pieces]

    @property
    def base(self) -> "PathRep":
        return PathRep(self.x, self.pieces) if self.is_lift else self

    def matches(self, system: PathChartSystem) -> bool:
        return len(self.pieces) == system.n_pieces and all(
            y.domain == piece for y, piece in zip(self.pieces, system.pieces())
        )

    # Linear structure, used by finite differences of reps
    def _zip(self, other: "PathRep", op) -> "PathRep":
        if len(self.pieces) != len(other.pieces) or self.is_lift != other.is_lift:
            raise DimensionError("Reps of different shapes")

        pieces = tuple(op(a, b) for a, b in zip(self.pieces, other.pieces))
        fibers = tuple(op(a, b) for a, b in zip(self.fibers, other.fibers)) if self.is_lift else None
        return PathRep(op(self.x, other.x), pieces, fibers)

    def __add__(self, other: "PathRep") -> "PathRep":
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: "PathRep") -> "PathRep":
        return self._zip(other, lambda a, b: a - b)

    def __mul__(self, scalar: float) -> "PathRep":
        fibers = tuple(u * scalar for u in self.fibers) if self.is_lift else None
        return PathRep(self.x * scalar, tuple(y * scalar for y in self.pieces), fibers)

    __rmul__ = __mul__

    def distance(self, other: "PathRep") -> float:
        """
        max(|x - x'|, max_i |||y_i - y'_i|||, max_i |||u_i - u'_i|||)
        """

        diff = self - other
        parts = [float(np.max(np.abs(diff.x)))] + [y.sup_norm() for y in diff.pieces]

        if diff.is_lift:
            parts += [u.sup_norm() for u in diff.fibers]

        return max(parts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PathRep):
            return NotImplemented

        return (
            np.array_equal(self.x, other.x)
            and self.pieces == other.pieces
            and self.fibers == other.fibers
        )

    __hash__ = None


def piece_margins(manifold: Manifold, chart: str, curve: RegCurve) -> tuple[np.ndarray, np.ndarray, float]:
    """
    Chart margins along a piece with the slack they must exceed: at the vertices of a
    polygonal piece in a chart with a concave margin (slack 0), otherwise over an image net
    (slack = its resolution)
    """

    region = manifold.region(chart)

    if region.concave and curve.depth == 1:
        return curve.base.breaks, region.margin(curve.nodes[:, 0]), 0.0

    eps = conf.numerics.net_eps
    times, points = image_net_with_times(curve, eps)
    return times, region.margin(points), eps


@dataclass(frozen=True)
class ManifoldPath:
    """
    A path on a manifold: a chart system and one order-1 local curve per piece
    """

    manifold: Manifold
    system: PathChartSystem
    curves: tuple[RegCurve, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "curves", tuple(self.curves))
        self.validate()

    def validate(self) -> None:
        M, system = self.manifold, self.system
        system.check(M)

        if len(self.curves) != system.n_pieces:
            raise DimensionError(f"{len(self.curves)} local curves for {system.n_pieces} pieces")

        for i, (curve, piece, chart) in enumerate(zip(self.curves, system.pieces(), system.charts)):
            if not isinstance(curve, RegCurve) or curve.mode != CurveMode.REGULATED or curve.order != 1:
                raise OrderError(f"Piece {i} must be a regulated curve of order 1")

            if curve.dim != M.dim:
                raise DimensionError(f"Piece {i} has dimension {curve.dim}, the manifold {M.dim}")

            if curve.domain != piece:
                raise DomainError(f"Piece {i} is defined on {curve.domain}, expected {piece}")

            times, margins, slack = piece_margins(M, chart, curve)
            bad = np.flatnonzero(margins <= slack)

            if bad.size:
                raise ChartEscapeError(i, float(times[bad[0]]), chart, float(margins[bad[0]]))

        for i in range(system.n_pieces - 1):
            here, there = system.charts[i], system.charts[i + 1]
            end = self.curves[i].nodes[-1, 0]
            t = system.knots[i + 1]

            if here != there and not M.overlap(here, there).contains(end):
                raise CoverError(f"Junction {i} is outside the overlap of '{here}' and '{there}'", t)

            expected = M.transition(here, there)(end)
            gap = float(np.max(np.abs(self.curves[i + 1].jet[0] - expected)))

            if gap > conf.numerics.junction_tol:
                raise CoverError(f"Junction {i} is incompatible (gap {gap:.3e})", t)

    @property
    def dim(self) -> int:
        return self.manifold.dim

    def endpoint(self, i: int) -> np.ndarray:
        """
        gamma_i at the right end of its piece
        """

        return self.curves[i].nodes[-1, 0]

    def min_margin(self) -> float:
        """
        Smallest chart margin along all pieces
        """

        return min(
            float(np.min(piece_margins(self.manifold, chart, curve)[1]))
            for chart, curve in zip(self.system.charts, self.curves)
        )


@dataclass(frozen=True)
class BundleLift:
    """
    A path in a vector bundle: a base path plus one fiber step curve per piece
    """

    bundle: BundleAtlas
    base: ManifoldPath
    fibers: tuple[StepCurve, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "fibers", tuple(self.fibers))

        if self.bundle.base is not self.base.manifold and self.bundle.base.name != self.base.manifold.name:
            raise DomainError(f"Lift over {self.base.manifold.name} in a bundle over {self.bundle.base.name}")

        if len(self.fibers) != self.base.system.n_pieces:
            raise DimensionError(f"{len(self.fibers)} fiber pieces for {self.base.system.n_pieces} pieces")

        for i, (u, piece) in enumerate(zip(self.fibers, self.base.system.pieces())):
            if not isinstance(u, StepCurve):
                raise OrderError(f"Fiber piece {i} must be a step curve")

            if u.dim != self.bundle.rank:
                raise DimensionError(f"Fiber piece {i} has dimension {u.dim}, the bundle rank is {self.bundle.rank}")

            if u.domain != piece:
                raise DomainError(f"Fiber piece {i} is defined on {u.domain}, expected {piece}")

    @property
    def system(self) -> PathChartSystem:
        return self.base.system
