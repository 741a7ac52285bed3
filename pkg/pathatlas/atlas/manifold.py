import itertools

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..conf import conf
from ..errors import CoverError, DimensionError, DomainError
from ..helpers import as_vector
from ..log import Logger
from .smooth import Region, SmoothMap

logger = Logger.ATLAS


@dataclass(frozen=True)
class Point:
    chart: str
    coords: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", as_vector(self.coords))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Point):
            return NotImplemented

        return self.chart == other.chart and bool(np.array_equal(self.coords, other.coords))

    __hash__ = None


class Manifold:
    """
    An m-dimensional manifold given by its chart codomains and chart transitions.

    `transitions[(i, j)]` maps chart-i coordinates to chart-j coordinates and is defined on
    the overlap as seen from chart i. Pairs without an entry do not overlap. Chart maps
    themselves are never stored.
    """

    def __init__(self, name: str, dim: int, charts: dict[str, Region], transitions: dict[tuple[str, str], SmoothMap]) -> None:
        for chart, region in charts.items():
            if region.dim != dim:
                raise DimensionError(f"Chart '{chart}' has dimension {region.dim}, expected {dim}")

        for (i, j), t in transitions.items():
            if i not in charts or j not in charts:
                raise DomainError(f"Transition ({i}, {j}) between unknown charts")

            if t.dim_in != dim or t.dim_out != dim:
                raise DimensionError(f"Transition ({i}, {j}) is not a map R^{dim} -> R^{dim}")

        self.name = name
        self.dim = dim
        self._charts = dict(charts)
        self._transitions = dict(transitions)

    def __repr__(self) -> str:
        return f"Manifold({self.name!r}, dim={self.dim}, charts={list(self._charts)})"

    @property
    def charts(self) -> list[str]:
        return list(self._charts)

    def region(self, chart: str) -> Region:
        try:
            return self._charts[chart]
        except KeyError:
            raise DomainError(f"Unknown chart '{chart}' of {self.name}")

    def overlaps(self, i: str, j: str) -> bool:
        return i == j or (i, j) in self._transitions

    def transition(self, i: str, j: str) -> SmoothMap:
        if i == j:
            return SmoothMap.identity(self.region(i))

        try:
            return self._transitions[(i, j)]
        except KeyError:
            raise CoverError(f"Charts '{i}' and '{j}' of {self.name} do not overlap")

    def overlap(self, i: str, j: str) -> Region:
        """
        The overlap of charts i and j in chart-i coordinates
        """

        return self.transition(i, j).domain

    def contains(self, chart: str, x) -> bool:
        return bool(self.region(chart).contains(as_vector(x, self.dim)))

    def check_point(self, p: Point) -> Point:
        if not self.contains(p.chart, p.coords):
            raise DomainError(f"{p.coords.tolist()} is outside chart '{p.chart}' of {self.name}")

        return p

    def convert_point(self, p: Point, target: str) -> Point:
        self.check_point(p)

        if p.chart == target:
            return p

        t = self.transition(p.chart, target)

        if not t.domain.contains(p.coords):
            raise CoverError(f"{p.coords.tolist()} of chart '{p.chart}' is not in the overlap with '{target}'")

        return Point(target, t(p.coords))

    def tangent_cocycle(self, i: str, j: str, x) -> np.ndarray:
        """
        Jacobian of the transition from chart i to chart j at x
        """

        x = as_vector(x, self.dim)

        if i == j:
            self.check_point(Point(i, x))
            return np.eye(self.dim)

        t = self.transition(i, j)

        if not t.domain.contains(x):
            raise CoverError(f"{x.tolist()} of chart '{i}' is not in the overlap with '{j}'")

        return t.jacobian(x)

    def locate(self, x_chart: str, x, preferred: Optional[list[str]] = None) -> list[tuple[str, float]]:
        """
        Charts containing the point, with the point's margin in each, best margin first
        """

        x = as_vector(x, self.dim)
        found = []

        for chart in preferred or self.charts:
            try:
                y = self.convert_point(Point(x_chart, x), chart).coords
            except (CoverError, DomainError):
                continue

            found.append((chart, float(self.region(chart).margin(y))))

        return sorted(found, key=lambda item: -item[1])

    def check(self, rng: np.random.Generator, n: Optional[int] = None) -> dict[str, float]:
        """
        Sampled atlas identities: the largest inverse, cocycle and Jacobian errors measured
        """

        n = conf.sampling.overlap_samples if n is None else n
        inverse = cocycle = jacobian = 0.0

        for (i, j), t in self._transitions.items():
            x = t.domain.sample(rng, n, min_margin=1e-6)
            y = t(x)
            back = self.transition(j, i)
            ok = back.domain.contains(y)
            inverse = max(inverse, float(np.max(np.abs(back(y[ok]) - x[ok]), initial=0.0)))

            if t.jac is not None:
                jacobian = max(jacobian, t.check_jacobian(rng, min(n, 200)))

            for k in self.charts:
                if k in (i, j) or not (self.overlaps(i, k) and self.overlaps(j, k)):
                    continue

                ok = self.overlap(i, k).contains(x) & self.overlap(j, k).contains(y)

                if np.any(ok):
                    direct = self.transition(i, k)(x[ok])
                    chained = self.transition(j, k)(y[ok])
                    cocycle = max(cocycle, float(np.max(np.abs(direct - chained))))

        logger.debug(f"{self.name}: inverse {inverse:.2e}, cocycle {cocycle:.2e}, jacobian {jacobian:.2e}")
        return {"inverse": inverse, "cocycle": cocycle, "jacobian": jacobian}


class BundleAtlas:
    """
    A rank-d vector bundle over a manifold, given by its transition cocycle.

    `cocycles[(i, j)]` maps chart-i coordinates of the overlap to the invertible d x d matrix
    taking chart-i fiber coordinates to chart-j fiber coordinates.
    """

    def __init__(
            self,
            name: str,
            base: Manifold,
            rank: int,
            cocycles: dict[tuple[str, str], Callable[[np.ndarray], np.ndarray]]
    ) -> None:
        for i, j in cocycles:
            if not base.overlaps(i, j):
                raise CoverError(f"Cocycle given on non-overlapping charts ({i}, {j})")

        self.name = name
        self.base = base
        self.rank = rank
        self._cocycles = dict(cocycles)

    def __repr__(self) -> str:
        return f"BundleAtlas({self.name!r}, base={self.base.name!r}, rank={self.rank})"

    @classmethod
    def trivial(cls, base: Manifold, rank: int) -> "BundleAtlas":
        def identity(x):
            x = np.asarray(x, dtype=float)
            return np.broadcast_to(np.eye(rank), x.shape[:-1] + (rank, rank)).copy()

        pairs = [(i, j) for i, j in itertools.permutations(base.charts, 2) if base.overlaps(i, j)]
        return cls(f"trivial-bundle({base.name}, {rank})", base, rank, {pair: identity for pair in pairs})

    @classmethod
    def tangent(cls, base: Manifold) -> "BundleAtlas":
        pairs = [(i, j) for i, j in itertools.permutations(base.charts, 2) if base.overlaps(i, j)]
        return cls(
            f"tangent-bundle({base.name})", base, base.dim,
            {(i, j): base.transition(i, j).jacobian for i, j in pairs}
        )

    def cocycle(self, i: str, j: str, x) -> np.ndarray:
        """
        g_ij at chart-i coordinates x (one point or an array of points)
        """

        x = np.asarray(x, dtype=float)
        overlap = self.base.overlap(i, j) if i != j else self.base.region(i)

        if not np.all(overlap.contains(x)):
            raise CoverError(f"Cocycle ({i}, {j}) evaluated outside the overlap")

        if i == j:
            return np.broadcast_to(np.eye(self.rank), x.shape[:-1] + (self.rank, self.rank)).copy()

        try:
            g = self._cocycles[(i, j)]
        except KeyError:
            raise CoverError(f"No cocycle for charts ({i}, {j}) of {self.name}")

        return np.asarray(g(x), dtype=float).reshape(x.shape[:-1] + (self.rank, self.rank))

    def check(self, rng: np.random.Generator, n: Optional[int] = None) -> dict[str, float]:
        """
        Sampled cocycle identities: g_ji g_ij = Id, g_ik = g_jk g_ij, and the smallest |det|
        """

        n = conf.sampling.overlap_samples if n is None else n
        M = self.base
        inverse = cocycle = 0.0
        det = np.inf
        eye = np.eye(self.rank)

        for i, j in self._cocycles:
            x = M.overlap(i, j).sample(rng, n, min_margin=1e-6)
            y = M.transition(i, j)(x)
            g = self.cocycle(i, j, x)
            det = min(det, float(np.min(np.abs(np.linalg.det(g)))))

            ok = M.overlap(j, i).contains(y)
            back = self.cocycle(j, i, y[ok]) @ g[ok]
            inverse = max(inverse, float(np.max(np.abs(back - eye), initial=0.0)))

            for k in M.charts:
                if k in (i, j) or not (M.overlaps(i, k) and M.overlaps(j, k)):
                    continue

                ok = M.overlap(i, k).contains(x) & M.overlap(j, k).contains(y)

                if np.any(ok):
                    chained = self.cocycle(j, k, y[ok]) @ g[ok]
                    cocycle = max(cocycle, float(np.max(np.abs(self.cocycle(i, k, x[ok]) - chained))))

        return {"inverse": inverse, "cocycle": cocycle, "min_det": det}
