"""
Seeded random instances for the invariant suites and the tests.

Paths move slowly (speed `SPEED` in the max norm) around a start point chosen well inside
the charts they use, so every piece stays in its chart and every junction in its overlap.
"""

from typing import Optional

import numpy as np

from .atlas import BundleAtlas, Manifold, builtin
from .atlas.catalog import ARCS, angle_in_chart
from .core import Interval, RegCurve, StepCurve
from .errors import UnknownBuiltinError
from .objects import CurveMode
from .pathspace import BundleLift, ManifoldPath, PathChartSystem, PathRep, lift_reconstruct, reconstruct

SPEED = 0.01
PATH_MANIFOLDS = ("euclidean", "circle-two-arcs", "sphere-stereo", "torus")


# Curves
def random_breaks(rng: np.random.Generator, domain: Interval, pieces: int) -> np.ndarray:
    inner = np.sort(rng.uniform(domain.lo, domain.hi, size=pieces - 1))
    breaks = np.unique(np.concatenate([[domain.lo], inner, [domain.hi]]))
    return breaks


def random_step(
        rng: np.random.Generator,
        domain: Optional[Interval] = None,
        dim: int = 1,
        pieces: Optional[int] = None,
        scale: float = 1.0
) -> StepCurve:
    domain = Interval.unit() if domain is None else domain
    pieces = int(rng.integers(1, 9)) if pieces is None else pieces
    breaks = random_breaks(rng, domain, pieces)
    return StepCurve(breaks, scale * rng.normal(size=(breaks.shape[0] - 1, dim)))


def random_regcurve(
        rng: np.random.Generator,
        order: int = 1,
        domain: Optional[Interval] = None,
        dim: int = 1,
        pieces: Optional[int] = None,
        mode: CurveMode = CurveMode.REGULATED
) -> RegCurve:
    domain = Interval.unit() if domain is None else domain

    if mode == CurveMode.CK:
        pieces = int(rng.integers(1, 9)) if pieces is None else pieces
        knots = random_breaks(rng, domain, pieces)
        return RegCurve.ck(rng.normal(size=(order, dim)), knots, rng.normal(size=(knots.shape[0], dim)))

    return RegCurve(rng.normal(size=(order, dim)), random_step(rng, domain, dim, pieces))


def random_subinterval(rng: np.random.Generator, domain: Optional[Interval] = None) -> Interval:
    domain = Interval.unit() if domain is None else domain

    while True:
        lo, hi = np.sort(rng.uniform(domain.lo, domain.hi, size=2))

        if hi - lo > 1e-6:
            return Interval(float(lo), float(hi))


# Paths
def _start(rng: np.random.Generator, name: str, dim: int) -> tuple[np.ndarray, list[str]]:
    """
    A start point (in the coordinates of the first listed chart) and the charts that hold a
    neighbourhood of it with room to spare
    """

    if name == "euclidean":
        return rng.uniform(-1.0, 1.0, size=dim), ["E"]

    if name == "sphere-stereo":
        direction = rng.normal(size=2)
        x = direction / np.linalg.norm(direction) * rng.uniform(0.9, 1.1)
        return x, ["N", "S"]

    if name in ("circle-two-arcs", "torus"):
        k = 1 if name == "circle-two-arcs" else 2
        theta = rng.uniform(-np.pi, np.pi, size=k)
        options = []

        for t in theta:
            fits = [c for c, (lo, hi) in ARCS.items() if min(angle_in_chart(t, c) - lo, hi - angle_in_chart(t, c)) > 0.1]
            options.append(fits)

        charts = ["".join(combo) for combo in _product(options)]
        return theta, charts

    raise UnknownBuiltinError(name, list(PATH_MANIFOLDS))


def _product(options: list[list[str]]) -> list[tuple[str, ...]]:
    out = [()]

    for fits in options:
        out = [prev + (c,) for prev in out for c in fits]

    return out


def _in_chart(name: str, x: np.ndarray, chart: str) -> np.ndarray:
    if name == "sphere-stereo":
        return x if chart == "N" else x / np.sum(x * x)

    if name in ("circle-two-arcs", "torus"):
        return np.array([angle_in_chart(t, c) for t, c in zip(x, chart)])

    return x


def random_system(rng: np.random.Generator, charts: list[str], pieces: Optional[int] = None) -> PathChartSystem:
    pieces = int(rng.integers(1, 5)) if pieces is None else pieces
    knots = random_breaks(rng, Interval.unit(), pieces)
    return PathChartSystem.make(knots, [str(rng.choice(charts)) for _ in range(knots.shape[0] - 1)])


def random_path(
        rng: np.random.Generator,
        name: str,
        pieces: Optional[int] = None,
        manifold: Optional[Manifold] = None
) -> ManifoldPath:
    """
    A slow random path on a builtin manifold with a random chart system
    """

    M = builtin(name) if manifold is None else manifold
    x, charts = _start(rng, name, M.dim)
    system = random_system(rng, charts, pieces)
    rep = PathRep(
        _in_chart(name, x, system.charts[0]),
        tuple(random_step(rng, piece, M.dim, scale=SPEED / 3) for piece in system.pieces())
    )
    return reconstruct(M, system, rep)


def random_lift(rng: np.random.Generator, bundle: BundleAtlas | str, path: Optional[ManifoldPath] = None) -> BundleLift:
    bundle = builtin(bundle) if isinstance(bundle, str) else bundle
    name = "euclidean" if bundle.base.name.startswith("euclidean") else bundle.base.name
    path = random_path(rng, name, manifold=bundle.base) if path is None else path
    fibers = tuple(random_step(rng, piece, bundle.rank) for piece in path.system.pieces())
    return BundleLift(bundle, path, fibers)


# Fixed scenarios
def moebius_loop(fiber: float = 1.0) -> BundleLift:
    """
    One turn around the circle: A from pi/2 to 3pi/4, B from 3pi/4 to 7pi/4, A from -pi/4
    to pi/2, at constant speed. The fiber coordinates are those of a section continuous
    along the loop, so they flip sign between the B piece and the last A piece
    """

    bundle = builtin("moebius-line-bundle")
    speed = 2 * np.pi
    system = PathChartSystem.make([0.0, 0.125, 0.625, 1.0], ["A", "B", "A"])
    rep = PathRep(
        [np.pi / 2],
        tuple(StepCurve.constant(piece, [speed]) for piece in system.pieces()),
        (
            StepCurve.constant(system.pieces()[0], [fiber]),
            StepCurve.constant(system.pieces()[1], [fiber]),
            StepCurve.constant(system.pieces()[2], [-fiber]),
        )
    )
    return lift_reconstruct(bundle, system, rep)
