"""
Builtin manifolds and bundles.

Chart ids: euclidean "E"; circle arcs "A" (angles in (-pi, pi)) and "B" (angles in (0, 2pi));
sphere stereographic charts "N" (from the north pole) and "S", both restricted to the
disk of radius 2; torus charts "AA", "AB", "BA", "BB" (one circle arc per factor).
"""

import itertools

from typing import Callable

import numpy as np

from ..errors import UnknownBuiltinError
from .manifold import BundleAtlas, Manifold
from .smooth import Region, SmoothMap

PI = np.pi
ARCS = {"A": (-PI, PI), "B": (0.0, 2 * PI)}


# Coordinate helpers
def chart_to_sphere(x, chart: str) -> np.ndarray:
    """
    Inverse stereographic projection of chart N (from the north pole) or S
    """

    x = np.asarray(x, dtype=float)
    r2 = np.sum(x * x, axis=-1, keepdims=True)
    height = (r2 - 1.0) if chart == "N" else (1.0 - r2)
    return np.concatenate([2.0 * x, height], axis=-1) / (r2 + 1.0)


def sphere_to_chart(p, chart: str) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    denom = (1.0 - p[..., 2:]) if chart == "N" else (1.0 + p[..., 2:])
    return p[..., :2] / denom


def angle_in_chart(theta, chart: str) -> np.ndarray:
    """
    The representative of an angle inside the given arc chart
    """

    lo, _ = ARCS[chart]
    theta = np.asarray(theta, dtype=float)
    turns = np.floor((theta - lo) / (2 * PI))
    return theta - turns * (2 * PI)


def _inversion(x: np.ndarray) -> np.ndarray:
    return x / np.sum(x * x, axis=-1, keepdims=True)


def _inversion_jacobian(x: np.ndarray) -> np.ndarray:
    r2 = np.sum(x * x, axis=-1)[..., None, None]
    eye = np.eye(x.shape[-1])
    return (eye * r2 - 2.0 * x[..., :, None] * x[..., None, :]) / r2 ** 2


def _arc_overlap(chart: str) -> Region:
    lo, hi = ARCS[chart]
    mid = 0.5 * (lo + hi)
    return Region.union(Region.interval(lo, mid), Region.interval(mid, hi))


# Manifolds
def euclidean(dim: int = 2, radius: float | None = None) -> Manifold:
    region = Region.ball(np.zeros(dim), radius) if radius else Region.whole(dim, extent=10.0)
    return Manifold(f"euclidean-{dim}", dim, {"E": region}, {})


def circle_two_arcs() -> Manifold:
    charts = {chart: Region.interval(lo, hi) for chart, (lo, hi) in ARCS.items()}
    transitions = {
        (i, j): SmoothMap(1, 1, lambda x, j=j: angle_in_chart(x, j), _arc_overlap(i), jac=lambda x: np.ones(x.shape + (1,)),
                          hess=lambda x: np.zeros(x.shape + (1, 1)), name=f"{i}->{j}")
        for i, j in itertools.permutations(ARCS, 2)
    }

    return Manifold("circle-two-arcs", 1, charts, transitions)


def sphere_stereo() -> Manifold:
    charts = {"N": Region.ball([0.0, 0.0], 2.0), "S": Region.ball([0.0, 0.0], 2.0)}
    overlap = Region.annulus([0.0, 0.0], 0.5, 2.0)
    transitions = {
        (i, j): SmoothMap(2, 2, _inversion, overlap, jac=_inversion_jacobian, name=f"{i}->{j}")
        for i, j in (("N", "S"), ("S", "N"))
    }

    return Manifold("sphere-stereo", 2, charts, transitions)


def torus() -> Manifold:
    names = ["".join(pair) for pair in itertools.product(ARCS, repeat=2)]
    charts = {name: Region.product(Region.interval(*ARCS[name[0]]), Region.interval(*ARCS[name[1]])) for name in names}
    transitions = {}

    for i, j in itertools.permutations(names, 2):
        factors = [
            Region.interval(*ARCS[a]) if a == b else _arc_overlap(a)
            for a, b in zip(i, j)
        ]

        def func(x, j=j):
            return np.stack([angle_in_chart(x[..., k], j[k]) for k in range(2)], axis=-1)

        transitions[(i, j)] = SmoothMap(
            2, 2, func, Region.product(*factors),
            jac=lambda x: np.broadcast_to(np.eye(2), x.shape[:-1] + (2, 2)).copy(),
            hess=lambda x: np.zeros(x.shape[:-1] + (2, 2, 2)), name=f"{i}->{j}"
        )

    return Manifold("torus", 2, charts, transitions)


MANIFOLDS: dict[str, Callable[..., Manifold]] = {
    "euclidean": euclidean,
    "circle-two-arcs": circle_two_arcs,
    "sphere-stereo": sphere_stereo,
    "torus": torus,
}


# Bundles
def trivial_bundle(base: str = "euclidean", rank: int = 1, **base_params) -> BundleAtlas:
    return BundleAtlas.trivial(builtin(base, **base_params), rank)


def tangent_bundle(base: str = "sphere-stereo", **base_params) -> BundleAtlas:
    return BundleAtlas.tangent(builtin(base, **base_params))


def moebius_line_bundle() -> BundleAtlas:
    """
    The Moebius line bundle over the two-arc circle: the A -> B cocycle is +1 on the upper
    overlap arc (0, pi) and -1 on the lower arc
    """

    base = circle_two_arcs()

    def a_to_b(x):
        return np.where(x[..., :1] > 0, 1.0, -1.0)[..., None]

    def b_to_a(x):
        return np.where(x[..., :1] < PI, 1.0, -1.0)[..., None]

    return BundleAtlas("moebius-line-bundle", base, 1, {("A", "B"): a_to_b, ("B", "A"): b_to_a})


BUNDLES: dict[str, Callable[..., BundleAtlas]] = {
    "trivial-bundle": trivial_bundle,
    "tangent-bundle": tangent_bundle,
    "moebius-line-bundle": moebius_line_bundle,
}


def known() -> list[str]:
    return list(MANIFOLDS) + list(BUNDLES)


def builtin(name: str, **params) -> Manifold | BundleAtlas:
    """
    A catalog manifold or bundle by name, e.g. builtin("euclidean", dim=3, radius=2.0)
    """

    factory = MANIFOLDS.get(name) or BUNDLES.get(name)

    if factory is None:
        raise UnknownBuiltinError(name, known())

    return factory(**params)
