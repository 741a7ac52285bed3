import numpy as np
import pytest

from pathatlas.atlas import Manifold, Point, Region, builtin
from pathatlas.atlas.catalog import sphere_to_chart
from pathatlas.core import StepCurve
from pathatlas.errors import CoverError, NotInteriorError
from pathatlas.objects import Membership
from pathatlas.pathspace import (
    BundleLift, PathChartSystem, PathRep, chart_map, evaluate_path, find_chart_system, in_neighborhood,
    openness_certificate, openness_margin, reconstruct
)


def _segment(radius: float):
    """
    (0, 0) -> (0.5, 0) in a disk of the given radius
    """

    M = builtin("euclidean", dim=2, radius=radius)
    system = PathChartSystem.single("E")
    rep = PathRep([0.0, 0.0], (StepCurve.constant(system.pieces()[0], [0.5, 0.0]),))
    return reconstruct(M, system, rep)


def test_margin_of_a_segment():
    certificate = openness_certificate(_segment(2.0))

    # ball margins are measured in the max norm: (R - r) / (2 sqrt(2)) in the plane
    assert certificate.eta == pytest.approx(1.5 / np.sqrt(2.0) / 2.0, abs=1e-12)
    assert certificate.amplification == (2.0,)
    assert certificate.rhos == ()
    assert openness_margin(_segment(2.0)) == certificate.eta


@pytest.mark.parametrize("R, x, y", [(1.0, -0.3, 0.6), (2.0, 0.5, -1.0), (1.0, 0.0, 0.25)])
def test_margin_on_a_line_is_half_the_clearance(R, x, y):
    M = builtin("euclidean", dim=1, radius=R)
    system = PathChartSystem.single("E")
    p = reconstruct(M, system, PathRep([x], (StepCurve.constant(system.pieces()[0], [y]),)))
    r = max(abs(x), abs(x + y))

    assert openness_margin(p) >= (R - r) / 2


def test_margin_on_a_line_survives_a_thousand_perturbations(rng):
    M = builtin("euclidean", dim=1, radius=1.0)
    system = PathChartSystem.make([0.0, 0.5, 1.0], ["E", "E"])
    pieces = (StepCurve.constant(system.pieces()[0], [0.6]), StepCurve.constant(system.pieces()[1], [-1.0]))
    p = reconstruct(M, system, PathRep([-0.2], pieces))
    size = 0.99 * openness_margin(p)
    base = chart_map(p)

    for _ in range(1000):
        x = rng.uniform(-size, size, size=1)
        moved = tuple(y.map_values(lambda v: size * rng.uniform(-1.0, 1.0, size=v.shape)) for y in base.pieces)
        reconstruct(M, system, base + PathRep(x, moved))


def test_unbounded_charts_have_an_infinite_margin():
    M = builtin("euclidean", dim=2)
    system = PathChartSystem.make([0.0, 0.4, 1.0], ["E", "E"])
    pieces = (StepCurve.constant(system.pieces()[0], [1.0, 0.0]), StepCurve.constant(system.pieces()[1], [0.0, 3.0]))
    certificate = openness_certificate(reconstruct(M, system, PathRep([0.0, 0.0], pieces)))

    assert certificate.lipschitz == (1.0,)
    assert certificate.eta == np.inf


def test_perturbations_within_the_margin_reconstruct(rng, sphere_path):
    for p in (_segment(2.0), sphere_path):
        eta = openness_margin(p)
        size = 0.99 * min(eta, 1.0)
        base = chart_map(p)

        for _ in range(25):
            x = rng.uniform(-size, size, size=p.dim)
            pieces = tuple(y.map_values(lambda v: size * rng.uniform(-1.0, 1.0, size=v.shape)) for y in base.pieces)
            reconstruct(p.manifold, p.system, base + PathRep(x, pieces))


def test_certificate_payload(sphere_path):
    payload = openness_certificate(sphere_path).payload()

    assert list(payload) == ["eta", "deltas", "rhos", "lipschitz", "amplification"]
    assert len(payload["deltas"]) == sphere_path.system.n_pieces
    assert len(payload["rhos"]) == sphere_path.system.n_pieces - 1


def test_paths_too_close_to_the_boundary_are_not_interior():
    # an annulus margin is not concave, so the image net and its slack decide
    outer = 1.5 + 1.5e-3 * np.sqrt(2.0)
    M = Manifold("annulus", 2, {"A": Region.annulus([0.0, 0.0], 0.5, outer)}, {})
    system = PathChartSystem.single("A")
    p = reconstruct(M, system, PathRep([1.0, 0.0], (StepCurve.constant(system.pieces()[0], [0.5, 0.0]),)))

    with pytest.raises(NotInteriorError):
        openness_certificate(p)


def _lift():
    p = _segment(2.0)
    bundle = builtin("trivial-bundle", base="euclidean", rank=1, dim=2, radius=2.0)
    return BundleLift(bundle, p, (StepCurve.constant(p.system.pieces()[0], [1.0]),))


@pytest.mark.parametrize("K, V, expected", [
    ([(0.0, 1.0)], Region.ball([0.0, 0.0], 1.0), Membership.INSIDE),
    ([(0.0, 1.0)], Region.ball([0.0, 0.0], 0.4), Membership.OUTSIDE),
    ([(0.0, 0.1)], Region.ball([0.0, 0.0], 0.4), Membership.INSIDE),
    ([(0.5, 0.5)], Region.ball([0.0, 0.0], 0.4), Membership.INSIDE),
    ([(1.0, 1.0)], Region.ball([0.0, 0.0], 0.4), Membership.OUTSIDE),
    ([(0.0, 1.0)], Region.ball([0.0, 0.0], 0.5005), Membership.INDETERMINATE),
])
def test_neighborhood_membership(K, V, expected):
    U = Region.whole(3)
    W = Region.whole(4)

    assert in_neighborhood(_lift(), K, U, V, W) == expected


def test_neighborhood_regions_per_chart():
    V = Region.whole(2)
    W = {"E": Region.cube([0.0, 0.0, 0.5, 0.0], 1.0)}

    assert in_neighborhood(_lift(), [(0.0, 1.0)], {"E": Region.cube([0.0, 0.0, 1.0], 1.0)}, V, W) == Membership.INSIDE
    assert in_neighborhood(_lift(), [(0.0, 1.0)], {"E": Region.cube([0.0, 0.0, 3.0], 1.0)}, V, W) == Membership.OUTSIDE


def test_chart_cover_of_a_loop(loop):
    M = loop.base.manifold
    samples = [(float(t), evaluate_path(loop.base, float(t))) for t in np.linspace(0.0, 1.0, 201)]
    system = find_chart_system(M, samples)

    assert system.knots[0] == 0.0 and system.knots[-1] == 1.0
    assert system.n_pieces >= 2

    for t, p in samples:
        chart = system.charts[system.locate(t)]
        assert M.region(chart).contains(M.convert_point(p, chart).coords)


def test_chart_cover_of_a_great_circle_arc(sphere):
    angles = np.pi * np.linspace(0.1, 0.9, 201)
    on_sphere = np.stack([np.sin(angles), np.zeros_like(angles), -np.cos(angles)], axis=-1)
    samples = [(float(t), Point("N", sphere_to_chart(p, "N"))) for t, p in zip(np.linspace(0.0, 1.0, 201), on_sphere)]

    system = find_chart_system(sphere, samples)

    assert system.n_pieces == 2
    assert system.charts == ("N", "S")
    assert 0.24 < system.knots[1] < 0.76


def test_chart_cover_errors(sphere):
    with pytest.raises(CoverError):
        find_chart_system(sphere, [(0.0, Point("N", [1.0, 0.0]))])

    with pytest.raises(CoverError) as e:
        find_chart_system(sphere, [(0.0, Point("N", [1.0, 0.0])), (1.0, Point("N", [2.5, 0.0]))])

    assert e.value.time == 1.0
