import numpy as np
import pytest

from pathatlas.atlas import Point, builtin
from pathatlas.core import StepCurve, primitive
from pathatlas.corpus import PATH_MANIFOLDS, random_path
from pathatlas.errors import ChartEscapeError, DomainError
from pathatlas.pathspace import (
    PathChartSystem, PathRep, assemble, chart_map, constant_rep, disassemble, evaluate_lift, evaluate_path,
    lift_chart_map, lift_reconstruct, linearized_reconstruct, reconstruct, transported_endpoint
)


@pytest.mark.parametrize("name", PATH_MANIFOLDS)
def test_chart_map_and_reconstruct_are_inverse(rng, name):
    for _ in range(5):
        p = random_path(rng, name)
        rep = chart_map(p)
        q = reconstruct(p.manifold, p.system, rep)

        assert q == p
        assert chart_map(q) == rep


def test_lift_chart_map_round_trip(loop):
    rep = lift_chart_map(loop)

    assert rep.is_lift
    assert lift_reconstruct(loop.bundle, loop.system, rep) == loop


def test_fast_pieces_escape_their_chart():
    M = builtin("euclidean", dim=2, radius=1.0)
    system = PathChartSystem.single("E")
    rep = PathRep([0.0, 0.0], (StepCurve.constant(system.pieces()[0], [5.0, 0.0]),))

    with pytest.raises(ChartEscapeError) as e:
        reconstruct(M, system, rep)

    assert e.value.piece == 0
    assert e.value.chart == "E"


def test_junctions_outside_the_overlap_escape(sphere):
    system = PathChartSystem.make([0.0, 0.5, 1.0], ["N", "S"])

    with pytest.raises(ChartEscapeError) as e:
        reconstruct(sphere, system, constant_rep(system, [0.1, 0.0]))

    assert e.value.piece == 0
    assert e.value.time == 0.5


def test_reps_must_match_the_system(sphere):
    rep = constant_rep(PathChartSystem.single("N"), [1.0, 0.0])

    with pytest.raises(DomainError):
        reconstruct(sphere, PathChartSystem.make([0.0, 0.5, 1.0], ["N", "N"]), rep)


def test_assemble_and_disassemble(sphere_path):
    rep = chart_map(sphere_path)
    curve = assemble(rep)

    assert curve.order == 1
    assert np.array_equal(curve.jet[0], rep.x)
    assert disassemble(curve, sphere_path.system) == rep

    with pytest.raises(DomainError):
        disassemble(curve.base, sphere_path.system)


def test_evaluation_at_knots_takes_the_right_piece(sphere_path):
    system = sphere_path.system

    for i, t in enumerate(system.knots[:-1]):
        p = evaluate_path(sphere_path, t)

        assert p.chart == system.charts[i]
        assert np.array_equal(p.coords, sphere_path.curves[i].jet[0])

    end = evaluate_path(sphere_path, 1.0)
    assert end.chart == system.charts[-1]
    assert np.allclose(end.coords, sphere_path.endpoint(system.n_pieces - 1), rtol=0, atol=1e-15)


def test_evaluate_lift(loop):
    point, fiber = evaluate_lift(loop, 0.5)

    assert point.chart == "B"
    assert point.coords == pytest.approx([3 * np.pi / 4 + np.pi * 0.75])
    assert np.array_equal(fiber, [1.5])


def test_linearized_reconstruct_in_one_chart(rng):
    p = random_path(rng, "euclidean")

    assert linearized_reconstruct(p, chart_map(p)) == list(p.curves)


def test_linearized_reconstruct_matches_finite_differences(rng, sphere_path):
    M, system = sphere_path.manifold, sphere_path.system
    rep = chart_map(sphere_path)
    drep = PathRep(
        0.1 * rng.normal(size=2),
        tuple(StepCurve.constant(piece, 0.1 * rng.normal(size=2)) for piece in system.pieces())
    )

    eps = 1e-6
    moved = reconstruct(M, system, rep + drep * eps)
    linear = linearized_reconstruct(sphere_path, drep)

    for i, curve in enumerate(linear):
        quotient = (moved.curves[i].jet[0] - sphere_path.curves[i].jet[0]) / eps
        assert np.allclose(quotient, curve.jet[0], rtol=0, atol=1e-4)


def test_loop_returns_to_its_start(loop):
    end = transported_endpoint(loop.base, "A")

    assert end.chart == "A"
    assert end.coords == pytest.approx([np.pi / 2], abs=1e-12)
    assert transported_endpoint(loop.base).chart == "A"


def test_constant_reps():
    system = PathChartSystem.make([0.0, 0.5, 1.0], ["N", "S"])
    rep = constant_rep(system, [1.0, 2.0], rank=1)

    assert rep.is_lift
    assert rep.matches(system)
    assert all(y.sup_norm() == 0.0 for y in rep.pieces + rep.fibers)


def test_constant_rep_reconstructs_to_a_constant_path(sphere):
    system = PathChartSystem.make([0.0, 0.5, 1.0], ["N", "S"])
    p = reconstruct(sphere, system, constant_rep(system, [1.0, 0.0]))

    assert evaluate_path(p, 0.75) == Point("S", [1.0, 0.0])
    assert p.curves[0] == primitive(StepCurve.zero(system.pieces()[0], 2), [1.0, 0.0])
