import numpy as np
import pytest

from pathatlas.core import StepCurve
from pathatlas.corpus import random_path
from pathatlas.errors import CoverError, DomainError
from pathatlas.lifts import Deformation, deformation_tangent, transport_deformation
from pathatlas.pathspace import (
    PathChartSystem, PathRep, assemble, chart_map, lift_chart_map, lift_reconstruct, plan_transition, reconstruct
)


def _direction(rng, system: PathChartSystem, dim: int) -> PathRep:
    return PathRep(
        rng.normal(size=dim),
        tuple(StepCurve.constant(piece, rng.normal(size=dim)) for piece in system.pieces())
    )


def test_linear_deformations_have_their_direction_as_tangent(rng):
    p = random_path(rng, "euclidean")
    M, system, rep = p.manifold, p.system, chart_map(p)
    V = _direction(rng, system, 2)

    D = Deformation(lambda eps: reconstruct(M, system, rep + V * eps), 0.1)
    field = deformation_tangent(D)
    times = np.linspace(0.0, 1.0, 101)

    assert field.theta is None
    assert np.allclose(field.phi.evaluate(times), assemble(V).evaluate(times), rtol=0, atol=1e-9)


def test_lift_deformations_carry_a_fiber_part(loop):
    rep = lift_chart_map(loop)
    D = Deformation(lambda eps: lift_reconstruct(loop.bundle, loop.system, rep * (1.0 + eps)), 0.01)
    field = deformation_tangent(D)

    assert field.theta is not None
    assert field.theta.sup_norm() == pytest.approx(1.5, abs=1e-9)
    assert field.phi(0.0)[0] == pytest.approx(np.pi / 2, abs=1e-9)
    assert field.phi(1.0)[0] == pytest.approx(np.pi / 2 + 2 * np.pi, abs=1e-8)


def test_deformations_are_checked(rng, sphere_path):
    M, rep = sphere_path.manifold, chart_map(sphere_path)
    D = Deformation(lambda eps: reconstruct(M, sphere_path.system, rep), 0.1)

    assert D(0.0) is D.base

    with pytest.raises(DomainError):
        D(0.2)

    with pytest.raises(DomainError):
        deformation_tangent(D, h=1.0)

    other = random_path(rng, "sphere-stereo", pieces=sphere_path.system.n_pieces + 1)
    jumping = Deformation(lambda eps: sphere_path if eps == 0.0 else other, 0.1)

    with pytest.raises(CoverError):
        jumping(0.05)


def test_transported_deformations_change_system(rng, sphere_path):
    M, rep = sphere_path.manifold, chart_map(sphere_path)
    V = _direction(rng, sphere_path.system, 2) * 0.01
    D = Deformation(lambda eps: reconstruct(M, sphere_path.system, rep + V * eps), 0.1)

    target = PathChartSystem.make([0.0, 0.5, 1.0], ["S", "N"])
    moved = transport_deformation(D, plan_transition(M, sphere_path.system, target, rep, 1e-7))

    assert moved(0.0).system == target
    assert moved(0.05).system == target

    unrelated = plan_transition(M, target, target, chart_map(moved.base), 1e-7)

    if target != sphere_path.system:
        with pytest.raises(CoverError):
            transport_deformation(D, unrelated)
