import numpy as np
import pytest

from pathatlas.atlas import BundleAtlas
from pathatlas.core import Interval, StepCurve
from pathatlas.corpus import random_regcurve, random_step
from pathatlas.errors import DimensionError, DomainError
from pathatlas.lifts import (
    build_trivialization, holonomy, represent_section, section_pieces, tangent_trivialization, transport
)


def test_moebius_loop_has_holonomy_minus_one(loop):
    triv = build_trivialization(loop.base, loop.bundle)

    assert np.array_equal(triv.frames, [[[1.0]], [[1.0]], [[-1.0]]])
    assert np.array_equal(holonomy(triv), [[-1.0]])
    assert triv.kappa() == 1.0


def test_continuous_sections_glue_to_constants(loop):
    triv = build_trivialization(loop.base, loop.bundle)

    assert represent_section(triv, list(loop.fibers)) == StepCurve.constant(Interval.unit(), [1.5])


def test_trivial_bundles_have_identity_frames(sphere_path):
    triv = build_trivialization(sphere_path, BundleAtlas.trivial(sphere_path.manifold, 2))

    assert all(np.array_equal(C, np.eye(2)) for C in triv.frames)
    assert triv.kappa() == 1.0


def test_transport_is_a_groupoid(rng, sphere_path):
    triv = tangent_trivialization(sphere_path)
    bound = 1e-12 * triv.kappa() ** 2

    for _ in range(20):
        r, s, t = rng.uniform(0.0, 1.0, size=3)

        assert np.array_equal(transport(triv, t, t), np.eye(2))
        assert np.allclose(transport(triv, t, r) @ transport(triv, s, t), transport(triv, s, r), rtol=0, atol=bound)
        assert np.allclose(transport(triv, s, t) @ transport(triv, t, s), np.eye(2), rtol=0, atol=bound)


def test_initial_frames_multiply_from_the_left(sphere_path):
    F = np.array([[2.0, 1.0], [0.0, 1.0]])
    plain = tangent_trivialization(sphere_path)
    shifted = tangent_trivialization(sphere_path, F)

    assert np.allclose(shifted.frames, F @ plain.frames, rtol=1e-12, atol=1e-12)
    assert np.allclose(transport(shifted, 0.0, 1.0), transport(plain, 0.0, 1.0), rtol=1e-10, atol=1e-12)


def test_restricted_frames_start_at_the_identity(sphere_path):
    triv = tangent_trivialization(sphere_path)
    last = triv.n_pieces - 1
    frames = triv.restrict_to(last, last)

    assert frames.shape == (1, 2, 2)
    assert np.allclose(frames[0], np.eye(2), rtol=0, atol=1e-12)
    assert np.allclose(triv.restrict_to(0, last), triv.frames, rtol=0, atol=1e-12)


def test_restriction_forgets_the_initial_frame(sphere_path, loop):
    F = np.array([[2.0, 1.0], [0.0, 1.0]])
    plain = tangent_trivialization(sphere_path)
    shifted = tangent_trivialization(sphere_path, F)
    last = plain.n_pieces - 1

    for first in range(last + 1):
        frames = shifted.restrict_to(first, last)

        assert frames.shape == (last - first + 1, 2, 2)
        assert np.allclose(frames[0], np.eye(2), rtol=0, atol=1e-12)
        assert np.allclose(frames, plain.restrict_to(first, last), rtol=0, atol=1e-10)

    triv = build_trivialization(loop.base, loop.bundle)

    assert np.array_equal(triv.restrict_to(1, 2), [[[1.0]], [[-1.0]]])
    assert np.array_equal(triv.restrict_to(2, 2), [[[1.0]]])


def test_sections_round_trip(rng, sphere_path):
    triv = tangent_trivialization(sphere_path)
    times = np.linspace(0.0, 1.0, 101)

    w = random_step(rng, dim=2)
    assert np.allclose(represent_section(triv, section_pieces(triv, w)).evaluate(times), w.evaluate(times), rtol=0, atol=1e-12)

    w = random_regcurve(rng, 1, dim=2)
    back = represent_section(triv, section_pieces(triv, w))
    assert back.order == 1
    assert np.allclose(back.evaluate(times), w.evaluate(times), rtol=0, atol=1e-12)


def test_sections_must_fit_the_path(sphere_path):
    triv = tangent_trivialization(sphere_path)

    with pytest.raises(DimensionError):
        represent_section(triv, [StepCurve.zero(Interval.unit(), 2)] * (triv.n_pieces + 1))

    with pytest.raises(DimensionError):
        represent_section(triv, [StepCurve.zero(piece, 3) for piece in sphere_path.system.pieces()])


def test_holonomy_needs_a_closed_path(sphere_path):
    with pytest.raises(DomainError):
        holonomy(tangent_trivialization(sphere_path))


def test_bundle_must_sit_over_the_path(loop, sphere_path):
    with pytest.raises(DomainError):
        build_trivialization(sphere_path, loop.bundle)
