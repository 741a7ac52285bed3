import numpy as np
import pytest

from hypothesis import given, seed, settings

from pathatlas.core import (
    Interval, RegCurve, SmoothScalarRepar, StepCurve, derivative_split, make_curve, norm, primitive
)
from pathatlas.errors import CertificateError, OrderError
from pathatlas.helpers import sup_norm
from pathatlas.objects import CurveMode

from ..strategies import order1_curves


def test_primitive_of_a_constant():
    c = primitive(StepCurve.constant(Interval.unit(), [2.0]), [1.0])

    assert c.order == 1
    assert c(0.5)[0] == 2.0
    assert c.evaluate(0.5, 1)[0] == 2.0
    assert c(1.0)[0] == 3.0


def test_order_two_evaluation():
    # t + t^2
    c = RegCurve([[0.0], [1.0]], StepCurve.constant(Interval.unit(), [2.0]))

    assert c.order == 2
    assert c(0.5)[0] == 0.75
    assert c.evaluate(0.5, 1)[0] == 2.0
    assert c.evaluate(0.5, 2)[0] == 2.0


def test_vectorised_evaluation_matches_pointwise():
    c = RegCurve([[0.0, 1.0], [1.0, -1.0]], StepCurve([0.0, 0.3, 1.0], [[2.0, 0.0], [-1.0, 4.0]]))
    times = np.linspace(0.0, 1.0, 11)

    stacked = c.evaluate(times)
    assert stacked.shape == (11, 2)

    for t, value in zip(times, stacked):
        assert np.allclose(c(t), value, rtol=0, atol=1e-14)


def test_levels_above_the_order_raise():
    c = primitive(StepCurve.constant(Interval.unit(), [1.0]), [0.0])

    with pytest.raises(OrderError):
        c.evaluate(0.5, 2)

    with pytest.raises(OrderError):
        derivative_split(StepCurve.constant(Interval.unit(), [1.0]))


def test_empty_jet():
    base = StepCurve.constant(Interval.unit(), [1.0])

    assert make_curve([], base) is base

    with pytest.raises(OrderError):
        RegCurve(np.empty((0, 1)), base)


def test_ck_mode_has_a_continuous_top():
    c = RegCurve.ck([[0.0]], [0.0, 0.5, 1.0], [0.0, 1.0, 0.0])

    assert c.mode == CurveMode.CK
    assert c.order == 1
    assert c.depth == 2
    assert c.is_continuous_top
    assert c.evaluate(0.5, 1)[0] == 1.0
    assert c(1.0)[0] == pytest.approx(0.5, abs=1e-15)
    assert norm(c, 1) == 1.0


def test_norm_takes_the_max_over_levels():
    c = primitive(StepCurve([0.0, 0.5, 1.0], [[1.0], [-3.0]]), [0.0])

    assert norm(c, 0) == 1.0
    assert norm(c, 1) == 3.0
    assert norm(c) == 3.0


def test_sup_of_a_quadratic_piece_is_found_inside():
    # -t + t^2 has its extremum -1/4 at t = 1/2
    c = RegCurve([[0.0], [-1.0]], StepCurve.constant(Interval.unit(), [2.0]))

    assert norm(c, 0) == pytest.approx(0.25, abs=1e-15)


@seed(11)
@settings(max_examples=200, deadline=None)
@given(c=order1_curves())
def test_derivative_split_inverts_primitive(c):
    x, u = derivative_split(c)
    back = primitive(u, x)

    assert back == c
    assert max(sup_norm(x), norm(u, 0)) <= 2.0 * norm(c, 1)
    assert norm(back, 1) <= (1.0 + c.domain.length) * (sup_norm(x) + norm(u, 0))


def test_monotonicity_certificate():
    increasing = primitive(StepCurve([0.0, 0.5, 1.0], [[0.5], [2.0]]), [0.0])
    phi = SmoothScalarRepar.certify(increasing)

    assert phi.sign == 1
    assert phi.bound == 0.5
    assert phi.is_piecewise_linear
    assert phi.image() == Interval(0.0, 1.25)

    decreasing = SmoothScalarRepar.certify(primitive(StepCurve.constant(Interval.unit(), [-1.0]), [1.0]))
    assert decreasing.sign == -1

    with pytest.raises(CertificateError):
        SmoothScalarRepar.certify(primitive(StepCurve([0.0, 0.5, 1.0], [[1.0], [-1.0]]), [0.0]))

    with pytest.raises(CertificateError):
        SmoothScalarRepar.certify(StepCurve.constant(Interval.unit(), [1.0]))


def test_forged_certificates_are_rejected():
    tent = primitive(StepCurve([0.0, 0.5, 1.0], [[1.0], [-1.0]]), [0.0])

    with pytest.raises(CertificateError):
        SmoothScalarRepar(tent, 1, 0.5)

    with pytest.raises(CertificateError):
        SmoothScalarRepar(tent, -1, 0.5)

    increasing = primitive(StepCurve([0.0, 0.5, 1.0], [[0.5], [2.0]]), [0.0])

    with pytest.raises(CertificateError):
        SmoothScalarRepar(increasing, 1, 1.0)

    assert SmoothScalarRepar(increasing, 1, 0.25).bound == 0.25
