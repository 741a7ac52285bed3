import numpy as np
import pytest

from hypothesis import given, seed, settings
from hypothesis import strategies as st

from pathatlas.core import (
    Interval, StepCurve, image_net, integrate, linear_push, norm, primitive, reparametrize_affine,
    restrict, step_approximate
)
from pathatlas.errors import BudgetError, DomainError
from pathatlas.helpers import sup_norm

from ..strategies import matrices, order1_curves, order2_curves, step_curves, subintervals


def test_restriction_of_a_step_curve_takes_the_left_limit_at_the_end():
    c = StepCurve([0.0, 0.5, 1.0], [[1.0], [2.0]])

    assert restrict(c, Interval(0.25, 0.5)) == StepCurve([0.25, 0.5], [[1.0]])
    assert restrict(c, Interval(0.5, 0.75)) == StepCurve([0.5, 0.75], [[2.0]])
    assert restrict(c, Interval(0.25, 0.75)) == StepCurve([0.25, 0.5, 0.75], [[1.0], [2.0]])


def test_restriction_outside_the_domain_raises():
    with pytest.raises(DomainError):
        restrict(StepCurve.constant(Interval.unit(), [1.0]), Interval(0.5, 1.5))


@seed(3)
@settings(max_examples=200, deadline=None)
@given(k=st.integers(0, 2), data=st.data())
def test_restriction_is_a_contraction(k, data):
    c = data.draw([step_curves, order1_curves, order2_curves][k]())
    J = data.draw(subintervals())
    full = norm(c, k)

    slack = 0.0 if k == 0 else 1e-12 * full
    assert norm(restrict(c, J), k) <= full + slack


@seed(5)
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_linear_maps_commute_with_integration(data):
    c = data.draw(step_curves(dim=2))
    A = data.draw(matrices(3, 2))
    x0 = np.array([0.5, -1.0])

    lhs = linear_push(A, primitive(c, x0))
    rhs = primitive(linear_push(A, c), A @ x0)
    times = np.union1d(np.linspace(0.0, 1.0, 17), c.breaks)

    assert np.allclose(lhs.evaluate(times), rhs.evaluate(times), rtol=0, atol=1e-12 * (1.0 + norm(lhs, 1)))


def test_integrate_any_order():
    c = primitive(StepCurve.constant(Interval.unit(), [2.0]), [1.0])

    # int_0^1 (1 + 2t) dt
    assert integrate(c)[0] == pytest.approx(2.0, abs=1e-15)
    assert integrate(StepCurve([0.0, 0.5, 1.0], [[1.0], [3.0]]), 0.25, 0.75)[0] == 1.0


def test_affine_reparametrization():
    c = primitive(StepCurve([0.0, 0.5, 1.0], [[1.0], [3.0]]), [0.0])
    moved = reparametrize_affine(c, Interval(2.0, 4.0))

    assert moved.domain == Interval(2.0, 4.0)
    assert moved(3.0)[0] == pytest.approx(c(0.5)[0], abs=1e-15)
    assert moved(4.0)[0] == pytest.approx(c(1.0)[0], abs=1e-15)
    assert moved.evaluate(3.5, 1)[0] == pytest.approx(c.evaluate(0.75, 1)[0] / 2.0)


@seed(13)
@settings(max_examples=50, deadline=None)
@given(c=order1_curves(), eps=st.floats(min_value=0.05, max_value=0.5))
def test_image_net_covers_the_image(c, eps):
    net = image_net(c, eps)
    points = c.evaluate(np.linspace(0.0, 1.0, 257))

    gaps = np.max(np.abs(points[:, None, :] - net[None, :, :]), axis=-1)
    assert np.max(np.min(gaps, axis=1)) <= eps


def test_image_net_of_a_step_curve_is_its_value_set():
    c = StepCurve([0.0, 0.5, 1.0], [[1.0, 2.0], [3.0, 4.0]])

    assert np.array_equal(image_net(c, 0.1), [[1.0, 2.0], [3.0, 4.0]])


def test_image_net_respects_the_budget():
    fast = primitive(StepCurve.constant(Interval.unit(), [1e6]), [0.0])

    with pytest.raises(BudgetError):
        image_net(fast, 1e-6)


@pytest.mark.parametrize("lipschitz", [1.0, None])
def test_step_approximation_of_a_callable(lipschitz):
    eps = 1e-3
    approx = step_approximate(np.sin, eps, Interval.unit(), lipschitz)
    times = np.linspace(0.0, 1.0, 1001)

    assert sup_norm(approx.evaluate(times)[:, 0] - np.sin(times)) <= eps


def test_step_approximation_of_a_curve():
    c = primitive(StepCurve([0.0, 0.5, 1.0], [[1.0], [-2.0]]), [0.0])
    approx = step_approximate(c, 1e-3)
    times = np.linspace(0.0, 1.0, 1001)

    assert sup_norm(approx.evaluate(times) - c.evaluate(times)) <= 1e-3
