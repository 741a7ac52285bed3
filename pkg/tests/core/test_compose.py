import numpy as np
import pytest

from hypothesis import given, seed, settings

from pathatlas.atlas import Region, SmoothMap
from pathatlas.core import (
    Interval, RegCurve, SmoothScalarRepar, StepCurve, change_of_variables, check_image, compose_grid, compose_smooth,
    integrate, norm, primitive, refinement_grid, reparametrize
)
from pathatlas.conf import conf
from pathatlas.errors import BudgetError, DomainError, OrderError
from pathatlas.helpers import sup_norm

from ..strategies import order1_curves


def _square() -> SmoothMap:
    return SmoothMap(1, 1, lambda x: x ** 2, Region.whole(1), jac=lambda x: 2.0 * x[..., None], name="square")


@seed(17)
@settings(max_examples=50, deadline=None)
@given(c=order1_curves(dim=2))
def test_affine_composition_is_exact_up_to_rounding(c):
    A = np.array([[1.0, 2.0], [0.0, -1.0]])
    b = np.array([0.5, 0.25])
    f = SmoothMap.affine(A, b, Region.whole(2))

    out = compose_smooth(f, c, 1e-8)
    times = np.union1d(np.linspace(0.0, 1.0, 33), c.base.breaks)
    expected = c.evaluate(times) @ A.T + b

    assert out.order == 1
    assert np.allclose(out.evaluate(times), expected, rtol=0, atol=1e-11 * (1.0 + norm(c, 1)))


def test_composition_with_a_square_meets_the_tolerance():
    tol = 1e-4
    c = primitive(StepCurve.constant(Interval.unit(), [1.0]), [0.5])
    out = compose_smooth(_square(), c, tol)
    times = np.linspace(0.0, 1.0, 2001)

    # (0.5 + t)^2 and its derivative 1 + 2t
    assert out.jet[0][0] == 0.25
    assert sup_norm(out.evaluate(times, 1)[:, 0] - (1.0 + 2.0 * times)) <= tol
    assert sup_norm(out.evaluate(times)[:, 0] - (0.5 + times) ** 2) <= tol


def test_composition_needs_order_at_most_two():
    c = RegCurve([[0.0], [0.0], [0.0]], StepCurve.constant(Interval.unit(), [1.0]))

    with pytest.raises(OrderError):
        compose_smooth(_square(), c, 1e-4)


def test_composition_checks_the_image():
    f = SmoothMap(1, 1, lambda x: x ** 2, Region.interval(0.0, 1.0), jac=lambda x: 2.0 * x[..., None])
    c = primitive(StepCurve.constant(Interval.unit(), [1.0]), [0.5])

    with pytest.raises(DomainError):
        check_image(f, c)

    with pytest.raises(DomainError):
        compose_smooth(f, c, 1e-4)


def test_step_curves_are_mapped_value_by_value():
    c = StepCurve([0.0, 0.5, 1.0], [[2.0], [-3.0]])

    assert compose_smooth(_square(), c, 1e-4) == StepCurve([0.0, 0.5, 1.0], [[4.0], [9.0]])


def test_refinement_grid_keeps_the_breaks_and_respects_the_budget():
    breaks = np.array([0.0, 0.5, 1.0])
    grid = refinement_grid(breaks, lambda t, pieces: t[:, None], 0.01)

    assert grid[0] == 0.0 and grid[-1] == 1.0
    assert 0.5 in grid
    assert np.all(np.diff(grid) > 0)

    with pytest.raises(BudgetError):
        refinement_grid(breaks, lambda t, pieces: 1e9 * t[:, None], 1e-6)


def test_refinement_grid_survives_subnormal_pieces():
    breaks = np.array([0.0, 5e-324, 1.0])
    grid = refinement_grid(breaks, lambda t, pieces: np.ones((t.shape[0], 1)), 1e-6)

    assert np.array_equal(grid, breaks)

    grid = refinement_grid(breaks, lambda t, pieces: t[:, None], 0.01)
    assert grid[0] == 0.0 and grid[1] == 5e-324 and grid[-1] == 1.0
    assert np.all(np.diff(grid) > 0)


def test_unbounded_targets_exhaust_the_budget():
    with pytest.raises(BudgetError):
        refinement_grid(np.array([0.0, 1.0]), lambda t, pieces: (1.0 / t)[:, None], 1e-6)


def test_square_of_the_identity_at_a_fine_tolerance():
    tol = 1e-6
    f = SmoothMap(
        1, 1, lambda x: x ** 2, Region.whole(1),
        jac=lambda x: 2.0 * x[..., None], hess=lambda x: np.full(x.shape[:-1] + (1, 1, 1), 2.0), name="square"
    )
    c = primitive(StepCurve.constant(Interval.unit(), [1.0]), [0.0])

    grid = compose_grid(f, c, tol)
    assert grid.shape[0] - 1 <= conf.numerics.max_cells

    out = compose_smooth(f, c, tol, grid=grid)
    times = np.linspace(0.0, 1.0, 4001)

    assert sup_norm(out.evaluate(times, 1)[:, 0] - 2.0 * times) <= 1.000001 * tol
    assert sup_norm(out.evaluate(times)[:, 0] - times ** 2) <= tol


def test_change_of_variables_for_a_piecewise_linear_map():
    phi = SmoothScalarRepar.certify(primitive(StepCurve([0.0, 0.5, 1.0], [[1.0], [2.0]]), [0.0]))
    c = StepCurve([0.0, 0.3, 1.0, 2.0], [[1.0], [2.0], [-1.0]])

    lhs = change_of_variables(c, phi)
    rhs = integrate(c, 0.0, 1.5)

    assert lhs[0] == pytest.approx(1.2, abs=1e-12)
    assert lhs[0] == pytest.approx(rhs[0], abs=1e-12)
    assert change_of_variables(c, phi, 1.0, 0.0)[0] == pytest.approx(-1.2, abs=1e-12)


def test_change_of_variables_for_a_smooth_map():
    # phi(r) = r + r^2 / 2 maps [0, 1] onto [0, 1.5]
    phi = SmoothScalarRepar.certify(RegCurve([[0.0], [1.0]], StepCurve.constant(Interval.unit(), [1.0])))
    c = StepCurve([0.0, 0.7, 2.0], [[1.0], [-2.0]])

    assert not phi.is_piecewise_linear
    assert change_of_variables(c, phi)[0] == pytest.approx(-0.9, abs=1e-9)


def test_change_of_variables_rejects_escaping_images():
    phi = SmoothScalarRepar.certify(primitive(StepCurve.constant(Interval.unit(), [3.0]), [0.0]))

    with pytest.raises(DomainError):
        change_of_variables(StepCurve.constant(Interval(0.0, 2.0), [1.0]), phi)


def test_reparametrization_moves_the_breaks():
    c = StepCurve([0.0, 1.0, 2.0], [[1.0], [3.0]])
    phi = SmoothScalarRepar.certify(primitive(StepCurve.constant(Interval.unit(), [2.0]), [0.0]))

    assert reparametrize(c, phi) == StepCurve([0.0, 0.5, 1.0], [[1.0], [3.0]])
