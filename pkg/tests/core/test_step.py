import numpy as np
import pytest

from hypothesis import given, seed, settings
from hypothesis import strategies as st

from pathatlas.core import Interval, StepCurve, concat, norm, regularize, restrict
from pathatlas.errors import DimensionError, DomainError

from ..strategies import step_curves


def test_equal_adjacent_values_are_merged():
    c = StepCurve([0.0, 0.25, 0.5, 1.0], [[1.0], [1.0], [2.0]])

    assert c.n_pieces == 2
    assert c == StepCurve([0.0, 0.5, 1.0], [[1.0], [2.0]])


def test_evaluation_is_cadlag():
    c = StepCurve([0.0, 0.5, 1.0], [[1.0, 0.0], [2.0, 3.0]])

    assert np.array_equal(c(0.5), [2.0, 3.0])
    assert np.array_equal(c(1.0), [2.0, 3.0])
    assert np.array_equal(c.left_limit(0.5), [1.0, 0.0])
    assert np.array_equal(c.left_limit(0.0), [1.0, 0.0])
    assert np.array_equal(c.evaluate(np.array([0.0, 0.49, 0.5])), [[1.0, 0.0], [1.0, 0.0], [2.0, 3.0]])


def test_evaluation_outside_the_domain_raises():
    c = StepCurve.constant(Interval.unit(), [1.0])

    with pytest.raises(DomainError):
        c(1.5)


@pytest.mark.parametrize("breaks, values, error", [
    ([0.0], [[1.0]], DomainError),
    ([0.0, 0.5, 0.5, 1.0], [[1.0], [2.0], [3.0]], DomainError),
    ([0.0, 1.0], [[np.nan]], DomainError),
    ([0.0, 0.5, 1.0], [[1.0], [2.0], [3.0]], DimensionError),
])
def test_invalid_curves_are_rejected(breaks, values, error):
    with pytest.raises(error):
        StepCurve(breaks, values)


def test_integral_is_exact_and_oriented():
    c = StepCurve([0.0, 0.25, 1.0], [[2.0], [4.0]])

    assert c.integral()[0] == 3.5
    assert c.integral(1.0, 0.0)[0] == -3.5
    assert c.integral(0.0, 0.5)[0] == 1.5


def test_arithmetic_on_the_common_refinement():
    a = StepCurve([0.0, 0.5, 1.0], [[1.0], [2.0]])
    b = StepCurve([0.0, 0.25, 1.0], [[10.0], [20.0]])

    assert a + b == StepCurve([0.0, 0.25, 0.5, 1.0], [[11.0], [21.0], [22.0]])
    assert a - a == StepCurve.zero(Interval.unit(), 1)
    assert -a == a * -1.0
    assert 2.0 * a == StepCurve([0.0, 0.5, 1.0], [[2.0], [4.0]])


def test_arithmetic_needs_matching_domains():
    a = StepCurve.constant(Interval.unit(), [1.0])
    b = StepCurve.constant(Interval(0.0, 2.0), [1.0])

    with pytest.raises(DomainError):
        a + b


def test_regularize_drops_zero_length_pieces():
    c = regularize([0.0, 0.5, 0.5, 1.0], [[1.0], [2.0], [3.0]])

    assert c == StepCurve([0.0, 0.5, 1.0], [[1.0], [3.0]])


@seed(7)
@settings(max_examples=200, deadline=None)
@given(
    a=st.floats(min_value=0.05, max_value=0.95),
    data=st.data()
)
def test_concatenation_is_an_isometry(a, data):
    c1 = data.draw(step_curves(dim=2, domain=(0.0, a)))
    c2 = data.draw(step_curves(dim=2, domain=(a, 1.0)))
    c = concat(c1, c2)

    assert norm(c, 0) == max(norm(c1, 0), norm(c2, 0))
    assert restrict(c, c1.domain) == c1
    assert restrict(c, c2.domain) == c2
    assert np.array_equal(c(a), c2(a))


def test_concatenation_needs_adjacent_domains():
    c1 = StepCurve.constant(Interval(0.0, 0.4), [1.0])
    c2 = StepCurve.constant(Interval(0.5, 1.0), [1.0])

    with pytest.raises(DomainError):
        concat(c1, c2)
