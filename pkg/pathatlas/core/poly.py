"""
Polynomial helpers for the per-piece sup computations.

Coefficients are in the ascending power basis of the local variable s = t - anchor,
so `coeffs[m]` multiplies s**m. Roots of the derivative are taken in closed form up
to degree 2 (polynomials up to degree 3); above that they are isolated recursively
between the critical points of the derivative and refined by guarded bisection.
"""

import math

import numpy as np

from ..conf import conf


def horner(coeffs: np.ndarray, s: np.ndarray | float) -> np.ndarray:
    """
    Evaluates sum_m coeffs[m] * s**m; `coeffs` may carry trailing axes broadcasting against s
    """

    coeffs = np.asarray(coeffs, dtype=float)
    out = np.zeros(np.broadcast_shapes(np.shape(s), coeffs.shape[1:])) + coeffs[-1]

    for c in coeffs[-2::-1]:
        out = out * s + c

    return out


def derivative(coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)

    if coeffs.shape[0] <= 1:
        return np.zeros((1,) + coeffs.shape[1:])

    return coeffs[1:] * np.arange(1, coeffs.shape[0]).reshape((-1,) + (1,) * (coeffs.ndim - 1))


def _trim(coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    n = coeffs.shape[0]

    while n > 1 and coeffs[n - 1] == 0.0:
        n -= 1

    return coeffs[:n]


def _bisect(coeffs: np.ndarray, a: float, b: float) -> float:
    fa = float(horner(coeffs, a))

    for _ in range(conf.numerics.bisection_iters):
        m = 0.5 * (a + b)

        if m <= a or m >= b:
            break

        fm = float(horner(coeffs, m))

        if fm == 0.0:
            return m

        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m

    return 0.5 * (a + b)


def roots_in(coeffs: np.ndarray, lo: float, hi: float) -> list[float]:
    """
    Real roots of a scalar polynomial inside the open interval (lo, hi), sorted
    """

    c = _trim(coeffs)
    deg = c.shape[0] - 1

    if deg <= 0:
        return []

    if deg == 1:
        roots = [-c[0] / c[1]]

    elif deg == 2:
        a, b, k = c[2], c[1], c[0]
        disc = b * b - 4.0 * a * k

        if disc < 0:
            return []

        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        roots = [q / a] + ([k / q] if q != 0.0 else [])

    else:
        # between consecutive critical points the polynomial is monotone
        marks = [lo] + roots_in(derivative(c), lo, hi) + [hi]
        roots = []

        for a, b in zip(marks, marks[1:]):
            fa, fb = float(horner(c, a)), float(horner(c, b))

            if fa == 0.0:
                roots.append(a)
            elif (fa > 0) != (fb > 0) and fb != 0.0:
                roots.append(_bisect(c, a, b))

    return sorted(r for r in roots if lo < r < hi)


def value_range(coeffs: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Exact min and max over s in [0, h] of each coordinate polynomial; `coeffs` has shape (deg + 1, d)
    """

    coeffs = np.asarray(coeffs, dtype=float)

    if coeffs.ndim == 1:
        coeffs = coeffs[:, None]

    lows, highs = [], []

    for i in range(coeffs.shape[1]):
        c = coeffs[:, i]
        candidates = [0.0, h] + roots_in(derivative(c), 0.0, h)
        values = horner(c, np.asarray(candidates))
        lows.append(float(np.min(values)))
        highs.append(float(np.max(values)))

    return np.asarray(lows), np.asarray(highs)


def sup_abs(coeffs: np.ndarray, h: float) -> float:
    """
    Max over s in [0, h] and over coordinates of |p_i(s)|
    """

    coeffs = np.asarray(coeffs, dtype=float)

    if coeffs.shape[0] <= 2:
        return float(np.max(np.abs(horner(coeffs, np.array([0.0, h])[:, None]))))

    lows, highs = value_range(coeffs, h)
    return float(max(np.max(np.abs(lows)), np.max(np.abs(highs))))
