import math

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import CertificateError, DimensionError, OrderError
from ..helpers import frozen
from ..objects import CurveMode
from . import poly
from .interval import Interval
from .step import StepCurve


class RegCurve:
    """
    A k-regulated curve in R^d, stored as the jet at the left endpoint plus a step curve
    `base` that is integrated `depth` times.

    In regulated mode depth == k and `base` is the top derivative c^(k). In C^k mode the
    top derivative is continuous piecewise-linear, so depth == k + 1 and `base` is the
    derivative of the top; the jet then also carries the top's initial value.
    """

    __slots__ = ("_jet", "_base", "_mode", "_nodes")

    def __init__(self, jet, base: StepCurve, mode: CurveMode = CurveMode.REGULATED) -> None:
        jet = np.array(jet, dtype=float)

        if jet.ndim == 1:
            jet = jet.reshape(-1, base.dim) if base.dim > 1 or jet.size == 0 else jet.reshape(-1, 1)

        if jet.ndim != 2 or (jet.shape[0] and jet.shape[1] != base.dim):
            raise DimensionError(f"Jet of shape {jet.shape} does not match a base of dimension {base.dim}")

        if jet.shape[0] < 1:
            raise OrderError("A RegCurve needs at least one jet entry; use StepCurve for order 0")

        self._jet = frozen(jet)
        self._base = base
        self._mode = CurveMode(mode)
        self._nodes = frozen(self._propagate())

    @classmethod
    def ck(cls, jet, knots: Sequence[float], node_values) -> "RegCurve":
        """
        A C^k curve from its lower jet and a continuous piecewise-linear top derivative given at `knots`
        """

        knots = np.asarray(knots, dtype=float)
        node_values = np.array(node_values, dtype=float)

        if node_values.ndim == 1:
            node_values = node_values[:, None]

        slopes = np.diff(node_values, axis=0) / np.diff(knots)[:, None]
        jet = np.array(jet, dtype=float).reshape(-1, node_values.shape[1])
        return cls(np.vstack([jet, node_values[:1]]), StepCurve(knots, slopes), CurveMode.CK)

    def _propagate(self) -> np.ndarray:
        """
        Values of the derivative levels 0..depth-1 at every breakpoint of the base
        """

        K, d = self._jet.shape
        breaks, values = self._base.breaks, self._base.values
        h = np.diff(breaks)

        if K == 1:
            steps = values * h[:, None]
            nodes = np.concatenate([self._jet[None, 0], self._jet[None, 0] + np.cumsum(steps, axis=0)])
            return nodes[:, None, :]

        nodes = np.empty((breaks.shape[0], K, d))
        nodes[0] = self._jet

        for j, hj in enumerate(h):
            for level in range(K):
                nodes[j + 1, level] = poly.horner(self._coefficients(nodes[j], values[j], level), hj)

        return nodes

    def _coefficients(self, node: np.ndarray, value: np.ndarray, level: int) -> np.ndarray:
        K = self._jet.shape[0]
        deg = K - level
        coeffs = np.empty((deg + 1,) + node.shape[1:])

        for m in range(deg):
            coeffs[m] = node[level + m] / math.factorial(m)

        coeffs[deg] = value / math.factorial(deg)
        return coeffs

    # Views
    @property
    def jet(self) -> np.ndarray:
        return self._jet

    @property
    def base(self) -> StepCurve:
        return self._base

    @property
    def mode(self) -> CurveMode:
        return self._mode

    @property
    def depth(self) -> int:
        return self._jet.shape[0]

    @property
    def order(self) -> int:
        return self.depth if self._mode == CurveMode.REGULATED else self.depth - 1

    @property
    def dim(self) -> int:
        return self._base.dim

    @property
    def domain(self) -> Interval:
        return self._base.domain

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes

    @property
    def top(self) -> "StepCurve | RegCurve":
        """
        The top derivative: a step curve in regulated mode, a continuous piecewise-linear curve in C^k mode
        """

        if self._mode == CurveMode.REGULATED:
            return self._base

        return RegCurve(self._jet[-1:], self._base)

    @property
    def is_continuous_top(self) -> bool:
        return self._mode == CurveMode.CK

    # Evaluation
    def evaluate(self, t, level: int = 0, piece=None) -> np.ndarray:
        """
        The `level`-th derivative at t (scalar or array). `piece` forces the polynomial piece used,
        which gives one-sided values at breakpoints
        """

        if level < 0 or level > self.order:
            raise OrderError(f"Derivative order {level} requested from a curve of order {self.order}")

        if level == self.depth:
            return self._base.evaluate(t)

        t = np.asarray(t, dtype=float)
        idx = self._base.piece_index(t) if piece is None else np.asarray(piece)

        if piece is not None:
            self.domain.check(t)

        s = t - self._base.breaks[idx]
        node = self._nodes[idx]
        value = self._base.values[idx]
        coeffs = self._coefficients(np.moveaxis(node, -2, 0), value, level) if node.ndim == 3 else \
            self._coefficients(node, value, level)

        if node.ndim == 3:
            return poly.horner(coeffs, s[:, None])

        return poly.horner(coeffs, s)

    def __call__(self, t, level: int = 0) -> np.ndarray:
        return self.evaluate(t, level)

    def piece_coefficients(self, j: int, level: int) -> np.ndarray:
        """
        Ascending power coefficients of the `level`-th derivative on base piece j, shape (deg + 1, d)
        """

        return self._coefficients(self._nodes[j], self._base.values[j], level)

    def level_sup(self, level: int) -> float:
        """
        Exact sup over the domain of |c^(level)| in the max-coordinate norm
        """

        if level == self.depth:
            return self._base.sup_norm()

        if self.depth - level == 1:
            return float(np.max(np.abs(self._nodes[:, level])))

        h = np.diff(self._base.breaks)
        return max(poly.sup_abs(self.piece_coefficients(j, level), hj) for j, hj in enumerate(h))

    def level_range(self, level: int) -> tuple[np.ndarray, np.ndarray]:
        """
        Coordinatewise min and max of c^(level) over the domain
        """

        if level == self.depth:
            values = self._base.values
            return values.min(axis=0), values.max(axis=0)

        h = np.diff(self._base.breaks)
        ranges = [poly.value_range(self.piece_coefficients(j, level), hj) for j, hj in enumerate(h)]
        return np.min([r[0] for r in ranges], axis=0), np.max([r[1] for r in ranges], axis=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegCurve):
            return NotImplemented

        return (
            self._mode == other._mode
            and self._jet.shape == other._jet.shape
            and bool(np.all(self._jet == other._jet))
            and self._base == other._base
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"RegCurve(order={self.order}, mode={self._mode}, jet={self._jet.tolist()}, base={self._base!r})"


Curve = StepCurve | RegCurve


def make_curve(jet, base: StepCurve, mode: CurveMode = CurveMode.REGULATED) -> Curve:
    """
    A curve of the given jet over `base`; an empty jet in regulated mode is the base itself
    """

    if len(jet) == 0:
        if mode != CurveMode.REGULATED:
            raise OrderError("A C^k curve needs the initial value of its top derivative")

        return base

    return RegCurve(jet, base, mode)


@dataclass(frozen=True)
class SmoothScalarRepar:
    """
    A scalar curve of order >= 1 with a strict monotonicity certificate:
    sign * phi' >= bound > 0 on the whole domain
    """

    curve: RegCurve
    sign: int
    bound: float

    def __post_init__(self) -> None:
        if self.curve.dim != 1 or self.curve.order < 1:
            raise CertificateError("A reparametrization must be a scalar curve of order >= 1")

        if self.sign not in (-1, 1) or not self.bound > 0:
            raise CertificateError(f"Invalid monotonicity certificate (sign={self.sign}, bound={self.bound})")

        low, high = self.curve.level_range(1)
        worst = float(low[0]) if self.sign > 0 else -float(high[0])

        if worst < self.bound:
            raise CertificateError(
                f"Certificate sign={self.sign}, bound={self.bound} does not hold: "
                f"derivative range is [{float(low[0])}, {float(high[0])}]"
            )

    @classmethod
    def certify(cls, curve: RegCurve) -> "SmoothScalarRepar":
        if not isinstance(curve, RegCurve) or curve.dim != 1 or curve.order < 1:
            raise CertificateError("Only scalar curves of order >= 1 can be certified monotone")

        low, high = curve.level_range(1)
        low, high = float(low[0]), float(high[0])

        if low > 0:
            return cls(curve, 1, low)

        if high < 0:
            return cls(curve, -1, -high)

        raise CertificateError(f"Derivative range [{low}, {high}] contains zero; not strictly monotone")

    @property
    def domain(self) -> Interval:
        return self.curve.domain

    @property
    def is_piecewise_linear(self) -> bool:
        return self.curve.depth == 1

    def __call__(self, s) -> np.ndarray:
        return self.curve.evaluate(s)[..., 0]

    def image(self) -> Interval:
        a = float(self(self.domain.lo))
        b = float(self(self.domain.hi))
        return Interval(min(a, b), max(a, b))
