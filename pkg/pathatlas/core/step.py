from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import DimensionError, DomainError
from ..helpers import frozen
from .interval import Interval


def _as_values(values, n: int) -> np.ndarray:
    arr = np.array(values, dtype=float)

    if arr.ndim == 1:
        arr = arr.reshape(n, -1) if n and arr.size == n else arr.reshape(1, -1)

    if arr.ndim != 2 or arr.shape[0] != n:
        raise DimensionError(f"Expected {n} piece values, got an array of shape {np.shape(values)}")

    return arr


class StepCurve:
    """
    A strong regulated piecewise-constant curve in R^d.

    `values[j]` holds on [breaks[j], breaks[j+1]); the last value also holds at the right
    endpoint. Instances are canonical: adjacent values always differ, so structural
    equality is equality of curves.
    """

    __slots__ = ("_breaks", "_values")

    def __init__(self, breaks: Sequence[float], values) -> None:
        breaks = np.array(breaks, dtype=float).reshape(-1)
        n = breaks.shape[0] - 1

        if n < 1:
            raise DomainError("A step curve needs at least two breakpoints")

        if not np.all(np.isfinite(breaks)) or np.any(np.diff(breaks) <= 0):
            raise DomainError(f"Breakpoints must be finite and strictly increasing: {breaks}")

        values = _as_values(values, n)

        if values.shape[1] < 1:
            raise DimensionError("A step curve needs dimension >= 1")

        if not np.all(np.isfinite(values)):
            raise DomainError("Step values must be finite")

        keep = np.ones(n, dtype=bool)
        keep[1:] = np.any(values[1:] != values[:-1], axis=1)

        self._breaks = frozen(np.append(breaks[:-1][keep], breaks[-1]))
        self._values = frozen(values[keep])

    # Constructors
    @classmethod
    def constant(cls, domain: Interval, value) -> "StepCurve":
        value = np.array(value, dtype=float).reshape(1, -1)
        return cls([domain.lo, domain.hi], value)

    @classmethod
    def zero(cls, domain: Interval, dim: int) -> "StepCurve":
        return cls([domain.lo, domain.hi], np.zeros((1, dim)))

    # Views
    @property
    def breaks(self) -> np.ndarray:
        return self._breaks

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def domain(self) -> Interval:
        return Interval(self._breaks[0], self._breaks[-1])

    @property
    def dim(self) -> int:
        return self._values.shape[1]

    @property
    def n_pieces(self) -> int:
        return self._values.shape[0]

    @property
    def order(self) -> int:
        return 0

    def piece_index(self, t) -> np.ndarray | int:
        """
        Piece holding t under the cadlag convention (the last piece holds the right endpoint)
        """

        self.domain.check(t)
        idx = np.searchsorted(self._breaks, t, side="right") - 1
        idx = np.clip(idx, 0, self.n_pieces - 1)
        return int(idx) if np.ndim(idx) == 0 else idx

    def __call__(self, t):
        return self.evaluate(t)

    def evaluate(self, t) -> np.ndarray:
        return self._values[self.piece_index(t)]

    def left_limit(self, t) -> np.ndarray:
        """
        lim_{s -> t-} c(s); at the left endpoint this is the value there
        """

        self.domain.check(t)
        idx = np.searchsorted(self._breaks, t, side="left") - 1
        return self._values[np.clip(idx, 0, self.n_pieces - 1)]

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self._values)))

    def integral(self, a: Optional[float] = None, b: Optional[float] = None) -> np.ndarray:
        """
        Exact integral over [a, b] (oriented; defaults to the whole domain)
        """

        lo = self._breaks[0] if a is None else float(a)
        hi = self._breaks[-1] if b is None else float(b)

        if hi < lo:
            return -self.integral(hi, lo)

        self.domain.check(np.array([lo, hi]))
        left = np.maximum(self._breaks[:-1], lo)
        right = np.minimum(self._breaks[1:], hi)
        lengths = np.clip(right - left, 0.0, None)

        return lengths @ self._values

    def sample_on(self, breaks: np.ndarray) -> np.ndarray:
        """
        Values on the cells of a refining breakpoint array (value of each cell's left endpoint)
        """

        return self._values[self.piece_index(np.asarray(breaks)[:-1])]

    def map_values(self, func: Callable[[np.ndarray], np.ndarray]) -> "StepCurve":
        return StepCurve(self._breaks, func(self._values))

    # Arithmetic
    def _combine(self, other: "StepCurve", op) -> "StepCurve":
        if not isinstance(other, StepCurve):
            return NotImplemented

        if self.domain != other.domain:
            raise DomainError(f"Domains differ: {self.domain} and {other.domain}")

        if self.dim != other.dim:
            raise DimensionError(f"Dimensions differ: {self.dim} and {other.dim}")

        breaks = np.union1d(self._breaks, other._breaks)
        return StepCurve(breaks, op(self.sample_on(breaks), other.sample_on(breaks)))

    def __add__(self, other: "StepCurve") -> "StepCurve":
        return self._combine(other, np.add)

    def __sub__(self, other: "StepCurve") -> "StepCurve":
        return self._combine(other, np.subtract)

    def __neg__(self) -> "StepCurve":
        return StepCurve(self._breaks, -self._values)

    def __mul__(self, scalar: float) -> "StepCurve":
        return StepCurve(self._breaks, float(scalar) * self._values)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepCurve):
            return NotImplemented

        return (
            self._breaks.shape == other._breaks.shape
            and self._values.shape == other._values.shape
            and bool(np.all(self._breaks == other._breaks))
            and bool(np.all(self._values == other._values))
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"StepCurve(breaks={self._breaks.tolist()}, values={self._values.tolist()})"


def regularize(breaks: Sequence[float], values) -> StepCurve:
    """
    The strong regulated representative of a piecewise-constant regulated curve given on a
    nondecreasing breakpoint list; zero-length pieces carry no information and are dropped
    """

    breaks = np.array(breaks, dtype=float).reshape(-1)
    values = _as_values(values, breaks.shape[0] - 1)
    keep = np.diff(breaks) > 0

    if not np.any(keep):
        raise DomainError("All pieces have zero length")

    kept = np.append(breaks[:-1][keep], breaks[-1])
    return StepCurve(kept, values[keep])
