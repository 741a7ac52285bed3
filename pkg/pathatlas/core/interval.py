import math

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class Interval:
    """
    A compact time interval [lo, hi] with lo < hi
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))

        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"Interval bounds must be finite, got [{self.lo}, {self.hi}]")

        if not self.lo < self.hi:
            raise DomainError(f"Degenerate interval [{self.lo}, {self.hi}]")

    @classmethod
    def unit(cls) -> "Interval":
        return cls(0.0, 1.0)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, t: float) -> bool:
        return self.lo <= t <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        """
        The intersection as an interval, None when it has no interior
        """

        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo < hi else None

    def check(self, t: float | np.ndarray) -> None:
        t = np.asarray(t, dtype=float)

        if t.size and (np.min(t) < self.lo or np.max(t) > self.hi or not np.all(np.isfinite(t))):
            bad = t[(t < self.lo) | (t > self.hi) | ~np.isfinite(t)].reshape(-1)[0]
            raise DomainError(f"t={bad!r} is outside the domain [{self.lo}, {self.hi}]")

    def as_list(self) -> list[float]:
        return [self.lo, self.hi]


@dataclass(frozen=True)
class Partition:
    """
    A nondecreasing knot sequence tau_0 <= ... <= tau_n spanning an interval
    """

    interval: Interval
    knots: tuple[float, ...]

    def __post_init__(self) -> None:
        knots = tuple(float(k) for k in self.knots)
        object.__setattr__(self, "knots", knots)

        if len(knots) < 2:
            raise DomainError("A partition needs at least two knots")

        if knots[0] != self.interval.lo or knots[-1] != self.interval.hi:
            raise DomainError(
                f"Partition endpoints {knots[0]}, {knots[-1]} do not match [{self.interval.lo}, {self.interval.hi}]"
            )

        if any(a > b for a, b in zip(knots, knots[1:])):
            raise DomainError(f"Partition knots must be nondecreasing: {knots}")

    @classmethod
    def from_knots(cls, knots: Sequence[float]) -> "Partition":
        knots = [float(k) for k in knots]
        return cls(Interval(knots[0], knots[-1]), tuple(knots))

    @classmethod
    def uniform(cls, interval: Interval, n: int) -> "Partition":
        knots = np.linspace(interval.lo, interval.hi, n + 1)
        knots[0], knots[-1] = interval.lo, interval.hi
        return cls(interval, tuple(knots))

    @property
    def is_strict(self) -> bool:
        return all(a < b for a, b in zip(self.knots, self.knots[1:]))

    @property
    def n_pieces(self) -> int:
        return len(self.knots) - 1

    def strict(self) -> "Partition":
        """
        The same partition with duplicate knots collapsed
        """

        knots = [self.knots[0]]

        for k in self.knots[1:]:
            if k > knots[-1]:
                knots.append(k)

        return Partition(self.interval, tuple(knots))

    def pieces(self) -> list[Interval]:
        knots = self.strict().knots
        return [Interval(a, b) for a, b in zip(knots, knots[1:])]

    def locate(self, t: float) -> int:
        """
        Index of the piece holding t: [tau_{i-1}, tau_i) selects piece i, the right endpoint selects the last piece
        """

        self.interval.check(t)
        knots = self.strict().knots
        i = int(np.searchsorted(knots, t, side="right")) - 1
        return min(max(i, 0), len(knots) - 2)

    def refine(self, other: "Partition") -> "Partition":
        """
        Common refinement of two strict partitions of the same interval
        """

        if self.interval != other.interval:
            raise DomainError(f"Cannot refine partitions of {self.interval} and {other.interval}")

        knots = np.union1d(np.asarray(self.knots), np.asarray(other.knots))
        return Partition(self.interval, tuple(knots))

    def as_list(self) -> list[float]:
        return list(self.knots)
