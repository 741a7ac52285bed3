from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ..conf import conf
from ..errors import DimensionError, DomainError
from ..log import Logger

logger = Logger.ATLAS

Margin = Callable[[np.ndarray], np.ndarray]


def _points(x, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)

    if x.shape[-1:] != (dim,):
        if dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., None]
        else:
            raise DimensionError(f"Expected points of dimension {dim}, got an array of shape {x.shape}")

    return x


@dataclass(frozen=True)
class Region:
    """
    An open subset of R^dim described by a margin: a 1-Lipschitz (max norm) lower bound on
    the distance to the complement, positive exactly on points known to be inside. `box`
    bounds the region for sampling. A `concave` margin attains its minimum over a segment at
    an endpoint, so polygonal curves can be checked at their vertices.
    """

    dim: int
    margin_fn: Margin = field(repr=False, compare=False)
    box: tuple[tuple[float, ...], tuple[float, ...]]
    name: str = ""
    concave: bool = field(default=False, compare=False)

    def margin(self, x) -> np.ndarray:
        return np.asarray(self.margin_fn(_points(x, self.dim)), dtype=float)

    def contains(self, x) -> np.ndarray | bool:
        inside = self.margin(x) > 0

        return bool(inside) if np.ndim(inside) == 0 else inside

    def sample(self, rng: np.random.Generator, n: int, min_margin: float = 0.0) -> np.ndarray:
        """
        n uniform points of the box with margin > min_margin (rejection sampling)
        """

        lo, hi = np.asarray(self.box[0]), np.asarray(self.box[1])
        out = np.empty((0, self.dim))
        tries = 0

        while out.shape[0] < n:
            batch = rng.uniform(lo, hi, size=(max(2 * n, 64), self.dim))
            out = np.vstack([out, batch[self.margin(batch) > min_margin]])
            tries += 1

            if tries > 1000:
                raise DomainError(f"Could not sample {n} points of region '{self.name}'")

        return out[:n]

    # Constructors
    @classmethod
    def whole(cls, dim: int, extent: float = 1.0) -> "Region":
        return cls(
            dim, lambda x: np.full(x.shape[:-1], np.inf),
            ((-extent,) * dim, (extent,) * dim), f"R^{dim}", concave=True
        )

    @classmethod
    def cube(cls, center: Sequence[float], half: float) -> "Region":
        c = np.asarray(center, dtype=float)
        return cls(
            c.shape[0], lambda x: half - np.max(np.abs(x - c), axis=-1),
            (tuple(c - half), tuple(c + half)), f"cube({c.tolist()}, {half})", concave=True
        )

    @classmethod
    def ball(cls, center: Sequence[float], radius: float) -> "Region":
        """
        Euclidean ball; its margin is (R - |x - c|_2) / sqrt(dim)
        """

        c = np.asarray(center, dtype=float)
        root = np.sqrt(c.shape[0])
        return cls(
            c.shape[0], lambda x: (radius - np.linalg.norm(x - c, axis=-1)) / root,
            (tuple(c - radius), tuple(c + radius)), f"ball({c.tolist()}, {radius})", concave=True
        )

    @classmethod
    def annulus(cls, center: Sequence[float], inner: float, outer: float) -> "Region":
        c = np.asarray(center, dtype=float)
        root = np.sqrt(c.shape[0])

        def margin(x):
            r = np.linalg.norm(x - c, axis=-1)
            return np.minimum(outer - r, r - inner) / root

        return cls(c.shape[0], margin, (tuple(c - outer), tuple(c + outer)), f"annulus({c.tolist()}, {inner}, {outer})")

    @classmethod
    def interval(cls, lo: float, hi: float) -> "Region":
        return cls(1, lambda x: np.minimum(x[..., 0] - lo, hi - x[..., 0]), ((lo,), (hi,)), f"({lo}, {hi})", concave=True)

    @classmethod
    def union(cls, *regions: "Region") -> "Region":
        dim = regions[0].dim
        lo = np.min([r.box[0] for r in regions], axis=0)
        hi = np.max([r.box[1] for r in regions], axis=0)
        return cls(
            dim, lambda x: np.max([r.margin(x) for r in regions], axis=0),
            (tuple(lo), tuple(hi)), " | ".join(r.name for r in regions)
        )

    @classmethod
    def intersection(cls, *regions: "Region") -> "Region":
        dim = regions[0].dim
        lo = np.max([r.box[0] for r in regions], axis=0)
        hi = np.min([r.box[1] for r in regions], axis=0)
        return cls(
            dim, lambda x: np.min([r.margin(x) for r in regions], axis=0),
            (tuple(lo), tuple(hi)), " & ".join(r.name for r in regions),
            concave=all(r.concave for r in regions)
        )

    @classmethod
    def product(cls, *regions: "Region") -> "Region":
        dims = [r.dim for r in regions]
        cuts = np.cumsum([0] + dims)

        def margin(x):
            return np.min([r.margin(x[..., a:b]) for r, a, b in zip(regions, cuts, cuts[1:])], axis=0)

        lo = tuple(v for r in regions for v in r.box[0])
        hi = tuple(v for r in regions for v in r.box[1])
        return cls(sum(dims), margin, (lo, hi), " x ".join(r.name for r in regions), concave=all(r.concave for r in regions))


@dataclass(frozen=True)
class SmoothMap:
    """
    A smooth map from an open region of R^dim_in to R^dim_out.

    `func`, `jac` and `hess` take arrays of shape (..., dim_in). Missing derivatives are
    replaced by central differences with step h = fd-step * (1 + |x|), accuracy order 2.
    """

    dim_in: int
    dim_out: int
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    domain: Region = field(repr=False, compare=False)
    jac: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False, compare=False)
    hess: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False, compare=False)
    name: str = ""

    @classmethod
    def identity(cls, domain: Region) -> "SmoothMap":
        dim = domain.dim
        return cls(
            dim, dim, lambda x: np.array(x, dtype=float), domain,
            jac=lambda x: np.broadcast_to(np.eye(dim), x.shape[:-1] + (dim, dim)).copy(),
            hess=lambda x: np.zeros(x.shape[:-1] + (dim, dim, dim)),
            name="id"
        )

    @classmethod
    def affine(cls, A, b, domain: Region) -> "SmoothMap":
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.asarray(b, dtype=float).reshape(-1)
        out, dim = A.shape
        return cls(
            dim, out, lambda x: x @ A.T + b, domain,
            jac=lambda x: np.broadcast_to(A, x.shape[:-1] + A.shape).copy(),
            hess=lambda x: np.zeros(x.shape[:-1] + (out, dim, dim)),
            name="affine"
        )

    def _step(self, x: np.ndarray) -> np.ndarray:
        return conf.numerics.fd_step * (1.0 + np.max(np.abs(x), axis=-1, keepdims=True))

    def __call__(self, x) -> np.ndarray:
        x = _points(x, self.dim_in)
        return np.asarray(self.func(x), dtype=float).reshape(x.shape[:-1] + (self.dim_out,))

    def margin(self, x) -> np.ndarray:
        return self.domain.margin(x)

    def jacobian(self, x) -> np.ndarray:
        x = _points(x, self.dim_in)

        if self.jac is not None:
            return np.asarray(self.jac(x), dtype=float).reshape(x.shape[:-1] + (self.dim_out, self.dim_in))

        return self.fd_jacobian(x)

    def fd_jacobian(self, x) -> np.ndarray:
        x = _points(x, self.dim_in)
        h = self._step(x)
        cols = []

        for k in range(self.dim_in):
            e = np.zeros(self.dim_in)
            e[k] = 1.0
            cols.append((self(x + h * e) - self(x - h * e)) / (2.0 * h))

        return np.stack(cols, axis=-1)

    def second(self, x) -> np.ndarray:
        """
        Second derivative, shape (..., dim_out, dim_in, dim_in)
        """

        x = _points(x, self.dim_in)

        if self.hess is not None:
            return np.asarray(self.hess(x), dtype=float).reshape(x.shape[:-1] + (self.dim_out, self.dim_in, self.dim_in))

        h = self._step(x)[..., None]
        slices = []

        for k in range(self.dim_in):
            e = np.zeros(self.dim_in)
            e[k] = 1.0
            slices.append((self.jacobian(x + h[..., 0] * e) - self.jacobian(x - h[..., 0] * e)) / (2.0 * h))

        return np.stack(slices, axis=-1)

    def then(self, other: "SmoothMap") -> "SmoothMap":
        """
        other o self on self's domain
        """

        if other.dim_in != self.dim_out:
            raise DimensionError(f"Cannot compose R^{self.dim_out} with a map from R^{other.dim_in}")

        def jac(x):
            return np.einsum("...ij,...jk->...ik", other.jacobian(self(x)), self.jacobian(x))

        return SmoothMap(self.dim_in, other.dim_out, lambda x: other(self(x)), self.domain, jac=jac,
                         name=f"{other.name} o {self.name}")

    def check_jacobian(self, rng: np.random.Generator, n: int) -> float:
        """
        Largest relative gap between the Jacobian and central differences on n domain samples
        """

        x = self.domain.sample(rng, n, min_margin=1e-3)
        exact, approx = self.jacobian(x), self.fd_jacobian(x)
        scale = 1.0 + np.max(np.abs(exact), axis=(-2, -1))
        return float(np.max(np.max(np.abs(exact - approx), axis=(-2, -1)) / scale))
