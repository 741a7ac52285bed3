from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..atlas import BundleAtlas
from ..core import Curve, RegCurve, StepCurve, concat_many, linear_push, primitive, restrict
from ..errors import CoverError, DimensionError, DomainError
from ..helpers import op_norm
from ..log import Logger
from ..pathspace import ManifoldPath, transported_endpoint

logger = Logger.LIFTS


@dataclass(frozen=True)
class PathTrivialization:
    """
    A trivialization of the bundle pulled back along a path, glued from the chart
    trivializations: fiber coordinates u_i on piece i become the global coordinate C_i u_i.
    C_1 = Id and C_(i+1) = C_i g_(i -> i+1)(gamma(tau_i))^-1, so the global coordinate of a
    continuous section is continuous at every knot. Frames are constant on pieces.
    """

    path: ManifoldPath
    bundle: BundleAtlas
    frames: np.ndarray

    def __post_init__(self) -> None:
        frames = np.array(self.frames, dtype=float)
        frames.setflags(write=False)
        object.__setattr__(self, "frames", frames)

    @property
    def rank(self) -> int:
        return self.bundle.rank

    @property
    def n_pieces(self) -> int:
        return self.frames.shape[0]

    def frame(self, t: float) -> np.ndarray:
        return self.frames[self.path.system.locate(t)]

    def kappa(self) -> float:
        """
        max_i max(|C_i|, |C_i^-1|) in the max-norm operator norm
        """

        return max(max(op_norm(C), op_norm(np.linalg.inv(C))) for C in self.frames)

    def restrict_to(self, first: int, last: int) -> np.ndarray:
        """
        Frames of the pieces first..last renormalized so the first one is Id, which are the
        frames of the trivialization built along the restricted path
        """

        frames = self.frames[first:last + 1]
        return np.linalg.solve(frames[0][None], frames)


def build_trivialization(path: ManifoldPath, bundle: BundleAtlas, initial: Optional[np.ndarray] = None) -> PathTrivialization:
    """
    Glues the chart trivializations along the path starting from the frame `initial`
    (Id by default); any other initial frame F gives the trivialization F C_i
    """

    if bundle.base is not path.manifold and bundle.base.name != path.manifold.name:
        raise DomainError(f"Bundle over {bundle.base.name} along a path on {path.manifold.name}")

    charts = path.system.charts
    frames = [np.eye(bundle.rank) if initial is None else np.array(initial, dtype=float)]

    for i in range(path.system.n_pieces - 1):
        if charts[i] == charts[i + 1]:
            frames.append(frames[-1])
            continue

        try:
            g = bundle.cocycle(charts[i], charts[i + 1], path.endpoint(i))
        except CoverError as e:
            raise CoverError(f"Cocycle undefined at junction {i}: {e}", path.system.knots[i + 1])

        frames.append(frames[-1] @ np.linalg.inv(g))

    return PathTrivialization(path, bundle, np.stack(frames))


def tangent_trivialization(path: ManifoldPath, initial: Optional[np.ndarray] = None) -> PathTrivialization:
    """
    The trivialization of TM along the path, frames from transition Jacobians
    """

    return build_trivialization(path, BundleAtlas.tangent(path.manifold), initial)


def _check_pieces(triv: PathTrivialization, pieces) -> None:
    if len(pieces) != triv.n_pieces:
        raise DimensionError(f"{len(pieces)} pieces for a path of {triv.n_pieces} pieces")

    for piece, curve in zip(triv.path.system.pieces(), pieces):
        if curve.domain != piece:
            raise DomainError(f"Piece on {curve.domain} does not match {piece}")

        if curve.dim != triv.rank:
            raise DimensionError(f"Piece of dimension {curve.dim} for a bundle of rank {triv.rank}")


def represent_section(triv: PathTrivialization, pieces) -> Curve:
    """
    The global coordinate w = C_i u_i of a section given by its fiber pieces. Step pieces give
    a step curve; order-1 pieces of a continuous section give the order-1 curve with initial
    value u_1(0) and top derivative C_i u_i'
    """

    _check_pieces(triv, pieces)

    if all(isinstance(u, StepCurve) for u in pieces):
        return concat_many([linear_push(C, u) for C, u in zip(triv.frames, pieces)])

    if any(not isinstance(u, RegCurve) or u.order != 1 for u in pieces):
        raise DimensionError("Section pieces must all be step curves or all order-1 curves")

    top = concat_many([linear_push(C, u.base) for C, u in zip(triv.frames, pieces)])
    return primitive(top, triv.frames[0] @ pieces[0].jet[0])


def section_pieces(triv: PathTrivialization, w: Curve) -> list[Curve]:
    """
    The inverse of `represent_section`
    """

    inverses = np.linalg.inv(triv.frames)
    return [linear_push(Ci, restrict(w, piece)) for Ci, piece in zip(inverses, triv.path.system.pieces())]


def transport(triv: PathTrivialization, s: float, t: float) -> np.ndarray:
    """
    P_t^s = C_i(t)^-1 C_i(s): fiber coordinates at s to fiber coordinates at t
    """

    i, j = triv.path.system.locate(s), triv.path.system.locate(t)

    if i == j:
        return np.eye(triv.rank)

    return np.linalg.solve(triv.frames[j], triv.frames[i])


def holonomy(triv: PathTrivialization) -> np.ndarray:
    """
    Transport around a closed path, expressed in the chart of the starting point
    """

    path = triv.path
    first = path.system.charts[0]
    start = path.curves[0].jet[0]
    end = transported_endpoint(path, first)

    gap = float(np.max(np.abs(end.coords - start)))

    if gap > 1e-9:
        raise DomainError(f"Holonomy needs a closed path, the endpoints are {gap:.3e} apart")

    P = transport(triv, 0.0, 1.0)
    last = path.system.charts[-1]

    if last == first:
        return P

    g = triv.bundle.cocycle(last, first, path.endpoint(path.system.n_pieces - 1))
    return g @ P
