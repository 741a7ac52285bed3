from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..atlas import Region
from ..conf import conf
from ..core import Interval, image_net_with_times, restrict
from ..errors import NotInteriorError
from ..helpers import get_rng, op_norm
from ..log import Logger
from ..objects import Membership
from .system import BundleLift, ManifoldPath, piece_margins

logger = Logger.PATHSPACE


@dataclass(frozen=True)
class OpennessCertificate:
    """
    Every rep within `eta` of the path's chart coordinates reconstructs to a valid path in the same system.

    A perturbation of size eta moves piece i by at most amplification[i] * eta; it must stay
    below the piece's chart margin delta[i] and, at junction i, below half the overlap margin
    rho[i], where the transition is `lipschitz[i]`-Lipschitz
    """

    eta: float
    deltas: tuple[float, ...]
    rhos: tuple[float, ...]
    lipschitz: tuple[float, ...]
    amplification: tuple[float, ...]

    def payload(self) -> dict:
        return {
            "eta": self.eta,
            "deltas": list(self.deltas),
            "rhos": list(self.rhos),
            "lipschitz": list(self.lipschitz),
            "amplification": list(self.amplification),
        }


def _ball_lipschitz(p: ManifoldPath, i: int, radius: float) -> float:
    """
    Sampled Lipschitz bound (max-norm operator norm of the Jacobian) of the transition at
    junction i on the cube of the given radius around the junction point, times the safety factor
    """

    M, charts = p.manifold, p.system.charts

    if charts[i] == charts[i + 1]:
        return 1.0

    radius = min(radius, 1.0)
    centre = p.endpoint(i)
    rng = get_rng(i)
    probes = conf.numerics.lipschitz_probes ** max(1, M.dim)
    points = np.vstack([centre, centre + rng.uniform(-radius, radius, size=(probes, M.dim))])

    J = M.transition(charts[i], charts[i + 1]).jacobian(points)
    return conf.numerics.safety_factor * max(op_norm(j) for j in J)


def openness_certificate(p: ManifoldPath) -> OpennessCertificate:
    M, system = p.manifold, p.system
    n = system.n_pieces

    deltas = []

    for i, (chart, curve) in enumerate(zip(system.charts, p.curves)):
        _, margins, slack = piece_margins(M, chart, curve)
        delta = float(np.min(margins)) - 2 * slack

        if delta <= 0:
            raise NotInteriorError(f"piece {i} in chart '{chart}'", delta)

        deltas.append(delta)

    rhos, lips = [], []

    for i in range(n - 1):
        here, there = system.charts[i], system.charts[i + 1]

        if here == there:
            rho = deltas[i]
        else:
            rho = float(M.overlap(here, there).margin(p.endpoint(i)))

        if rho <= 0:
            raise NotInteriorError(f"junction {i}", rho)

        rhos.append(rho)
        lips.append(_ball_lipschitz(p, i, rho / 2))

    lengths = [piece.length for piece in system.pieces()]
    amps = [1.0 + lengths[0]]

    for i in range(1, n):
        amps.append(lips[i - 1] * amps[-1] + lengths[i])

    bounds = [min(deltas[i], rhos[i] / 2 if i < n - 1 else np.inf) / amps[i] for i in range(n)]
    eta = float(min(bounds))

    logger.debug(f"Openness margin {eta:.3e} (deltas {deltas}, rhos {rhos}, lipschitz {lips})")
    return OpennessCertificate(eta, tuple(deltas), tuple(rhos), tuple(lips), tuple(amps))


def openness_margin(p: ManifoldPath) -> float:
    """
    eta > 0 such that every rep within eta of chart_map(p) reconstructs to a valid path
    in the same chart system
    """

    return openness_certificate(p).eta


def _verdict(margins: np.ndarray, slack: float) -> Membership:
    """
    Margins are taken at actual image points forming a slack-net of the image
    """

    if margins.size == 0 or np.all(margins > slack):
        return Membership.INSIDE

    if np.any(margins <= 0):
        return Membership.OUTSIDE

    return Membership.INDETERMINATE


def _region_for(regions: Region | Mapping[str, Region], chart: str) -> Region:
    return regions[chart] if isinstance(regions, Mapping) else regions


def in_neighborhood(
        c: BundleLift,
        K: Sequence[tuple[float, float]],
        U: Region | Mapping[str, Region],
        V: Region | Mapping[str, Region],
        W: Region | Mapping[str, Region]
) -> Membership:
    """
    Whether c(K) lies in U, (pi o c)(K) in V and (pi o c)'(K) in W.

    Regions are given in chart coordinates (one for all charts or one per chart): U on
    (x, u) in R^(m + d), V on x in R^m, W on (x, x') in R^(2m). Images of K are covered by
    eps-nets; the answer is INDETERMINATE when a net point lies within eps of a boundary
    without an actual image point being outside.
    """

    eps = conf.numerics.net_eps
    system = c.system
    verdicts = []

    for a, b in K:
        for i, (piece, chart) in enumerate(zip(system.pieces(), system.charts)):
            lo, hi = max(a, piece.lo), min(b, piece.hi)

            if lo > hi or (lo == hi and hi == piece.hi and piece.hi < 1.0):
                continue

            gamma, u = c.base.curves[i], c.fibers[i]

            if lo == hi:
                times = np.array([lo])
                slack = 0.0
            else:
                J = Interval(lo, hi)
                local = restrict(gamma, J)
                net_times, _ = image_net_with_times(local, eps)
                breaks = np.union1d(restrict(u, J).breaks, local.base.breaks)
                times = np.union1d(net_times, breaks)
                slack = eps

            x = gamma.evaluate(times)
            v = gamma.evaluate(times, 1)
            fiber = u.evaluate(times)

            verdicts.append(_verdict(_region_for(V, chart).margin(x), slack))
            verdicts.append(_verdict(_region_for(U, chart).margin(np.hstack([x, fiber])), slack))
            verdicts.append(_verdict(_region_for(W, chart).margin(np.hstack([x, v])), slack))

    if Membership.OUTSIDE in verdicts:
        return Membership.OUTSIDE

    if Membership.INDETERMINATE in verdicts:
        return Membership.INDETERMINATE

    return Membership.INSIDE
