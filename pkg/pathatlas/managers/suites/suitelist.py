import math
import time

from dataclasses import dataclass, field
from functools import wraps
from typing import Optional

import numpy as np

from ...atlas import BundleAtlas, builtin
from ...atlas.catalog import BUNDLES, MANIFOLDS
from ...conf import conf
from ...core import (
    Interval, RegCurve, SmoothScalarRepar, StepCurve,
    change_of_variables, concat, derivative_split, image_net, linear_push, norm, primitive, restrict
)
from ...corpus import (
    PATH_MANIFOLDS, moebius_loop, random_lift, random_path, random_regcurve, random_step,
    random_subinterval, random_system
)
from ...errors import ChartEscapeError, CoverError
from ...helpers import sup_norm
from ...lifts import (
    Deformation, build_trivialization, compatibility_automorphisms, deformation_tangent, holonomy,
    norm_equivalence, represent_section, section_pieces, tangent_trivialization, transport,
    transport_deformation
)
from ...log import Logger, format_exception, log_errors
from ...objects import Check, CheckStatus
from ...pathspace import (
    BundleLift, PathChartSystem, PathRep, apply_transition, chart_map, lift_chart_map, openness_margin,
    plan_transition, reconstruct, transition_rep
)

logger = Logger.SUITES


@dataclass
class Measure:
    """
    The outcome of one case; `ok` is None when the case cannot decide
    """

    value: Optional[float]
    bound: Optional[float]
    ok: Optional[bool]
    detail: dict = field(default_factory=dict)


def _crashed(e: Exception) -> Measure:
    return Measure(None, None, False, {"error": format_exception(e)})


def suite(anchor: str):
    """
    Registers a suite case: runs it under `log_errors` and turns its Measure into a Check
    """

    def decorator(func):
        name = func.__name__.replace("_", "-")
        guarded = log_errors(logger, default=_crashed)(func)

        @wraps(func)
        def wrapper(self, rng: np.random.Generator) -> Check:
            start = time.perf_counter()
            measure = guarded(self, rng)

            if measure.ok is None:
                status = CheckStatus.INDETERMINATE
            else:
                status = CheckStatus.PASS if measure.ok else CheckStatus.FAIL

            value = None if measure.value is None else float(measure.value)
            bound = None if measure.bound is None else float(measure.bound)
            return Check(name, anchor, status, value, bound, time.perf_counter() - start, measure.detail)

        wrapper.suite_name = name
        wrapper.anchor = anchor
        return wrapper

    return decorator


def _refine(rng: np.random.Generator, system: PathChartSystem) -> PathChartSystem:
    extra = rng.uniform(0.0, 1.0, size=int(rng.integers(1, 4)))
    knots = np.union1d(np.asarray(system.knots), extra)
    charts = [system.charts[system.locate(0.5 * (a + b))] for a, b in zip(knots, knots[1:])]
    return PathChartSystem.make(knots, charts)


def _direction(rng: np.random.Generator, system: PathChartSystem, dim: int, x_scale: float, y_scale: float) -> PathRep:
    return PathRep(
        rng.normal(size=dim) * x_scale,
        tuple(random_step(rng, piece, dim, scale=y_scale) for piece in system.pieces())
    )


class SuiteList:
    """
    One method per registered suite; each runs a single seeded case
    """

    def __init__(self, tol: float = 1e-7) -> None:
        self.tol = tol

    # Regulated curves
    @suite("proposition:concatenation-isometry")
    def concat_isometry(self, rng: np.random.Generator) -> Measure:
        """
        Concatenation is an isometry for the sup norm
        """

        a = float(rng.uniform(0.05, 0.95))
        dim = int(rng.integers(1, 4))
        c1 = random_step(rng, Interval(0.0, a), dim)
        c2 = random_step(rng, Interval(a, 1.0), dim)
        c = concat(c1, c2)

        lhs, rhs = norm(c, 0), max(norm(c1, 0), norm(c2, 0))
        inverse = restrict(c, c1.domain) == c1 and restrict(c, c2.domain) == c2
        return Measure(abs(lhs - rhs), 0.0, lhs == rhs and inverse)

    @suite("proposition:restriction-contraction")
    def restriction_contraction(self, rng: np.random.Generator) -> Measure:
        """
        Restriction is a contraction for every order
        """

        k = int(rng.integers(0, 3))
        dim = int(rng.integers(1, 4))
        c = random_step(rng, dim=dim) if k == 0 else random_regcurve(rng, k, dim=dim)
        J = random_subinterval(rng)

        restricted, full = norm(restrict(c, J), k), norm(c, k)
        slack = 0.0 if k == 0 else 1e-12 * full
        return Measure(restricted, full, restricted <= full + slack, {"order": k})

    @suite("proposition:derivative-split-isomorphism")
    def d_isomorphism(self, rng: np.random.Generator) -> Measure:
        """
        The split c -> (c(t0), c') is an isomorphism with the factor 2 and factor (1 + len) bounds
        """

        lo = float(rng.uniform(-1.0, 1.0))
        domain = Interval(lo, lo + float(rng.uniform(0.1, 3.0)))
        c = random_regcurve(rng, 1, domain, int(rng.integers(1, 4)))

        x, u = derivative_split(c)
        back = primitive(u, x)
        split, n1 = max(sup_norm(x), norm(u, 0)), norm(c, 1)
        lhs, rhs = norm(back, 1), (1.0 + domain.length) * (sup_norm(x) + norm(u, 0))

        ok = back == c and split <= 2.0 * n1 and lhs <= rhs
        return Measure(lhs, rhs, ok, {"split": split, "split_bound": 2.0 * n1})

    @suite("theorem:linear-maps-commute-with-integrals")
    def integral_commutation(self, rng: np.random.Generator) -> Measure:
        """
        Linear maps commute with integration
        """

        d, e = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        c = random_step(rng, dim=d)
        A = rng.normal(size=(e, d))
        x0 = rng.normal(size=d)

        lhs = linear_push(A, primitive(c, x0))
        rhs = primitive(linear_push(A, c), A @ x0)
        times = np.union1d(rng.uniform(0.0, 1.0, size=16), c.breaks)

        gap = sup_norm(lhs.evaluate(times) - rhs.evaluate(times))
        bound = 1e-12 * (1.0 + norm(lhs, 1))
        return Measure(gap, bound, gap <= bound and lhs.base == rhs.base)

    @suite("theorem:change-of-variables")
    def change_of_variables(self, rng: np.random.Generator) -> Measure:
        """
        Substitution by a monotone piecewise-linear reparametrization preserves integrals
        """

        pieces = int(rng.integers(1, 6))
        slopes = random_step(rng, pieces=pieces).map_values(lambda v: 0.2 + 1.8 * np.abs(np.tanh(v)))
        phi = SmoothScalarRepar.certify(RegCurve([[float(rng.uniform(-1.0, 0.0))]], slopes))
        image = phi.image()

        domain = Interval(image.lo - float(rng.uniform(0.0, 0.5)), image.hi + float(rng.uniform(0.0, 0.5)))
        c = random_step(rng, domain, int(rng.integers(1, 4)))

        lhs = change_of_variables(c, phi)
        rhs = c.integral(image.lo, image.hi)
        gap = sup_norm(lhs - rhs)
        bound = 1e-12 * (1.0 + norm(c, 0) * image.length)
        return Measure(gap, bound, gap <= bound)

    @suite("theorem:compact-image-net")
    def image_net(self, rng: np.random.Generator) -> Measure:
        """
        The image net is an eps-net of the image
        """

        c = random_regcurve(rng, int(rng.integers(1, 3)), dim=int(rng.integers(1, 4)))
        eps = float(rng.uniform(0.01, 0.2))
        net = image_net(c, eps)
        points = c.evaluate(rng.uniform(0.0, 1.0, size=256))

        gaps = np.max(np.abs(points[:, None, :] - net[None, :, :]), axis=-1)
        worst = float(np.max(np.min(gaps, axis=1)))
        return Measure(worst, eps, worst <= eps, {"net_size": int(net.shape[0])})

    # Atlases
    @suite("definition:atlas-cocycle")
    def atlas_cocycles(self, rng: np.random.Generator) -> Measure:
        """
        Atlas transitions are mutually inverse and satisfy the cocycle identity
        """

        names = sorted(MANIFOLDS) + sorted(BUNDLES)
        name = names[int(rng.integers(len(names)))]
        space = builtin(name)
        measured = space.check(rng, 200)
        worst = max(measured["inverse"], measured["cocycle"])

        if isinstance(space, BundleAtlas):
            ok = worst <= conf.sampling.atlas_tol and measured["min_det"] > 0
        else:
            ok = worst <= conf.sampling.atlas_tol and measured["jacobian"] <= conf.sampling.fd_tol

        detail = {key: (value if math.isfinite(value) else None) for key, value in measured.items()}
        return Measure(worst, conf.sampling.atlas_tol, ok, {"space": name, **detail})

    @suite("lemma:chart-map-inverse")
    def atlas_roundtrip(self, rng: np.random.Generator) -> Measure:
        """
        Reconstruction inverts the chart map
        """

        name = PATH_MANIFOLDS[int(rng.integers(len(PATH_MANIFOLDS)))]
        p = random_path(rng, name)
        rep = chart_map(p)
        q = reconstruct(p.manifold, p.system, rep)

        same = chart_map(q) == rep and all(a == b for a, b in zip(q.curves, p.curves))
        return Measure(chart_map(q).distance(rep), 0.0, same, {"manifold": name, "pieces": p.system.n_pieces})

    # Transitions
    @suite("lemma:chart-transition")
    def transition_roundtrip(self, rng: np.random.Generator) -> Measure:
        """
        Transitions between chart systems round-trip within tolerance
        """

        p = random_path(rng, "sphere-stereo", pieces=int(rng.integers(2, 5)))
        dst = PathChartSystem.single(str(rng.choice(["N", "S"])))
        rep = chart_map(p)

        there = transition_rep(p.manifold, p.system, dst, rep, self.tol)
        back = transition_rep(p.manifold, dst, p.system, there, self.tol)
        gap = back.distance(rep)
        return Measure(gap, 1e-6, gap < 1e-6, {"charts": list(p.system.charts), "target": dst.charts[0]})

    @suite("lemma:refinement-transition")
    def transition_refinement(self, rng: np.random.Generator) -> Measure:
        """
        Refinement-only transitions are exact
        """

        name = PATH_MANIFOLDS[int(rng.integers(len(PATH_MANIFOLDS)))]
        p = random_path(rng, name)
        dst = _refine(rng, p.system)
        rep = chart_map(p)

        plan = plan_transition(p.manifold, p.system, dst, rep, self.tol)
        there = apply_transition(plan, rep)
        back = transition_rep(p.manifold, dst, p.system, there, self.tol)
        return Measure(back.distance(rep), 0.0, plan.is_refinement_only and back == rep, {"manifold": name})

    @suite("lemma:transition-smoothness")
    def transition_smoothness(self, rng: np.random.Generator) -> Measure:
        """
        Transitions are smooth in the path coordinates for a fixed plan
        """

        p = random_path(rng, "sphere-stereo")
        dst = random_system(rng, ["N", "S"], int(rng.integers(2, 5)))
        rep = chart_map(p)
        direction = _direction(rng, p.system, 2, 0.05, 0.005)
        plan = plan_transition(p.manifold, p.system, dst, rep, self.tol)

        def central(h: float) -> PathRep:
            return (apply_transition(plan, rep + direction * h) - apply_transition(plan, rep + direction * -h)) * (0.5 / h)

        h = 0.02
        d1, d2, d3 = central(h), central(h / 2), central(h / 4)
        e1, e2 = d1.distance(d2), d2.distance(d3)

        if e2 < 1e-12:
            return Measure(None, 1.9, None, {"e1": e1, "e2": e2})

        order = math.log2(e1 / e2)
        return Measure(order, 1.9, order >= 1.9, {"e1": e1, "e2": e2})

    @suite("lemma:open-chart-domain")
    def openness(self, rng: np.random.Generator) -> Measure:
        """
        Every rep closer than the openness margin reconstructs in the same chart system
        """

        name = PATH_MANIFOLDS[int(rng.integers(len(PATH_MANIFOLDS)))]
        p = random_path(rng, name)
        rep = chart_map(p)
        eta = openness_margin(p)
        size = 0.99 * min(eta, 1.0)
        failures = 0

        for _ in range(conf.sampling.margin_trials):
            x = rng.uniform(-size, size, size=p.dim)
            pieces = []

            for piece in p.system.pieces():
                y = random_step(rng, piece, p.dim)
                pieces.append(y * (size * float(rng.uniform()) / max(y.sup_norm(), 1e-300)))

            try:
                reconstruct(p.manifold, p.system, rep + PathRep(x, tuple(pieces)))
            except (ChartEscapeError, CoverError):
                failures += 1

        return Measure(failures, 0.0, eta > 0 and failures == 0, {"manifold": name, "eta": eta if math.isfinite(eta) else None})

    # Lifts
    def _random_trivialization(self, rng: np.random.Generator):
        if rng.uniform() < 0.5:
            return tangent_trivialization(random_path(rng, "sphere-stereo"))

        lift = random_lift(rng, "moebius-line-bundle")
        return build_trivialization(lift.base, lift.bundle)

    @suite("remark:transport-groupoid")
    def transport_groupoid(self, rng: np.random.Generator) -> Measure:
        """
        Transport operators form a groupoid
        """

        triv = self._random_trivialization(rng)
        r, s, t = (float(v) for v in rng.uniform(0.0, 1.0, size=3))
        eye = np.eye(triv.rank)

        unit = sup_norm(transport(triv, t, t) - eye)
        chain = sup_norm(transport(triv, t, r) @ transport(triv, s, t) - transport(triv, s, r))
        inverse = sup_norm(transport(triv, s, t) @ transport(triv, t, s) - eye)

        worst = max(chain, inverse)
        bound = 1e-12 * triv.kappa() ** 2
        return Measure(worst, bound, unit == 0.0 and worst <= bound)

    @suite("example:moebius-holonomy")
    def holonomy(self, rng: np.random.Generator) -> Measure:
        """
        The Moebius line bundle has holonomy -1 around the circle
        """

        fiber = float(rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0]))
        lift = moebius_loop(fiber)
        triv = build_trivialization(lift.base, lift.bundle)

        H = holonomy(triv)
        w = represent_section(triv, list(lift.fibers))
        ok = np.array_equal(H, [[-1.0]]) and w.n_pieces == 1
        return Measure(float(np.abs(H[0, 0] + 1.0)), 0.0, ok, {"holonomy": H.tolist()})

    @suite("proposition:norm-equivalence")
    def norm_equivalence(self, rng: np.random.Generator) -> Measure:
        """
        The covariant-derivative norm and the induced norm are equivalent
        """

        triv = self._random_trivialization(rng)
        w = random_regcurve(rng, 1, dim=triv.rank)
        pieces = section_pieces(triv, w)

        ne = norm_equivalence(triv, pieces)
        glued = represent_section(triv, pieces)
        head, top = sup_norm(glued.jet[0]), norm(glued.base, 0)

        ok = (
            ne.holds
            and max(head, top) <= ne.kappa * ne.n1 * (1 + 1e-12)
            and ne.n2 <= (head + (1.0 + ne.length) * top) * (1 + 1e-12)
        )
        return Measure(ne.ratio, ne.constant, ok, {"kappa": ne.kappa})

    @suite("lemma:compatibility-automorphisms")
    def compatibility(self, rng: np.random.Generator) -> Measure:
        """
        Compatibility automorphisms relate the trivializations of two chart systems
        """

        tol = 1e-6
        p = random_path(rng, "sphere-stereo")
        M = p.manifold
        dst = random_system(rng, ["N", "S"])

        triv_a = tangent_trivialization(p)
        w_a = random_step(rng, dim=2)
        lift = BundleLift(triv_a.bundle, p, tuple(section_pieces(triv_a, w_a)))

        rep_b = transition_rep(triv_a.bundle, p.system, dst, lift_chart_map(lift), tol)
        triv_b = tangent_trivialization(reconstruct(M, dst, rep_b.base))
        field_ = compatibility_automorphisms(triv_a, triv_b, tol=1e-5)

        w_b = represent_section(triv_b, list(rep_b.fibers))
        gap = (w_b - field_.apply_section(w_a, tol)).sup_norm()
        kappa = field_.kappa()
        ratio = norm(w_b, 0) / norm(w_a, 0)

        ok = gap <= 10 * tol and 1.0 / kappa <= ratio <= kappa
        return Measure(gap, 10 * tol, ok, {"ratio": ratio, "kappa": kappa})

    @suite("lemma:tangent-chart-independence")
    def tangent_independence(self, rng: np.random.Generator) -> Measure:
        """
        Deformation tangents do not depend on the chart system
        """

        p = random_path(rng, "sphere-stereo")
        M, rep = p.manifold, chart_map(p)
        direction = _direction(rng, p.system, 2, 0.05, 0.003)

        D = Deformation(lambda eps: reconstruct(M, p.system, rep + direction * float(np.sin(eps))), 0.01)
        plan = plan_transition(M, p.system, random_system(rng, ["N", "S"]), rep, self.tol)
        moved = transport_deformation(D, plan)

        v_a, v_b = deformation_tangent(D), deformation_tangent(moved)
        field_ = compatibility_automorphisms(tangent_trivialization(p), tangent_trivialization(moved.base), tol=1e-5)
        mapped = field_.apply_section(v_a.phi, 1e-8)

        times = np.union1d(np.linspace(0.0, 1.0, 257), np.asarray(plan.dst.knots))
        gap = sup_norm(mapped.evaluate(times) - v_b.phi.evaluate(times))
        return Measure(gap, 1e-6, gap <= 1e-6)
