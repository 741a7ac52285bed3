"""
pathatlas command line: invariant suites and scenario commands, reporting JSON lines.

Exit codes: 0 every check passed (or was indeterminate), 1 some check failed, 2 usage
error (bad flags, unknown suite or builtin, invalid scenario), 3 domain or cover error.
"""

import argparse
import sys
import time

from typing import Callable, Optional, Sequence, TextIO

import numpy as np

from .atlas import BundleAtlas, builtin
from .conf import conf
from .core import StepCurve
from .corpus import moebius_loop
from .errors import ChartEscapeError, CoverError, DomainError, PathAtlasError, ScenarioError
from .helpers import get_rng, sup_norm
from .lifts import build_trivialization, holonomy, tangent_trivialization, transport
from .log import Logger
from .managers.files import json, yaml
from .managers.suites import SuiteManager
from .objects import Check, CheckStatus
from .pathspace import (
    BundleLift, ManifoldPath, PathChartSystem, PathRep, apply_transition, chart_map, evaluate_path,
    lift_chart_map, lift_reconstruct, openness_certificate, plan_transition, reconstruct, round_trip_amplification
)
from .schemas import ScenarioModel, rep_from_json, rep_to_json, scenario_from_json, scenario_to_json, system_from_json, system_to_json

logger = Logger.CLI

DEMOS = ("moebius-loop", "sphere-two-chart", "euclidean-margin")


# Scenarios
def load_scenario(p: str) -> ScenarioModel:
    data = yaml.read(p) if p.endswith((".yml", ".yaml")) else json.read(p)

    if not isinstance(data, dict):
        raise ScenarioError(f"Could not read a scenario object from '{p}'")

    return scenario_from_json(data)


def _space(scenario: ScenarioModel):
    return builtin(scenario.space.name, **scenario.space.params)


def _member(scenario: ScenarioModel) -> tuple[object, PathChartSystem, PathRep, ManifoldPath | BundleLift]:
    space = _space(scenario)
    system = system_from_json(scenario.system)
    rep = rep_from_json(scenario.rep)

    if isinstance(space, BundleAtlas) and rep.is_lift:
        return space, system, rep, lift_reconstruct(space, system, rep)

    M = space.base if isinstance(space, BundleAtlas) else space
    return space, system, rep, reconstruct(M, system, rep.base)


def _check(name: str, anchor: str, ok: bool, value, bound, start: float, detail: dict) -> Check:
    status = CheckStatus.PASS if ok else CheckStatus.FAIL
    value = None if value is None else float(value)
    bound = None if bound is None else float(bound)
    return Check(name, anchor, status, value, bound, time.perf_counter() - start, detail)


def cmd_validate(selector: str, seed: int = 0, count: int = 1, tol: float = 1e-7) -> list[Check]:
    if count < 1 or not tol > 0:
        raise ScenarioError("--count must be positive and --tol must be positive")

    return SuiteManager(tol).run(selector, seed, count)


def cmd_transition(scenario: ScenarioModel) -> list[Check]:
    start = time.perf_counter()

    if scenario.target is None:
        raise ScenarioError("A transition scenario needs a 'target' chart system")

    space, system, rep, _ = _member(scenario)
    target = system_from_json(scenario.target)

    plan = plan_transition(space, system, target, rep, scenario.tol)
    out = apply_transition(plan, rep)
    back_plan = plan_transition(space, target, system, out, scenario.tol)
    back = apply_transition(back_plan, out)
    amplification = round_trip_amplification(back_plan, out)
    error = back.distance(rep)
    bound = (1.0 + amplification) * scenario.tol

    logger.info(f"Transition to {list(target.charts)}: {len(plan.cells)} cells, round-trip error {error:.3e}")
    detail = {
        "rep": rep_to_json(out),
        "system": system_to_json(target),
        "refinement": plan.refinement.as_list(),
        "cells": sum(cell.n_cells for cell in plan.cells),
        "amplification": amplification,
    }
    return [_check("transition", "lemma:chart-transition", error <= bound, error, bound, start, detail)]


def cmd_transport(scenario: ScenarioModel) -> list[Check]:
    start = time.perf_counter()
    space, _, _, member = _member(scenario)
    path = member.base if isinstance(member, BundleLift) else member

    if isinstance(space, BundleAtlas):
        triv = build_trivialization(path, space)
    else:
        triv = tangent_trivialization(path)

    kappa = triv.kappa()
    P = transport(triv, 0.0, 1.0)
    detail = {"frames": triv.frames.tolist(), "kappa": kappa, "transport": P.tolist()}

    try:
        H = holonomy(triv)
        detail["holonomy"] = H.tolist()
        logger.info(f"Holonomy {H.tolist()}, kappa {kappa:.6g}")

    except DomainError as e:
        detail["holonomy"] = None
        logger.info(f"Open path ({e}), kappa {kappa:.6g}")

    eye = np.eye(triv.rank)
    gap = sup_norm(transport(triv, 1.0, 0.0) @ P - eye)
    bound = 1e-12 * kappa ** 2
    return [_check("transport", "remark:transport-groupoid", gap <= bound, gap, bound, start, detail)]


def cmd_margin(scenario: ScenarioModel) -> list[Check]:
    start = time.perf_counter()
    _, system, _, member = _member(scenario)
    path = member.base if isinstance(member, BundleLift) else member
    base = chart_map(path)

    certificate = openness_certificate(path)
    eta = certificate.eta
    size = 0.99 * min(eta, 1.0)
    rng = get_rng(scenario.seed)
    failures = 0

    logger.info(f"Openness margin {eta:.6g} for {system.n_pieces} pieces")

    for _ in range(scenario.trials):
        x = rng.uniform(-size, size, size=path.dim)
        pieces = tuple(
            y.map_values(lambda v: size * rng.uniform(-1.0, 1.0, size=v.shape))
            for y in base.pieces
        )

        try:
            reconstruct(path.manifold, system, base + PathRep(x, pieces))
        except (ChartEscapeError, CoverError):
            failures += 1

    detail = {**certificate.payload(), "trials": scenario.trials, "failures": failures}
    return [_check("margin", "lemma:open-chart-domain", eta > 0 and failures == 0, eta, 0.0, start, detail)]


def cmd_reconstruct(scenario: ScenarioModel) -> list[Check]:
    start = time.perf_counter()
    _, system, rep, member = _member(scenario)
    path = member.base if isinstance(member, BundleLift) else member

    again = lift_chart_map(member) if isinstance(member, BundleLift) else chart_map(member)
    points = [evaluate_path(path, t) for t in system.knots]

    detail = {
        "points": [{"chart": p.chart, "coords": p.coords.tolist()} for p in points],
        "min_margin": path.min_margin(),
    }
    return [_check("reconstruct", "lemma:chart-map-inverse", again == rep, again.distance(rep), 0.0, start, detail)]


COMMANDS: dict[str, Callable[[ScenarioModel], list[Check]]] = {
    "transition": cmd_transition,
    "transport": cmd_transport,
    "margin": cmd_margin,
    "reconstruct": cmd_reconstruct,
}


# Demos
def demo_scenario(name: str) -> dict:
    """
    A ready scenario for one of the builtin demos
    """

    if name == "moebius-loop":
        lift = moebius_loop()
        return scenario_to_json(scenario_from_json({
            "operation": "transport",
            "space": {"name": "moebius-line-bundle"},
            "system": system_to_json(lift.system),
            "rep": rep_to_json(lift_chart_map(lift)),
        }))

    if name == "sphere-two-chart":
        M = builtin("sphere-stereo")
        system = PathChartSystem.make([0.0, 0.5, 1.0], ["N", "S"])
        pieces = (
            np.array([[0.0, 0.4]]),
            np.array([[0.1, 0.1]]),
        )
        rep = PathRep([0.9, 0.0], tuple(
            StepCurve.constant(piece, value) for piece, value in zip(system.pieces(), pieces)
        ))
        reconstruct(M, system, rep)
        return scenario_to_json(scenario_from_json({
            "operation": "transition",
            "space": {"name": "sphere-stereo"},
            "system": system_to_json(system),
            "rep": rep_to_json(rep),
            "target": system_to_json(PathChartSystem.single("N")),
        }))

    if name == "euclidean-margin":
        system = PathChartSystem.single("E")
        rep = PathRep([0.0, 0.0], (StepCurve.constant(system.pieces()[0], [[0.5, 0.0]]),))
        return scenario_to_json(scenario_from_json({
            "operation": "margin",
            "space": {"name": "euclidean", "params": {"dim": 2, "radius": 2.0}},
            "system": system_to_json(system),
            "rep": rep_to_json(rep),
        }))

    raise ScenarioError(f"Unknown demo '{name}', expected one of: {', '.join(DEMOS)}")


# Output
def emit(records: Sequence[dict], out: Optional[str], stream: TextIO) -> None:
    if out:
        if not json.write_lines(out, records):
            raise ScenarioError(f"Could not write the report to '{out}'")

        return

    for record in records:
        stream.write(json.dumps(record) + "\n")

    stream.flush()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathatlas",
        description="Regulated path spaces: invariant suites and chart scenarios."
    )
    parser.add_argument("--version", action="version", version=f"pathatlas {conf.version}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="write the JSON-lines report to this file instead of stdout")
    common.add_argument("--no-timing", action="store_true", help="omit runtimes (byte-identical reruns)")

    validate = sub.add_parser("validate", parents=[common], help="run invariant suites on seeded random cases")
    validate.add_argument("--suite", default="all", help="'all' or a comma separated list of suite names")
    validate.add_argument("--seed", type=int, default=0)
    validate.add_argument("--count", type=int, default=1, help="cases per suite")
    validate.add_argument("--tol", type=float, default=1e-7, help="re-projection tolerance of transitions")

    for name in COMMANDS:
        command = sub.add_parser(name, parents=[common], help=f"run a {name} scenario")
        command.add_argument("--scenario", required=True, help="scenario file (.json, .yml or .yaml)")
        command.add_argument("--tol", type=float, default=None, help="override the scenario tolerance")
        command.add_argument("--seed", type=int, default=None, help="override the scenario seed")

    demo = sub.add_parser("demo", help="print a ready scenario")
    demo.add_argument("name", choices=DEMOS)
    demo.add_argument("--out", default=None, help="write the scenario to this file")

    return parser


def run(args: argparse.Namespace, stream: TextIO) -> int:
    timing = conf.report.timing and not getattr(args, "no_timing", False)

    if args.command == "demo":
        scenario = demo_scenario(args.name)

        if args.out:
            writer = yaml.write if args.out.endswith((".yml", ".yaml")) else json.write

            if not writer(args.out, scenario):
                raise ScenarioError(f"Could not write the scenario to '{args.out}'")
        else:
            stream.write(json.dumps(scenario) + "\n")

        return 0

    if args.command == "validate":
        checks = cmd_validate(args.suite, args.seed, args.count, args.tol)
    else:
        scenario = load_scenario(args.scenario)
        overrides = {key: value for key, value in (("tol", args.tol), ("seed", args.seed)) if value is not None}
        scenario = scenario.model_copy(update=overrides) if overrides else scenario

        if scenario.operation != args.command:
            logger.warning(f"Running '{args.command}' on a scenario written for '{scenario.operation}'")

        checks = COMMANDS[args.command](scenario)

    emit([check.payload(timing) for check in checks], args.out, stream)
    return 1 if any(check.failed for check in checks) else 0


def main(argv: Optional[Sequence[str]] = None, stream: TextIO = sys.stdout) -> int:
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        return run(args, stream)

    except PathAtlasError as e:
        logger.error(f"{type(e).__name__}: {e}")
        stream.write(json.dumps({"status": "error", "error": type(e).__name__, "message": str(e)}) + "\n")
        return e.exit_code
