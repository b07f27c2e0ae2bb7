"""Command-line driver: solve, enumerate, check, and report.

Exit codes:

* 0: success (``solve`` additionally requires convergence)
* 1: usage error, malformed instance/report file, or malformed embedded
  document
* 2: semantic validation failure (negative cost, cycle, missing path,
  negative delta, invalid profile, unreachable component)
* 3: dynamics did not converge within the iteration budget
* 4: enumeration space exceeds the cap
* 5: a ``check`` assertion failed
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import oracle
from .dynamics import Schedule, best_response, is_nash, run_dynamics
from .errors import (
    EngineError,
    MalformedInstance,
    MalformedMarkup,
    SearchSpaceTooLarge,
    UnsupportedConstruct,
)
from .game import (
    TOLERANCE,
    GameInstance,
    cost_report,
    player_cost,
    potential,
    validate_profile,
)
from .instance import load_instance
from .reporting import (
    canonical_json,
    load_report,
    profile_from_json,
    profile_summary,
    render_dot,
    run_report,
    trace_to_lines,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NOT_CONVERGED = 3
EXIT_TOO_LARGE = 4
EXIT_CHECK_FAILED = 5


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this engine reserves 2, so use 1."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="pagegame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--instance", required=True, help="instance file (JSON)")
        p.add_argument("--delta", type=float, default=None,
                       help="override the instance file's delta")
        p.add_argument("--output", default=None, help="write result here instead of stdout")

    solve = sub.add_parser("solve", help="run best-response dynamics to equilibrium")
    common(solve)
    solve.add_argument("--seed", type=int, default=0, help="seed for ties and shuffles")
    solve.add_argument("--schedule", choices=["round-robin", "random"],
                       default="round-robin")
    solve.add_argument("--max-iters", type=int, default=10000,
                       help="maximum full passes over the players")
    solve.add_argument("--trace", default=None, help="write per-step records here")
    solve.add_argument("--format", choices=["json"], default="json")

    enum = sub.add_parser("enumerate", help="brute-force the full equilibrium catalog")
    common(enum)
    enum.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP,
                      help="largest profile space the search will touch")

    check = sub.add_parser("check", help="re-verify a run report against its instance")
    common(check)
    check.add_argument("--report", required=True, help="run report to verify")

    rep = sub.add_parser("report", help="render a run report (DOT or JSON summary)")
    common(rep)
    rep.add_argument("--report", required=True, help="run report to render")
    rep.add_argument("--format", choices=["dot", "json"], default="dot")

    return parser


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


def _load(args) -> GameInstance:
    instance = load_instance(args.instance)
    if args.delta is not None:
        instance = dataclasses.replace(instance, delta=args.delta)
    return instance


def _cmd_solve(args) -> int:
    if args.max_iters < 1:
        raise _UsageError("--max-iters must be >= 1")
    if args.seed < 0:
        raise _UsageError("--seed must be >= 0")
    instance = _load(args)
    schedule = Schedule(kind=args.schedule, seed=args.seed)
    trace = run_dynamics(
        instance.graph,
        instance.players,
        instance.delta,
        schedule=schedule,
        max_iters=args.max_iters,
    )
    if args.trace is not None:
        with open(args.trace, "w", encoding="utf-8") as handle:
            handle.write(trace_to_lines(trace))
    report = run_report(
        command="solve",
        delta=instance.delta,
        seed=args.seed,
        schedule=args.schedule,
        converged=trace.converged,
        iterations=trace.passes,
        final_profile=trace.final_profile,
        cost=cost_report(instance.graph, trace.final_profile, instance.delta),
        trace_path=args.trace,
    )
    _emit(canonical_json(report), args.output)
    return EXIT_OK if trace.converged else EXIT_NOT_CONVERGED


def _cmd_enumerate(args) -> int:
    if args.cap < 1:
        raise _UsageError("--cap must be >= 1")
    instance = _load(args)
    catalog = oracle.analyze(instance.graph, instance.players, instance.delta, args.cap)
    report = run_report(
        command="enumerate",
        delta=instance.delta,
        seed=None,
        schedule=None,
        catalog=catalog,
    )
    _emit(canonical_json(report), args.output)
    return EXIT_OK


def _report_profile(args):
    report = load_report(args.report)
    if report.get("final_profile") is None:
        raise MalformedInstance("report holds no final profile")
    profile = profile_from_json(report["final_profile"])
    delta = report.get("delta", 0.0)
    if args.delta is not None:
        delta = args.delta
    if not isinstance(delta, (int, float)) or isinstance(delta, bool):
        raise MalformedInstance("report delta must be a number")
    return profile, float(delta)


def _cmd_check(args) -> int:
    instance = _load(args)
    profile, delta = _report_profile(args)
    instance = dataclasses.replace(instance, delta=delta)
    graph = instance.graph
    validate_profile(graph, instance.players, profile)

    results: list[tuple[str, bool, str]] = []

    stable = is_nash(graph, profile, delta)
    detail = ""
    if not stable:
        for pid, _ in profile.items():
            candidate = best_response(graph, profile, pid, delta, seed=0)
            improved = player_cost(graph, profile.replace(pid, candidate), pid, delta)
            if improved < player_cost(graph, profile, pid, delta) - TOLERANCE:
                detail = f"player {pid} can switch to [{', '.join(candidate)}]"
                break
    results.append(("nash-stability", stable, detail))

    report = cost_report(graph, profile, delta)
    total_shares = sum(
        report.shares[edge_id] for _, path in profile.items() for edge_id in path
    )
    balanced = abs(total_shares - report.page_cost) <= TOLERANCE
    results.append(
        ("budget-balance", balanced,
         "" if balanced else f"shares sum to {total_shares}, page cost {report.page_cost}")
    )

    k = len(instance.players)
    total_player = sum(cost for _, cost in sorted(report.player_costs.items()))
    expected = report.page_cost * (1.0 + delta * k)
    aggregated = abs(total_player - expected) <= TOLERANCE
    results.append(
        ("cost-aggregation", aggregated,
         "" if aggregated else f"player costs sum to {total_player}, expected {expected}")
    )

    identity_ok = True
    identity_detail = ""
    base_potential = potential(graph, profile, delta)
    for player in instance.players:
        pid = player.player_id
        base_cost = player_cost(graph, profile, pid, delta)
        for alt in oracle.enumerate_paths(graph, player.root, player.leaf):
            if alt == profile.path(pid):
                continue
            deviated = profile.replace(pid, alt)
            d_phi = base_potential - potential(graph, deviated, delta)
            d_cost = base_cost - player_cost(graph, deviated, pid, delta)
            if abs(d_phi - d_cost) > TOLERANCE:
                identity_ok = False
                identity_detail = (
                    f"player {pid} via [{', '.join(alt)}]: "
                    f"potential moved {d_phi}, cost moved {d_cost}"
                )
                break
        if not identity_ok:
            break
    results.append(("potential-identity", identity_ok, identity_detail))

    lines = []
    for name, passed, info in results:
        if passed:
            lines.append(f"PASS {name}")
        else:
            lines.append(f"FAIL {name}: {info}")
    _emit("".join(line + "\n" for line in lines), args.output)
    return EXIT_OK if all(passed for _, passed, _ in results) else EXIT_CHECK_FAILED


def _cmd_report(args) -> int:
    instance = _load(args)
    profile, delta = _report_profile(args)
    graph = instance.graph
    validate_profile(graph, instance.players, profile)
    if args.format == "dot":
        _emit(render_dot(graph, profile), args.output)
    else:
        summary = profile_summary(graph, profile, cost_report(graph, profile, delta))
        _emit(canonical_json(summary), args.output)
    return EXIT_OK


class _UsageError(Exception):
    pass


_COMMANDS = {
    "solve": _cmd_solve,
    "enumerate": _cmd_enumerate,
    "check": _cmd_check,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"pagegame: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MalformedInstance, MalformedMarkup, UnsupportedConstruct) as exc:
        print(f"pagegame: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchSpaceTooLarge as exc:
        print(f"pagegame: error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except EngineError as exc:
        print(f"pagegame: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
