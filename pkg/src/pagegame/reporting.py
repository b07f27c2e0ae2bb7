"""Run report and trace serialization plus the DOT rendering of a profile.

Reports and traces are plain JSON with sorted keys and a fixed layout, so
identical inputs produce byte-identical files. Player ids become string
keys in JSON and are parsed back to integers on load.
"""

from __future__ import annotations

import json
from typing import Any

from .dynamics import DynamicsTrace, Step
from .errors import MalformedInstance
from .game import CostReport, GameGraph, StrategyProfile, load_map
from .oracle import EquilibriumCatalog

FORMAT_VERSION = 1


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def profile_to_json(profile: StrategyProfile) -> dict[str, list[str]]:
    return {str(pid): list(path) for pid, path in profile.items()}


def profile_from_json(obj: Any) -> StrategyProfile:
    if not isinstance(obj, dict):
        raise MalformedInstance("profile must be an object of player -> edge list")
    paths: dict[int, tuple[str, ...]] = {}
    for key, value in obj.items():
        try:
            pid = int(key)
        except ValueError:
            raise MalformedInstance(f"profile key {key!r} is not a player id") from None
        if not isinstance(value, list) or not all(isinstance(e, str) for e in value):
            raise MalformedInstance(f"profile entry for player {key} must be an edge-id list")
        paths[pid] = tuple(value)
    return StrategyProfile(paths)


def cost_report_to_json(report: CostReport) -> dict[str, Any]:
    return {
        "page_cost": report.page_cost,
        "player_costs": {str(pid): cost for pid, cost in sorted(report.player_costs.items())},
        "shares": dict(sorted(report.shares.items())),
        "potential": report.potential,
        "delta": report.delta,
    }


def catalog_to_json(catalog: EquilibriumCatalog) -> dict[str, Any]:
    return {
        "equilibria": [
            {
                "profile": profile_to_json(entry.profile),
                "cost_report": cost_report_to_json(entry.report),
                "is_forest": entry.is_forest,
            }
            for entry in catalog.equilibria
        ],
        "optimum": {
            "profile": profile_to_json(catalog.optimum),
            "page_cost": catalog.optimum_cost,
        },
        "poa": catalog.poa,
        "pos": catalog.pos,
    }


def step_to_json(step: Step) -> dict[str, Any]:
    return {
        "iteration": step.iteration,
        "player_id": step.player_id,
        "previous_cost": step.previous_cost,
        "new_cost": step.new_cost,
        "potential_after": step.potential_after,
        "path_changed": step.path_changed,
        "path": list(step.path) if step.path is not None else None,
    }


def trace_to_lines(trace: DynamicsTrace) -> str:
    """One JSON record per step, newline-delimited."""
    lines = [json.dumps(step_to_json(step), sort_keys=True) for step in trace.steps]
    return "".join(line + "\n" for line in lines)


def run_report(
    command: str,
    delta: float,
    seed: int | None,
    schedule: str | None,
    converged: bool | None = None,
    iterations: int | None = None,
    final_profile: StrategyProfile | None = None,
    cost: CostReport | None = None,
    trace_path: str | None = None,
    catalog: EquilibriumCatalog | None = None,
) -> dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "run-report",
        "command": command,
        "delta": delta,
        "seed": seed,
        "schedule": schedule,
        "converged": converged,
        "iterations": iterations,
        "final_profile": profile_to_json(final_profile) if final_profile else None,
        "cost_report": cost_report_to_json(cost) if cost else None,
        "trace": trace_path,
        "catalog": catalog_to_json(catalog) if catalog else None,
    }


def load_report(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    except OSError as exc:
        raise MalformedInstance(f"cannot read report file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise MalformedInstance(f"report is not valid JSON: {exc}") from None
    if not isinstance(obj, dict) or obj.get("kind") != "run-report":
        raise MalformedInstance("file is not a run report")
    if obj.get("format_version") != FORMAT_VERSION:
        raise MalformedInstance("unsupported report format_version")
    return obj


def _fmt(value: float) -> str:
    return f"{value:g}"


def render_dot(graph: GameGraph, profile: StrategyProfile) -> str:
    """DOT rendering of the chosen tree, edges annotated with load and share."""
    loads = load_map(profile)
    used_nodes: set[str] = set()
    edge_lines: list[str] = []
    for edge in sorted(graph.edges, key=lambda e: e.edge_id):
        count = loads.get(edge.edge_id, 0)
        if not count:
            continue
        used_nodes.update((edge.src, edge.dst))
        share = edge.cost / count
        label = f"{edge.edge_id} c={_fmt(edge.cost)} x={count} share={_fmt(share)}"
        edge_lines.append(f'  "{edge.src}" -> "{edge.dst}" [label="{label}"];')
    node_lines = [f'  "{node_id}";' for node_id in sorted(used_nodes)]
    body = "\n".join(node_lines + edge_lines)
    if body:
        return "digraph chosen_tree {\n  rankdir=LR;\n" + body + "\n}\n"
    return "digraph chosen_tree {\n}\n"


def profile_summary(
    graph: GameGraph, profile: StrategyProfile, report: CostReport
) -> dict[str, Any]:
    """Machine-readable companion to the DOT rendering."""
    loads = load_map(profile)
    edges = []
    for edge in sorted(graph.edges, key=lambda e: e.edge_id):
        count = loads.get(edge.edge_id, 0)
        if not count:
            continue
        edges.append(
            {
                "id": edge.edge_id,
                "src": edge.src,
                "dst": edge.dst,
                "cost": edge.cost,
                "load": count,
                "share": edge.cost / count,
            }
        )
    return {
        "format_version": FORMAT_VERSION,
        "kind": "profile-summary",
        "page_cost": report.page_cost,
        "delta": report.delta,
        "edges": edges,
        "player_costs": {str(pid): c for pid, c in sorted(report.player_costs.items())},
    }
