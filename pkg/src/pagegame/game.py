"""Directed multigraph model of a page build and its cost-sharing rules.

A page build is a DAG whose nodes are document objects and whose edges are
construction steps with non-negative costs. Each player (a browser/device
routing a component into its page) picks one simple root-to-leaf path; the
cost of every edge is split equally among the players using it, and a
player may additionally carry a ``delta``-weighted copy of the whole page
cost as a cooperative term.

All types are immutable after construction and every function here is pure.
Floating-point sums always run in a canonical order (edge declaration
order, player id order) so results are reproducible across processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    CycleDetected,
    DanglingEndpoint,
    DuplicateEdgeId,
    EmptyGraph,
    GraphError,
    InvalidProfile,
    NegativeCost,
    NegativeDelta,
    NoPath,
    UnknownPlayer,
    ZeroLoad,
)

NODE_KINDS = frozenset({"document-root", "element", "attribute", "text", "abstract"})

#: Tolerance used by every floating-point comparison in the engine.
TOLERANCE = 1e-9


@dataclass(frozen=True)
class Node:
    node_id: str
    kind: str


@dataclass(frozen=True)
class Edge:
    edge_id: str
    src: str
    dst: str
    cost: float


@dataclass(frozen=True)
class Player:
    """A browser/device instance routing one component, as a root-leaf pair."""

    player_id: int
    root: str
    leaf: str
    label: str = ""


class GameGraph:
    """Validated directed acyclic multigraph with non-negative edge costs.

    Parallel edges between the same node pair are allowed and are told apart
    by their edge ids. Instances are immutable once constructed.
    """

    def __init__(self, nodes: Iterable[Node], edges: Iterable[Edge]):
        node_map: dict[str, Node] = {}
        for node in nodes:
            if node.kind not in NODE_KINDS:
                raise GraphError(f"node {node.node_id!r} has unknown kind {node.kind!r}")
            if node.node_id in node_map:
                raise GraphError(f"node id {node.node_id!r} declared more than once")
            node_map[node.node_id] = node

        edge_map: dict[str, Edge] = {}
        out: dict[str, list[Edge]] = {nid: [] for nid in node_map}
        indegree: dict[str, int] = {nid: 0 for nid in node_map}
        for edge in edges:
            if edge.edge_id in edge_map:
                raise DuplicateEdgeId(edge.edge_id)
            if edge.src not in node_map:
                raise DanglingEndpoint(edge.edge_id, edge.src)
            if edge.dst not in node_map:
                raise DanglingEndpoint(edge.edge_id, edge.dst)
            if not (edge.cost >= 0.0):
                raise NegativeCost(edge.edge_id, edge.cost)
            edge_map[edge.edge_id] = edge
            out[edge.src].append(edge)
            indegree[edge.dst] += 1

        self._nodes = node_map
        self._edges = edge_map
        # Outgoing edges sorted by id fix the traversal order everywhere.
        self._out = {nid: tuple(sorted(es, key=lambda e: e.edge_id)) for nid, es in out.items()}
        self._topo = self._toposort(indegree)

    def _toposort(self, indegree: dict[str, int]) -> tuple[str, ...]:
        pending = dict(indegree)
        queue = [nid for nid in self._nodes if pending[nid] == 0]
        order: list[str] = []
        while queue:
            nid = queue.pop()
            order.append(nid)
            for edge in self._out[nid]:
                pending[edge.dst] -= 1
                if pending[edge.dst] == 0:
                    queue.append(edge.dst)
        if len(order) < len(self._nodes):
            raise CycleDetected(self._find_cycle({n for n, d in pending.items() if d > 0}))
        return tuple(order)

    def _find_cycle(self, candidates: set[str]) -> list[str]:
        # Every leftover node keeps an in-edge from another leftover node, so
        # walking backward must revisit some node; that loop is a cycle.
        preds = {nid: [] for nid in candidates}
        for edge in self._edges.values():
            if edge.src in candidates and edge.dst in candidates:
                preds[edge.dst].append(edge.src)
        seen: list[str] = []
        current = min(candidates)
        while current not in seen:
            seen.append(current)
            current = min(preds[current])
        cycle = seen[seen.index(current):] + [current]
        cycle.reverse()
        return cycle

    @property
    def nodes(self) -> Mapping[str, Node]:
        return self._nodes

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._edges.values())

    @property
    def topo_order(self) -> tuple[str, ...]:
        return self._topo

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges[edge_id]
        except KeyError:
            raise GraphError(f"unknown edge id {edge_id!r}") from None

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._edges

    def out_edges(self, node_id: str) -> tuple[Edge, ...]:
        return self._out[node_id]

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._nodes


def build_graph(nodes: Iterable, edges: Iterable) -> GameGraph:
    """Build and validate a GameGraph from node and edge records.

    Accepts ``Node``/``Edge`` instances or plain ``(id, kind)`` and
    ``(id, src, dst, cost)`` tuples.
    """
    node_objs = [n if isinstance(n, Node) else Node(*n) for n in nodes]
    edge_objs = [
        e if isinstance(e, Edge) else Edge(e[0], e[1], e[2], float(e[3])) for e in edges
    ]
    return GameGraph(node_objs, edge_objs)


@dataclass(frozen=True)
class StrategyProfile:
    """One chosen path per player, each path a sequence of edge ids."""

    paths: dict[int, tuple[str, ...]]

    def __post_init__(self):
        frozen = {int(pid): tuple(path) for pid, path in self.paths.items()}
        object.__setattr__(self, "paths", frozen)

    def path(self, player_id: int) -> tuple[str, ...]:
        try:
            return self.paths[player_id]
        except KeyError:
            raise UnknownPlayer(player_id) from None

    def items(self) -> Iterator[tuple[int, tuple[str, ...]]]:
        """Pairs sorted by player id, so float accumulation order is fixed."""
        return iter(sorted(self.paths.items()))

    def replace(self, player_id: int, path: Sequence[str]) -> StrategyProfile:
        updated = dict(self.paths)
        updated[player_id] = tuple(path)
        return StrategyProfile(updated)

    def used_edges(self) -> set[str]:
        used: set[str] = set()
        for _, path in self.items():
            used.update(path)
        return used


@dataclass(frozen=True)
class CostReport:
    """Everything the engine knows about one profile's costs."""

    page_cost: float
    player_costs: dict[int, float]
    shares: dict[str, float]
    potential: float
    delta: float


@dataclass(frozen=True)
class GameInstance:
    """A complete game: graph, players, and the cooperation weight delta."""

    graph: GameGraph
    players: tuple[Player, ...]
    delta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        if not (self.delta >= 0.0):
            raise NegativeDelta(self.delta)
        validate_players(self.graph, self.players)

    def player(self, player_id: int) -> Player:
        for p in self.players:
            if p.player_id == player_id:
                return p
        raise UnknownPlayer(player_id)


def load_map(profile: StrategyProfile) -> dict[str, int]:
    """Per-edge usage counts; edges outside every path are absent."""
    loads: dict[str, int] = {}
    for _, path in profile.items():
        for edge_id in path:
            loads[edge_id] = loads.get(edge_id, 0) + 1
    return loads


def page_cost(graph: GameGraph, profile: StrategyProfile) -> float:
    """Total cost of the union of all chosen paths, each edge counted once."""
    used = profile.used_edges()
    return sum(edge.cost for edge in graph.edges if edge.edge_id in used)


def shapley_share(cost: float, load: int) -> float:
    """An edge's cost split equally among the players using it."""
    if load < 1:
        raise ZeroLoad(load)
    return cost / load


def player_cost(
    graph: GameGraph, profile: StrategyProfile, player_id: int, delta: float = 0.0
) -> float:
    """Shapley path cost plus ``delta`` times the page cost.

    With ``delta == 0`` the second term is skipped entirely, so the result
    equals the pure shared-path cost bit for bit.
    """
    path = profile.path(player_id)
    loads = load_map(profile)
    own = sum(graph.edge(edge_id).cost / loads[edge_id] for edge_id in path)
    if delta:
        return own + delta * page_cost(graph, profile)
    return own


def potential(graph: GameGraph, profile: StrategyProfile, delta: float = 0.0) -> float:
    """Exact potential: harmonic edge terms plus ``delta`` times page cost.

    For every unilateral path change the potential moves by exactly the
    deviating player's cost change.
    """
    loads = load_map(profile)
    total = 0.0
    for edge in graph.edges:
        count = loads.get(edge.edge_id, 0)
        for x in range(1, count + 1):
            total += edge.cost / x
    if delta:
        total += delta * page_cost(graph, profile)
    return total


def cost_report(
    graph: GameGraph, profile: StrategyProfile, delta: float = 0.0
) -> CostReport:
    loads = load_map(profile)
    shares = {
        edge.edge_id: edge.cost / loads[edge.edge_id]
        for edge in graph.edges
        if edge.edge_id in loads
    }
    players = {pid: player_cost(graph, profile, pid, delta) for pid, _ in profile.items()}
    return CostReport(
        page_cost=page_cost(graph, profile),
        player_costs=players,
        shares=shares,
        potential=potential(graph, profile, delta),
        delta=delta,
    )


def node_depths(graph: GameGraph) -> dict[str, int]:
    """Longest-path depth of each node measured from the in-degree-0 nodes."""
    if not graph.nodes:
        raise EmptyGraph()
    depths = {nid: 0 for nid in graph.topo_order}
    for nid in graph.topo_order:
        for edge in graph.out_edges(nid):
            depths[edge.dst] = max(depths[edge.dst], depths[nid] + 1)
    return depths


def boundary_vertices(graph: GameGraph) -> set[str]:
    """Nodes at maximum depth: the boundary level of the build tree."""
    depths = node_depths(graph)
    deepest = max(depths.values())
    return {nid for nid, d in depths.items() if d == deepest}


def reachable_from(graph: GameGraph, node_id: str) -> set[str]:
    """All nodes reachable from ``node_id`` by directed edges (inclusive)."""
    seen = {node_id}
    stack = [node_id]
    while stack:
        for edge in graph.out_edges(stack.pop()):
            if edge.dst not in seen:
                seen.add(edge.dst)
                stack.append(edge.dst)
    return seen


def validate_players(graph: GameGraph, players: Sequence[Player]) -> None:
    """Check player invariants: distinct ids, real endpoints, a path exists."""
    seen_ids: set[int] = set()
    for player in players:
        if player.player_id in seen_ids:
            raise InvalidProfile(player.player_id, "duplicate player id")
        seen_ids.add(player.player_id)
        if player.root not in graph:
            raise InvalidProfile(player.player_id, f"unknown root node {player.root!r}")
        if player.leaf not in graph:
            raise InvalidProfile(player.player_id, f"unknown leaf node {player.leaf!r}")
        if player.root == player.leaf:
            raise InvalidProfile(player.player_id, "root and leaf must differ")
        if player.leaf not in reachable_from(graph, player.root):
            raise NoPath(player.player_id, player.root, player.leaf)


def validate_profile(
    graph: GameGraph, players: Sequence[Player], profile: StrategyProfile
) -> None:
    """Check that a profile assigns each player one simple root-leaf path."""
    expected = {p.player_id: p for p in players}
    if set(profile.paths) != set(expected):
        missing = sorted(set(expected) - set(profile.paths))
        extra = sorted(set(profile.paths) - set(expected))
        raise InvalidProfile(
            (missing + extra)[0], "profile players do not match instance players"
        )
    for pid, path in profile.items():
        player = expected[pid]
        if not path:
            raise InvalidProfile(pid, "path is empty")
        for edge_id in path:
            if not graph.has_edge(edge_id):
                raise InvalidProfile(pid, f"unknown edge id {edge_id!r}")
        edges = [graph.edge(edge_id) for edge_id in path]
        if edges[0].src != player.root:
            raise InvalidProfile(pid, f"path starts at {edges[0].src!r}, not the root")
        if edges[-1].dst != player.leaf:
            raise InvalidProfile(pid, f"path ends at {edges[-1].dst!r}, not the leaf")
        visited = [edges[0].src]
        for prev, nxt in zip(edges, edges[1:]):
            if prev.dst != nxt.src:
                raise InvalidProfile(pid, "consecutive edges do not connect")
        visited.extend(edge.dst for edge in edges)
        if len(set(visited)) != len(visited):
            raise InvalidProfile(pid, "path revisits a node")
