"""Shared builders for test instances: canonical fixtures and a seeded
random-DAG generator sized for exhaustive checking."""

from __future__ import annotations

import itertools
import random

from pagegame import (
    GameInstance,
    Player,
    StrategyProfile,
    build_graph,
    enumerate_paths,
)

DELTAS = (0.0, 0.5, 1.0, 2.0)

# Two parallel edges, two identical players: the smallest instance where
# sharing matters. Edge a is cheap, edge b dear.
def build_d1(delta=0.0, cost_a=1.0, cost_b=3.0) -> GameInstance:
    graph = build_graph(
        [("r", "abstract"), ("l", "abstract")],
        [("a", "r", "l", cost_a), ("b", "r", "l", cost_b)],
    )
    players = (
        Player(1, "r", "l", "first browser"),
        Player(2, "r", "l", "second browser"),
    )
    return GameInstance(graph=graph, players=players, delta=delta)


SAMPLE_DOCUMENT = """
<html>
<head>
<title>My title</title>
</head>
<body>
<h1>My header</h1>
<a href="uri">My link</a>
</body>
</html>
"""


def random_instance(seed: int, delta: float = 0.0, max_profiles: int = 400) -> GameInstance:
    """Small random DAG game with at most ``max_profiles`` joint profiles.

    Nodes are laid out in a fixed topological order and edges only run
    forward, so the graph is acyclic by construction. Roughly a third of
    the costs are small integers (including zero) to provoke exact ties.
    """
    rng = random.Random(seed)
    while True:
        n = rng.randint(3, 6)
        node_ids = [f"n{i}" for i in range(n)]
        m = rng.randint(n, 10)
        edges = []
        for j in range(m):
            src = rng.randrange(0, n - 1)
            dst = rng.randrange(src + 1, n)
            if rng.random() < 0.35:
                cost = float(rng.randint(0, 4))
            else:
                cost = round(rng.uniform(0.1, 4.0), 3)
            edges.append((f"e{j:02d}", node_ids[src], node_ids[dst], cost))
        graph = build_graph([(nid, "abstract") for nid in node_ids], edges)

        pairs = []
        for u, v in itertools.combinations(range(n), 2):
            count = len(enumerate_paths(graph, node_ids[u], node_ids[v]))
            if count:
                pairs.append(((node_ids[u], node_ids[v]), count))
        if not pairs:
            continue
        # Endpoint pairs with a genuine choice of path make richer games.
        contested = [p for p in pairs if p[1] > 1]

        k = rng.choice((1, 2, 2, 3, 3, 3))
        chosen = [
            rng.choice(contested)
            if contested and rng.random() < 0.8
            else rng.choice(pairs)
            for _ in range(k)
        ]
        product = 1
        for _, count in chosen:
            product *= count
        if product > max_profiles:
            continue

        players = tuple(
            Player(i + 1, root, leaf, label=f"browser-{i + 1}")
            for i, ((root, leaf), _) in enumerate(chosen)
        )
        return GameInstance(graph=graph, players=players, delta=delta)


def corpus(count: int = 200, base_seed: int = 20_000) -> list[GameInstance]:
    return [
        random_instance(base_seed + i, delta=DELTAS[i % len(DELTAS)])
        for i in range(count)
    ]


def first_path_profile(instance: GameInstance) -> StrategyProfile:
    """Deterministic baseline: every player on its first enumerated path."""
    return StrategyProfile(
        {
            p.player_id: enumerate_paths(instance.graph, p.root, p.leaf)[0]
            for p in instance.players
        }
    )


def all_profiles(instance: GameInstance):
    """Every joint profile, in the same order the oracle enumerates them."""
    path_sets = [
        enumerate_paths(instance.graph, p.root, p.leaf) for p in instance.players
    ]
    for combo in itertools.product(*path_sets):
        yield StrategyProfile(
            {p.player_id: path for p, path in zip(instance.players, combo)}
        )


def instance_to_json(instance: GameInstance) -> dict:
    """Explicit-form instance document for the CLI."""
    return {
        "format_version": 1,
        "delta": instance.delta,
        "nodes": [
            {"id": node.node_id, "kind": node.kind}
            for node in instance.graph.nodes.values()
        ],
        "edges": [
            {"id": e.edge_id, "src": e.src, "dst": e.dst, "cost": e.cost}
            for e in instance.graph.edges
        ],
        "players": [
            {"id": p.player_id, "root": p.root, "leaf": p.leaf, "label": p.label}
            for p in instance.players
        ],
    }
