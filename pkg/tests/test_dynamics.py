import pytest

from pagegame import (
    GameInstance,
    Player,
    Schedule,
    StrategyProfile,
    best_response,
    build_graph,
    enumerate_paths,
    is_nash,
    page_cost,
    player_cost,
    potential,
    replay_trace,
    reweight,
    run_dynamics,
)
from pagegame.errors import UnknownPlayer

from gamegen import DELTAS, build_d1, first_path_profile, random_instance

TOL = 1e-9


# ---------------------------------------------------------------- reweight

def test_reweight_shared_and_fresh(d1):
    # Other player sits on a; a is shared at half cost, b keeps full cost.
    profile = StrategyProfile({1: ("b",), 2: ("a",)})
    assert reweight(d1.graph, profile, 1, 0.0) == {"a": 0.5, "b": 3.0}


def test_reweight_fresh_edge_scales_with_delta():
    graph = build_graph(
        [("r", "abstract"), ("l", "abstract")], [("e", "r", "l", 2.0)]
    )
    profile = StrategyProfile({1: ("e",)})
    assert reweight(graph, profile, 1, 1.0) == {"e": 4.0}


def test_reweight_edge_with_three_other_users():
    graph = build_graph(
        [("r", "abstract"), ("l", "abstract")],
        [("e", "r", "l", 6.0), ("f", "r", "l", 9.0)],
    )
    profile = StrategyProfile({i: ("e",) for i in range(1, 5)})
    for delta in DELTAS:
        assert reweight(graph, profile, 4, delta)["e"] == 1.5


def test_reweight_unknown_player(d1):
    with pytest.raises(UnknownPlayer):
        reweight(d1.graph, StrategyProfile({1: ("a",)}), 5, 0.0)


def test_reweight_bounds_hold():
    for seed in range(10):
        for delta in DELTAS:
            inst = random_instance(1200 + seed, delta=delta)
            profile = first_path_profile(inst)
            for p in inst.players:
                weights = reweight(inst.graph, profile, p.player_id, delta)
                for edge in inst.graph.edges:
                    w = weights[edge.edge_id]
                    assert 0.0 <= w <= edge.cost * (delta + 1.0) + TOL


# ---------------------------------------------------------------- best response

def test_best_response_joins_shared_edge(d1):
    profile = StrategyProfile({1: ("b",), 2: ("a",)})
    assert best_response(d1.graph, profile, 1, 0.0, seed=0) == ("a",)


def test_best_response_tie_is_seed_deterministic():
    inst = build_d1(cost_a=1.0, cost_b=1.0)
    profile = StrategyProfile({1: ("a",)})
    graph = inst.graph
    picks = {seed: best_response(graph, profile, 1, 0.0, seed=seed) for seed in range(24)}
    for seed, pick in picks.items():
        assert pick in (("a",), ("b",))
        assert best_response(graph, profile, 1, 0.0, seed=seed) == pick
    assert {("a",), ("b",)} == set(picks.values()), "both tied paths should occur"


def test_best_response_attains_brute_force_minimum():
    for seed in range(25):
        delta = DELTAS[seed % len(DELTAS)]
        inst = random_instance(1300 + seed, delta=delta)
        profile = first_path_profile(inst)
        for p in inst.players:
            pid = p.player_id
            chosen = best_response(inst.graph, profile, pid, delta, seed=seed)
            chosen_cost = player_cost(
                inst.graph, profile.replace(pid, chosen), pid, delta
            )
            best = min(
                player_cost(inst.graph, profile.replace(pid, alt), pid, delta)
                for alt in enumerate_paths(inst.graph, p.root, p.leaf)
            )
            assert chosen_cost <= best + TOL


def test_reweight_exactness_identity():
    # Path weight equals the player's cost minus the constant social term
    # over everyone else's page cost.
    for seed in range(15):
        delta = DELTAS[seed % len(DELTAS)]
        inst = random_instance(1400 + seed, delta=delta)
        profile = first_path_profile(inst)
        for p in inst.players:
            pid = p.player_id
            weights = reweight(inst.graph, profile, pid, delta)
            others_used = set()
            for other, path in profile.items():
                if other != pid:
                    others_used.update(path)
            others_cost = sum(
                e.cost for e in inst.graph.edges if e.edge_id in others_used
            )
            for alt in enumerate_paths(inst.graph, p.root, p.leaf):
                weight = sum(weights[e] for e in alt)
                z = player_cost(inst.graph, profile.replace(pid, alt), pid, delta)
                assert abs(weight - (z - delta * others_cost)) <= TOL


# ---------------------------------------------------------------- dynamics

def test_dynamics_walks_d1_to_shared_edge(d1):
    start = StrategyProfile({1: ("b",), 2: ("b",)})
    trace = run_dynamics(d1.graph, d1.players, 0.0, initial=start)
    assert trace.converged
    assert trace.final_profile.paths == {1: ("a",), 2: ("a",)}
    assert player_cost(d1.graph, trace.final_profile, 1, 0.0) == 0.5
    assert player_cost(d1.graph, trace.final_profile, 2, 0.0) == 0.5
    # Hand simulation: player 1 leaves b paying 1 < 1.5, player 2 follows at 0.5.
    moves = [s for s in trace.steps if s.path_changed]
    assert [(s.player_id, s.previous_cost, s.new_cost) for s in moves] == [
        (1, 1.5, 1.0),
        (2, 3.0, 0.5),
    ]


def test_single_player_converges_to_cheapest_path():
    for seed in range(10):
        inst = random_instance(1500 + seed)
        solo = (inst.players[0],)
        trace = run_dynamics(inst.graph, solo, 0.0)
        assert trace.converged and trace.passes == 1
        path = trace.final_profile.path(solo[0].player_id)
        cheapest = min(
            sum(inst.graph.edge(e).cost for e in alt)
            for alt in enumerate_paths(inst.graph, solo[0].root, solo[0].leaf)
        )
        assert sum(inst.graph.edge(e).cost for e in path) <= cheapest + TOL


def test_identical_seed_gives_identical_trace():
    for kind in ("round-robin", "random"):
        inst = random_instance(1600, delta=0.5)
        schedule = Schedule(kind=kind, seed=77)
        t1 = run_dynamics(inst.graph, inst.players, 0.5, schedule=schedule)
        t2 = run_dynamics(inst.graph, inst.players, 0.5, schedule=schedule)
        assert t1.steps == t2.steps
        assert t1.final_profile == t2.final_profile
        assert t1.converged == t2.converged


def test_moves_strictly_improve_and_potential_never_rises():
    for seed in range(20):
        delta = DELTAS[seed % len(DELTAS)]
        inst = random_instance(1700 + seed, delta=delta)
        trace = run_dynamics(inst.graph, inst.players, delta)
        last = potential(inst.graph, trace.initial_profile, delta)
        for step in trace.steps:
            if step.path_changed:
                assert step.new_cost < step.previous_cost
            else:
                assert step.new_cost == step.previous_cost
            assert step.potential_after <= last + TOL
            last = step.potential_after


def test_each_move_drops_potential_by_cost_improvement():
    inst = random_instance(1801, delta=1.0)
    start = first_path_profile(inst)
    trace = run_dynamics(inst.graph, inst.players, 1.0, initial=start)
    profile = start
    phi = potential(inst.graph, profile, 1.0)
    for step in trace.steps:
        if not step.path_changed:
            continue
        before = player_cost(inst.graph, profile, step.player_id, 1.0)
        profile = profile.replace(step.player_id, step.path)
        after = player_cost(inst.graph, profile, step.player_id, 1.0)
        new_phi = potential(inst.graph, profile, 1.0)
        assert abs((phi - new_phi) - (before - after)) <= TOL
        phi = new_phi


def test_unconverged_run_returns_trace():
    d1 = build_d1()
    start = StrategyProfile({1: ("b",), 2: ("b",)})
    trace = run_dynamics(d1.graph, d1.players, 0.0, initial=start, max_iters=1)
    assert not trace.converged
    assert trace.passes == 1
    assert any(s.path_changed for s in trace.steps)


def test_max_iters_must_be_positive(d1):
    with pytest.raises(ValueError):
        run_dynamics(d1.graph, d1.players, 0.0, max_iters=0)


def test_schedule_rejects_unknown_kind():
    with pytest.raises(ValueError):
        Schedule(kind="alphabetical")


def test_replay_reproduces_final_profile():
    for seed in range(12):
        delta = DELTAS[seed % len(DELTAS)]
        inst = random_instance(1900 + seed, delta=delta)
        trace = run_dynamics(
            inst.graph, inst.players, delta, schedule=Schedule("random", seed)
        )
        assert replay_trace(inst.graph, trace) == trace.final_profile


def test_converged_profile_is_equilibrium():
    for seed in range(20):
        delta = DELTAS[seed % len(DELTAS)]
        inst = random_instance(2000 + seed, delta=delta)
        trace = run_dynamics(inst.graph, inst.players, delta)
        assert trace.converged
        assert is_nash(inst.graph, trace.final_profile, delta)


# ---------------------------------------------------------------- is_nash

def test_is_nash_accepts_shared_profile(d1):
    assert is_nash(d1.graph, StrategyProfile({1: ("a",), 2: ("a",)}), 0.0)


def test_is_nash_rejects_expensive_profile(d1):
    assert not is_nash(d1.graph, StrategyProfile({1: ("b",), 2: ("b",)}), 0.0)


def test_single_player_on_cheapest_path_is_stable():
    graph = build_graph(
        [("r", "abstract"), ("m", "abstract"), ("l", "abstract")],
        [("a", "r", "m", 1.0), ("b", "m", "l", 1.0), ("c", "r", "l", 5.0)],
    )
    assert is_nash(graph, StrategyProfile({1: ("a", "b")}), 0.0)
    assert not is_nash(graph, StrategyProfile({1: ("c",)}), 0.0)


def test_greedy_start_full_pipeline(d1):
    trace = run_dynamics(d1.graph, d1.players, 0.0)
    assert trace.converged
    assert trace.final_profile.paths == {1: ("a",), 2: ("a",)}
    assert page_cost(d1.graph, trace.final_profile) == 1.0
