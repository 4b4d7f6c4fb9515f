import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import make_sys1, make_sys1_circuit
from wnash.circuit import Circuit, CircuitBuilder, inp
from wnash.errors import DecodeError
from wnash.model import CircuitSystem, step
from wnash.oracle import RandomSystemParams, gen_random_explicit, suite_params
from wnash.realizability import (
    GoalTracker,
    LassoWord,
    build_AW,
    build_deviation_game,
    certify_witness,
    decode_word,
    nonempty,
    prune,
    realize,
    realize_circuit,
    realize_explicit,
    solve_deviation_games,
)
from wnash.games import solve

SYS1_VERDICTS = [({0}, True), ({1}, True), ({0, 1}, False), (set(), True)]


def labels(aw):
    return {aw.label(q) for q in aw.states}


def test_aw_single_winner(sys1):
    aw = build_AW(sys1, {0})
    assert labels(aw) == {("s0", frozenset({0})), ("s1", frozenset())}
    assert aw.step(aw.init, ("a", "x")) == GoalTracker(1, frozenset())
    assert aw.step(aw.init, ("b", "x")) is None and aw.step(aw.init, ("b", "y")) is None
    assert {aw.label(q) for q in aw.accepting} == {("s1", frozenset())}


def test_aw_full_coalition_never_stuck(sys1):
    aw = build_AW(sys1, {0, 1})
    assert len(aw.trans) == len(aw.states) * 4


def test_aw_empty_coalition(sys1):
    aw = build_AW(sys1, set())
    assert aw.accepting == set(aw.states)
    assert aw.step(aw.init, ("a", "x")) is None and aw.step(aw.init, ("b", "y")) is None
    assert aw.step(aw.init, ("a", "y")) == aw.init


def test_aw_initial_goal_of_loser():
    b = CircuitBuilder(1)
    one = b.build([b.const(1)])
    csys = CircuitSystem(1, "0", (1,), (one,), Circuit(2, (), (inp(0),)))
    assert build_AW(csys, set()).empty
    assert realize_circuit(csys, {0}).answer
    assert not realize_circuit(csys, set()).answer


def test_deviation_game_facts(sys1):
    parts = {j: solve(build_deviation_game(sys1, j).game) for j in (0, 1)}
    g0, g1 = (build_deviation_game(sys1, j) for j in (0, 1))
    pair = lambda g, d: g.pair("s0", d)
    assert pair(g0, ("b", "x")) in parts[0].win0
    assert pair(g0, ("a", "x")) in parts[0].win0
    assert pair(g0, ("b", "y")) in parts[0].win1
    assert pair(g0, ("a", "y")) in parts[0].win1
    assert pair(g1, ("a", "y")) in parts[1].win1
    assert pair(g1, ("b", "x")) in parts[1].win0
    assert pair(g1, ("b", "y")) in parts[1].win0
    succ = sorted(g1.game.successors[pair(g1, ("a", "y"))])
    assert succ == [0, 1]


def test_prune_examples(sys1):
    aw = build_AW(sys1, {1})
    pruned = prune(aw, solve_deviation_games(sys1, {1}))
    assert pruned.step(pruned.init, ("b", "x")) is None
    assert pruned.step(pruned.init, ("b", "y")) is not None
    aw = build_AW(sys1, set())
    pruned = prune(aw, solve_deviation_games(sys1, set()))
    assert pruned.step(pruned.init, ("a", "y")) == pruned.init


def test_lasso_examples(sys1):
    pruned = prune(build_AW(sys1, {0}), solve_deviation_games(sys1, {0}))
    assert nonempty(pruned) == LassoWord([("a", "x")], [("a", "x")])
    pruned = prune(build_AW(sys1, {0, 1}), solve_deviation_games(sys1, {0, 1}))
    assert nonempty(pruned) is None
    pruned = prune(build_AW(sys1, set()), solve_deviation_games(sys1, set()))
    assert nonempty(pruned) == LassoWord([], [("a", "y")])


@pytest.mark.parametrize("W,answer", SYS1_VERDICTS)
def test_sys1_verdicts(backend, W, answer):
    v = realize_explicit(make_sys1(), W)
    assert v.answer is answer
    if answer:
        assert certify_witness(make_sys1(), W, v.witness)
        assert v.certificate.winning_set == frozenset(W)


def test_sys1_witnesses(sys1):
    assert realize(sys1, {1}).witness.prefix == (("b", "y"),)
    assert realize(sys1, set()).witness == LassoWord([], [("a", "y")])


@pytest.mark.parametrize("W,answer", SYS1_VERDICTS)
def test_sys1_circuit_encoding(W, answer):
    v = realize_circuit(make_sys1_circuit(), W)
    assert v.answer is answer
    if answer:
        assert certify_witness(make_sys1_circuit(), W, v.witness)


def test_certify_rejects_dangerous_word(sys1):
    assert not certify_witness(sys1, {1}, LassoWord([("b", "x")], [("a", "x")]))
    assert certify_witness(sys1, set(), LassoWord([], [("a", "y")]))
    assert not certify_witness(sys1, {0}, LassoWord([], [("a", "y")]))


def test_decode_errors(sys1):
    with pytest.raises(DecodeError):
        decode_word(build_AW(sys1, {0}).arena, LassoWord([("c", "x")], [("a", "x")]))
    with pytest.raises(DecodeError):
        decode_word(build_AW(sys1, {0}).arena, LassoWord([("a", "x")], []))


def test_receipts_cover_trace(sys1):
    v = realize(sys1, {1})
    assert v.certificate.receipts == {0: (("s0", ("b", "y")), ("s2", ("a", "x")))}


def _replay(sys, W, word):
    """Goal pattern of the finite play, or 'stuck' once a loser's goal is entered."""
    v, won = sys.init, set(sys.goal_agents(sys.init))
    for d in word:
        v = step(sys, v, d)
        hit = sys.goal_agents(v)
        if hit - W:
            return "stuck"
        won |= hit
    return won


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_automaton_tracks_goal_pattern(seed):
    rng = random.Random(seed)
    sys = gen_random_explicit(suite_params(seed, 0))
    W = frozenset(i for i in range(sys.agent_count) if rng.random() < 0.5)
    aw = build_AW(sys, W)
    for _ in range(25):
        word = [rng.choice(sys.decisions) for _ in range(rng.randint(0, 6))]
        if sys.goal_agents(sys.init) - W:
            assert aw.empty
            continue
        q = aw.init
        for d in word:
            q = aw.step(q, d)
            if q is None:
                break
        pattern = _replay(sys, W, word)
        if pattern == "stuck":
            assert q is None
        else:
            assert q is not None
            assert (q in aw.accepting) == (pattern == W)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lasso_bound_and_monotonicity(seed):
    sys = gen_random_explicit(suite_params(seed, 1))
    for W in (frozenset(), frozenset({0}), frozenset(range(sys.agent_count))):
        aw = build_AW(sys, W)
        pruned = prune(aw, solve_deviation_games(sys, W))
        word = nonempty(pruned)
        if word is None:
            continue
        assert len(word) <= len(pruned.states)
        q = aw.init
        seen = set()
        for d in list(word.prefix) + list(word.cycle) * (len(aw.states) + 1):
            q = aw.step(q, d)
            assert q is not None
            seen.add(q)
        assert seen & aw.accepting


def test_realize_rejects_bad_agent(sys1):
    with pytest.raises(ValueError):
        realize(sys1, {5})


def test_one_state_no_goals():
    sys = gen_random_explicit(RandomSystemParams(state_count=1, agent_count=2, goal_density=0.0, seed=1))
    assert realize(sys, set()).answer
