import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wnash.errors import DeadEndState, IllegalOpponentMove, MissingInit, ValidationError
from wnash.games import ReachabilityGame, play, solve, validate_game, who_wins
from wnash.oracle import gen_random_game


def two_state(goal=("w",), init="u"):
    return ReachabilityGame(["u"], ["w"], [("u", "w"), ("w", "u")], set(goal), init)


def diamond(init="w"):
    # avoider at w chooses between a branch into the goal and a safe sink
    return ReachabilityGame(
        ["t", "safe"], ["w", "r"],
        [("w", "t"), ("w", "safe"), ("t", "r"), ("r", "r"), ("safe", "safe")],
        {"r"}, init,
    )


def test_two_state_win0(backend):
    p = solve(two_state())
    assert p.win0 == {"u", "w"}


def test_empty_goal(backend):
    p = solve(two_state(goal=()))
    assert p.win0 == set() and p.win1 == {"u", "w"}


def test_diamond(backend):
    p = solve(diamond())
    assert "w" in p.win1 and "t" in p.win0
    assert p.strat1["w"] == "safe"
    assert who_wins(diamond()) == 1


def test_who_wins_examples():
    assert who_wins(two_state(init="w")) == 0
    assert who_wins(two_state()) == 0
    with pytest.raises(MissingInit):
        who_wins(two_state(init=None))


def test_play_examples():
    g = diamond()
    p = solve(g)
    path = play(g, p, "w", lambda s, succ: succ[-1])
    assert len(path) == 5 and "r" not in path
    g2 = two_state()
    assert play(g2, solve(g2), "w", lambda s, succ: succ[0]) == ["w"]
    assert play(g2, solve(g2), "u", lambda s, succ: succ[0]) == ["u", "w"]


def test_illegal_opponent_move():
    g = diamond()
    with pytest.raises(IllegalOpponentMove):
        play(g, solve(g), "w", lambda s, succ: "w")


def test_dead_end_rejected():
    g = ReachabilityGame(["u"], ["w"], [("u", "w")], {"w"}, "u")
    assert any(isinstance(p, DeadEndState) for p in validate_game(g))
    with pytest.raises(ValidationError):
        solve(g)


def check_partition(g, p):
    assert p.win0 | p.win1 == set(g.states) and not p.win0 & p.win1
    for s in g.states:
        succ = g.successors[s]
        if s in p.win1:
            if g.owner(s) == 0:
                assert all(t in p.win1 for t in succ)
            else:
                assert any(t in p.win1 for t in succ)
    for s, t in p.strat0.items():
        assert p.rank[t] < p.rank[s]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_partition_properties(seed):
    rng = random.Random(seed)
    g = gen_random_game(rng)
    p = solve(g)
    check_partition(g, p)
    for init in g.states:
        for _ in range(5):
            path = play(g, p, init, lambda s, succ: rng.choice(succ))
            hit = any(s in g.goal for s in path)
            assert hit == (init in p.win0)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_goal_monotonicity(seed):
    rng = random.Random(seed)
    g = gen_random_game(rng)
    extra = set(rng.sample(list(g.states), rng.randint(0, len(g.states))))
    bigger = ReachabilityGame(g.v0_states, g.v1_states, g.edges, g.goal | extra, g.init)
    assert solve(g).win0 <= solve(bigger).win0


def test_backends_agree():
    from wnash import _pykernels, kernels
    from wnash.games import _csr

    rng = random.Random(5)
    for _ in range(100):
        args = _csr(gen_random_game(rng, 12))
        assert np.array_equal(
            np.asarray(_pykernels.attractor_ranks(*args)), np.asarray(kernels.attractor_ranks(*args))
        )
