import random

import pytest
from hypothesis import given, settings, strategies as st

from test_machines import ACCEPT0, LOOPER, RUNNER, WRITER, alternation
from wnash.gadgets import atm_to_circuit_system, dtm_to_one_agent_circuit, dtm_to_turnbased, game_to_system
from wnash.games import ReachabilityGame, who_wins
from wnash.machines import AltTM, DetTM, atm_accepts, dtm_accepts
from wnash.model import validate_system
from wnash.oracle import gen_random_game
from wnash.realizability import realize, realize_circuit
from wnash.verification import primary_trace, verify

# gate-count constant for the machine encodings, measured over random machines
GATE_CONSTANT = 100


def two_state(goal):
    return ReachabilityGame(["u"], ["w"], [("u", "w"), ("w", "u")], goal, "u")


def test_game_gadget_examples():
    sys, W = game_to_system(two_state({"w"}))
    assert W == frozenset() and validate_system(sys) == []
    assert not realize(sys, W).answer
    sys, W = game_to_system(two_state(set()))
    assert realize(sys, W).answer
    diamond = ReachabilityGame(
        ["t", "safe"], ["w", "r"],
        [("w", "t"), ("w", "safe"), ("t", "r"), ("r", "r"), ("safe", "safe")], {"r"}, "w",
    )
    assert who_wins(diamond) == 1 and realize(game_to_system(diamond)[0], set()).answer


def test_game_gadget_one_state_padding():
    g = ReachabilityGame(["u"], [], [("u", "u")], set(), "u")
    sys, _ = game_to_system(g)
    assert validate_system(sys) == [] and len(sys.action_sets[0]) == 2
    assert realize(sys, set()).answer


def test_game_gadget_name_clash():
    g = ReachabilityGame(["^0"], ["^1"], [("^0", "^1"), ("^1", "^0")], {"^1"}, "^0")
    sys, _ = game_to_system(g)
    assert len(set(sys.states)) == 4
    assert not realize(sys, set()).answer


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_game_gadget_equivalence(seed):
    g = gen_random_game(random.Random(seed), 10)
    sys, W = game_to_system(g)
    n = len(g.states)
    assert len(sys.trans) <= (n + 2) * n * n or n < 2
    assert realize(sys, W).answer == (who_wins(g) == 1)


ATMS = {
    "accept-root": AltTM(("r0",), ("a",), "r0", {}, {"r0": "accept"}),
    "reject-all": AltTM(("r0",), ("a",), "r0", {}, {"r0": "reject"}),
    "or-root": alternation("or"),
    "and-root": alternation("and"),
    "and-over-or": AltTM(
        ("r0", "r1", "r2"), ("a",), "r0",
        {("r0", "_"): (("r1", "a", "R"), ("r2", "a", "R")),
         ("r2", "_"): (("r1", "a", "L"),), ("r2", "a"): (("r2", "a", "R"), ("r1", "a", "L"))},
        {"r0": "and", "r1": "accept", "r2": "or"},
    ),
}


@pytest.mark.parametrize("name", sorted(ATMS))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_alternating_gadget(name, n):
    m = ATMS[name]
    csys, W = atm_to_circuit_system(m, n)
    assert realize_circuit(csys, W).answer == (not atm_accepts(m, n))
    gates = csys.phi.size + sum(g.size for g in csys.goal_circuits)
    assert gates <= GATE_CONSTANT * (len(m.states) * len(m.alphabet)) ** 3 * n


def test_alternating_gadget_accept_root_is_no():
    csys, W = atm_to_circuit_system(ATMS["accept-root"], 2)
    assert not realize_circuit(csys, W).answer
    csys, W = atm_to_circuit_system(ATMS["reject-all"], 2)
    assert realize_circuit(csys, W).answer


DTMS = {"writer": WRITER, "runner": RUNNER, "looper": LOOPER, "accept0": ACCEPT0}


@pytest.mark.parametrize("name", sorted(DTMS))
@pytest.mark.parametrize("n", [2, 3, 4])
def test_turnbased_gadget(name, n):
    m = DTMS[name]
    sys, prof, W = dtm_to_turnbased(m, n)
    assert validate_system(sys) == []
    assert verify(sys, prof, W).is_WNE == dtm_accepts(m, n)
    bound = len(sys.states)
    for t in prof:
        bound *= len(t.states)
    assert len(primary_trace(sys, prof).path) <= bound + 1


@pytest.mark.parametrize("name", sorted(DTMS))
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_one_agent_gadget(name, n):
    m = DTMS[name]
    csys, prof, W = dtm_to_one_agent_circuit(m, n)
    assert W == frozenset({0})
    assert verify(csys, prof, W).is_WNE == dtm_accepts(m, n)
    gates = csys.phi.size + csys.goal_circuits[0].size + prof[0].output.size
    assert gates <= GATE_CONSTANT * (len(m.states) * len(m.alphabet)) ** 3 * n


def test_one_agent_gadget_examples():
    assert verify(*dtm_to_one_agent_circuit(ACCEPT0, 1)).is_WNE
    assert verify(*dtm_to_one_agent_circuit(WRITER, 2)).is_WNE
    assert not verify(*dtm_to_one_agent_circuit(RUNNER, 3)).is_WNE


def test_turnbased_needs_two_cells():
    from wnash.errors import WnashError

    with pytest.raises(WnashError):
        dtm_to_turnbased(WRITER, 1)


def test_random_machines_agree():
    rng = random.Random(21)
    for _ in range(25):
        states = tuple(f"r{i}" for i in range(rng.randint(1, 3)))
        alpha = ("a", "b")[: rng.randint(1, 2)]
        acc = {r for r in states[1:] if rng.random() < 0.4}
        delta = {(r, g): (rng.choice(states), rng.choice(alpha), rng.choice("LR"))
                 for r in states if r not in acc for g in ("_",) + alpha}
        m = DetTM(states, alpha, "r0", delta, acc)
        n = rng.randint(2, 3)
        want = dtm_accepts(m, n)
        assert verify(*dtm_to_turnbased(m, n)).is_WNE == want
        assert verify(*dtm_to_one_agent_circuit(m, n)).is_WNE == want
