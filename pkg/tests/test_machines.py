import pytest
from hypothesis import given, settings, strategies as st

from wnash.errors import MalformedID, ValidationError
from wnash.machines import (
    AltTM,
    DetTM,
    MachineID,
    atm_accepts,
    atm_game,
    dtm_accepts,
    tm_step,
    validate_atm,
    validate_dtm,
)

WRITER = DetTM(("r0", "r1"), ("a",), "r0", {("r0", "_"): ("r1", "a", "R"), ("r0", "a"): ("r1", "a", "R")}, {"r1"})
RUNNER = DetTM(("r0",), ("a",), "r0", {("r0", "_"): ("r0", "a", "R"), ("r0", "a"): ("r0", "a", "R")})
LOOPER = DetTM(
    ("r0", "r1"), ("a",), "r0",
    {("r0", "_"): ("r1", "a", "R"), ("r0", "a"): ("r1", "a", "R"),
     ("r1", "_"): ("r0", "a", "L"), ("r1", "a"): ("r0", "a", "L")},
)
ACCEPT0 = DetTM(("r0",), ("a",), "r0", {}, {"r0"})


def test_step_on_rendered_id():
    m = DetTM(("r", "r'"), ("a", "b", "c"), "r", {("r", "b"): ("r'", "c", "R")}, {"r'"})
    mid = MachineID.parse("⊥, a, ⟨b,r⟩, a, ⊥")
    assert mid.render() == "⊥, a, ⟨b,r⟩, a, ⊥"
    res = tm_step(m, mid)
    assert res.kind == "next" and res.id.render() == "⊥, a, c, ⟨a,r'⟩, ⊥"


def test_step_accept_and_bounds():
    assert tm_step(ACCEPT0, MachineID.parse("⟨a,r0⟩, a")).kind == "accept"
    left = DetTM(("r0",), ("a",), "r0", {("r0", "_"): ("r0", "a", "L"), ("r0", "a"): ("r0", "a", "L")})
    assert tm_step(left, MachineID.initial("r0", 1)).kind == "out_of_bounds"


def test_malformed_id():
    with pytest.raises(MalformedID):
        tm_step(WRITER, MachineID.parse("a, a"))
    with pytest.raises(MalformedID):
        MachineID.parse("⟨a,r0⟩, ⟨a,r0⟩").head


def test_dtm_accepts_examples():
    assert dtm_accepts(ACCEPT0, 1)
    assert not dtm_accepts(RUNNER, 3)
    assert dtm_accepts(WRITER, 2)
    assert not dtm_accepts(LOOPER, 3)


def test_dtm_validation():
    partial = DetTM(("r0",), ("a",), "r0", {("r0", "_"): ("r0", "a", "R")})
    assert validate_dtm(partial)
    blank_write = DetTM(("r0",), ("a",), "r0", {("r0", "_"): ("r0", "_", "R"), ("r0", "a"): ("r0", "a", "R")})
    assert validate_dtm(blank_write)
    with pytest.raises(ValidationError):
        dtm_accepts(partial, 2)


def alternation(root):
    return AltTM(
        ("r0", "r1", "r2"), ("a",), "r0",
        {("r0", "_"): (("r1", "a", "R"), ("r2", "a", "R")),
         ("r2", "_"): (("r2", "a", "L"),), ("r2", "a"): (("r2", "a", "R"),)},
        {"r0": root, "r1": "accept", "r2": "det"},
    )


def test_atm_accepts_examples():
    assert atm_accepts(AltTM(("r0",), ("a",), "r0", {}, {"r0": "accept"}), 1)
    assert not atm_accepts(AltTM(("r0",), ("a",), "r0", {}, {"r0": "reject"}), 2)
    assert atm_accepts(alternation("or"), 2)
    assert not atm_accepts(alternation("and"), 2)


def test_atm_validation():
    bad = AltTM(("r0",), ("a",), "r0", {}, {"r0": "det"})
    assert validate_atm(bad)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([WRITER, RUNNER, LOOPER]), st.integers(1, 5), st.integers(0, 8))
def test_single_head_preserved(m, n, steps):
    mid = MachineID.initial(m.init, n)
    for _ in range(steps):
        res = tm_step(m, mid)
        if res.kind != "next":
            break
        mid = res.id
        assert sum(r is not None for _, r in mid.cells) == 1
