import pytest

from conftest import const_profile, make_sys1
from wnash.circuit import Circuit, CircuitBuilder, inp
from wnash.errors import WnashError
from wnash.formats import serialize_document, suite_report_doc
from wnash.model import ExplicitSystem, validate_system
from wnash.oracle import (
    RandomSystemParams,
    brute_deviation,
    brute_realize,
    consistency_suite,
    gen_random_explicit,
)
from wnash.realizability import RealizabilityVerdict, build_AW, nonempty, realize_explicit


def test_params_bounds():
    with pytest.raises(WnashError):
        RandomSystemParams(state_count=7)
    with pytest.raises(WnashError):
        RandomSystemParams(agent_count=4)
    with pytest.raises(WnashError):
        RandomSystemParams(actions_per_agent=3)


def test_generation_deterministic():
    p = RandomSystemParams(state_count=4, agent_count=2, seed=1)
    assert gen_random_explicit(p) == gen_random_explicit(p)
    assert validate_system(gen_random_explicit(RandomSystemParams(4, 2, seed=42))) == []


def test_single_state_self_loops():
    sys = gen_random_explicit(RandomSystemParams(state_count=1, agent_count=2, seed=3))
    assert all(v == w for v, _, w in sys.trans)


@pytest.mark.parametrize("W,answer", [({0}, True), ({1}, True), ({0, 1}, False), (set(), True)])
def test_brute_sys1(W, answer):
    assert brute_realize(make_sys1(), W) is answer


def _one_state(goal):
    trans = {("v", (a,)): "v" for a in ("p", "q")}
    return ExplicitSystem(("v",), "v", (("p", "q"),), (goal,), trans)


def test_brute_trivial_systems():
    assert brute_realize(_one_state(set()), set())
    assert not brute_realize(_one_state({"v"}), set())


def test_brute_deviation_examples(sys1):
    assert brute_deviation(sys1, const_profile(sys1, "b", "x"), 0)
    assert not brute_deviation(sys1, const_profile(sys1, "a", "y"), 1)
    assert not brute_deviation(_one_state(set()), const_profile(_one_state(set()), "p"), 0)


def test_suite_clean():
    report = consistency_suite(7, 50)
    assert report.passed and report.realize_checks > 50
    assert report.first_counterexample is None


def test_suite_empty():
    report = consistency_suite(3, 0)
    assert report.passed and report.realize_checks == 0


def test_suite_reproducible():
    a = serialize_document(suite_report_doc(consistency_suite(11, 10)))
    b = serialize_document(suite_report_doc(consistency_suite(11, 10)))
    assert a == b


def unpruned(sys, W):
    """Fault injection: skip the deviation-game pruning step."""
    w = nonempty(build_AW(sys, W))
    return RealizabilityVerdict(w is not None, frozenset(W), w)


def test_suite_catches_missing_pruning():
    report = consistency_suite(7, 50, realizer=unpruned)
    assert not report.passed
    assert report.realize_mismatches > 0 and report.first_counterexample


def test_missing_pruning_breaks_sys1_certificate():
    from wnash.realizability import certify_witness

    sys = make_sys1()
    bad = unpruned(sys, {1})
    assert bad.answer and not certify_witness(sys, {1}, bad.witness)
    assert certify_witness(sys, {1}, realize_explicit(sys, {1}).witness)
