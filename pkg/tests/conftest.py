import importlib
import os

import pytest

from wnash import kernels
from wnash.circuit import CircuitBuilder, Circuit, inp
from wnash.model import (
    CircuitSystem,
    CircuitTransducer,
    ExplicitSystem,
    ExplicitTransducer,
    StrategyProfile,
)
from wnash import _pykernels

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def make_sys1() -> ExplicitSystem:
    trans = {
        ("s0", ("a", "x")): "s1",
        ("s0", ("a", "y")): "s0",
        ("s0", ("b", "x")): "s2",
        ("s0", ("b", "y")): "s2",
    }
    for s in ("s1", "s2"):
        for a in "ab":
            for x in "xy":
                trans[(s, (a, x))] = s
    return ExplicitSystem(
        ("s0", "s1", "s2"), "s0", (("a", "b"), ("x", "y")), ({"s1"}, {"s2"}), trans
    )


def const_transducer(action, sys) -> ExplicitTransducer:
    return ExplicitTransducer(
        ("q",), "q", {("q", v): "q" for v in sys.states}, {"q": action}
    )


def const_profile(sys, *actions) -> StrategyProfile:
    return StrategyProfile(tuple(const_transducer(a, sys) for a in actions))


def make_sys1_circuit() -> CircuitSystem:
    """SYS1 with states s0=00, s1=10, s2=01; a=0, b=1; x=0, y=1."""
    b = CircuitBuilder(4)
    p, q, a0, a1 = (inp(i) for i in range(4))
    at_s0 = b.and_(b.not_(p), b.not_(q))
    go_s1 = b.all_of([at_s0, b.not_(a0), b.not_(a1)])
    go_s2 = b.and_(at_s0, a0)
    phi = b.build([b.or_(p, go_s1), b.or_(q, go_s2)])
    g0 = Circuit(2, (), (inp(0),))
    g1 = Circuit(2, (), (inp(1),))
    return CircuitSystem(2, "00", (1, 1), (g0, g1), phi)


def const_circuit_transducer(bit: int) -> CircuitTransducer:
    ob = CircuitBuilder(1)
    out = ob.build([ob.const(bit)])
    return CircuitTransducer(1, "0", Circuit(3, (), (inp(0),)), out)


@pytest.fixture
def sys1():
    return make_sys1()


@pytest.fixture
def sys1c():
    return make_sys1_circuit()


@pytest.fixture(params=["cython", "python"])
def backend(request, monkeypatch):
    """Run the test once per kernel backend (cython skipped when not built)."""
    if request.param == "cython":
        if kernels.BACKEND != "cython":
            pytest.skip("compiled extension not built")
        return kernels.BACKEND
    monkeypatch.setattr(kernels, "eval_batch", _pykernels.eval_batch)
    monkeypatch.setattr(kernels, "attractor_ranks", _pykernels.attractor_ranks)
    return "python"


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
