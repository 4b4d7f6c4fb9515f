import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wnash import circuit as C
from wnash.circuit import Circuit, CircuitBuilder, Gate, gate, inp
from wnash.errors import ArityMismatch, CapExceeded, ForwardRef, RefOutOfRange, ValidationError
from wnash.oracle import gen_random_circuit


def or_and_not():
    return Circuit(2, (Gate("AND", (inp(0), inp(1))), Gate("NOT", (inp(0),)), Gate("OR", (gate(0), gate(1)))), (gate(2),))


def test_not_gate(backend):
    c = Circuit(1, (Gate("NOT", (inp(0),)),), (gate(0),))
    assert C.eval(c, [1]) == (0,)
    assert C.truth_table(c) == {(0,): (1,), (1,): (0,)}


def test_and_gate(backend):
    c = Circuit(2, (Gate("AND", (inp(0), inp(1))),), (gate(0),))
    assert C.eval(c, [1, 1]) == (1,)
    assert C.eval(c, [1, 0]) == (0,)


def test_two_level_circuit(backend):
    c = or_and_not()
    assert C.eval(c, [0, 1]) == (1,)
    table = C.truth_table(c)
    assert len(table) == 4
    for x, y in table.items():
        assert C.eval(c, x) == y


def test_const1_table(backend):
    c = Circuit(1, (Gate("CONST1", ()),), (gate(0),))
    assert C.truth_table(c) == {(0,): (1,), (1,): (1,)}


def test_validation_examples():
    assert C.validate_circuit(Circuit(1, (Gate("NOT", (inp(0),)),), (gate(0),))) == []
    fwd = Circuit(1, (Gate("AND", (gate(1), inp(0))), Gate("NOT", (inp(0),))), (gate(0),))
    assert any(isinstance(p, ForwardRef) and p.gate == 0 for p in C.validate_circuit(fwd))
    bad = Circuit(1, (Gate("NOT", (inp(0),)),), (gate(99),))
    assert any(isinstance(p, RefOutOfRange) for p in C.validate_circuit(bad))
    with pytest.raises(ValidationError):
        C.check_circuit(bad)


def test_eval_arity_mismatch():
    with pytest.raises(ArityMismatch):
        C.eval(or_and_not(), [1])


def test_truth_table_cap():
    with pytest.raises(CapExceeded):
        C.truth_table(C.identity(5), cap=16)


def test_bit_conventions():
    assert C.int_to_bits(6, 4) == (0, 1, 1, 0)
    assert C.bits_to_int((1, 0, 1)) == 5
    assert C.bits_to_str(C.str_to_bits("0110")) == "0110"
    rows = C.all_inputs(3)
    assert [C.bits_to_int(r) for r in rows] == list(range(8))


def test_builder_macros(backend):
    b = CircuitBuilder(3)
    x, y, s = inp(0), inp(1), inp(2)
    c = b.build([b.xor(x, y), b.mux(s, x, y), b.equals([x, y, s], 5)])
    for bits, out in C.truth_table(c).items():
        x, y, s = bits
        assert out == (x ^ y, x if s else y, int(bits == (1, 0, 1)))


def test_builder_encode():
    b = CircuitBuilder(3)
    c = b.build(b.encode([inp(0), inp(1), inp(2)], 2, lambda k: k + 1))
    assert C.eval(c, [0, 0, 1]) == (1, 1)
    assert C.eval(c, [1, 0, 0]) == (0, 1)
    assert C.eval(c, [0, 0, 0]) == (0, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(0, 25))
def test_batch_agrees_with_single_eval(seed, n, gates):
    c = gen_random_circuit(random.Random(seed), n, 3, gates)
    rows = C.all_inputs(n)
    batch = C.eval_many(c, rows)
    for r in range(len(rows)):
        assert tuple(int(v) for v in batch[r]) == C.eval(c, rows[r])


def test_backends_agree():
    from wnash import _pykernels, kernels

    rng = random.Random(11)
    for _ in range(40):
        c = gen_random_circuit(rng, rng.randint(0, 6), 4, rng.randint(0, 30))
        op, a, b, outs = c.compiled
        rows = C.all_inputs(c.input_arity)
        want = _pykernels.eval_batch(op, a, b, c.input_arity, outs, rows)
        got = kernels.eval_batch(op, a, b, c.input_arity, outs, rows)
        assert np.array_equal(np.asarray(want), np.asarray(got))
