"""Combinational circuits over the gate basis {CONST0, CONST1, NOT, AND, OR}."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import (
    ArityMismatch,
    CapExceeded,
    EmptyOutputs,
    ForwardRef,
    RefOutOfRange,
    ValidationError,
)

DEFAULT_CAP = 1 << 24

OPS = {"CONST0": 0, "CONST1": 1, "NOT": 2, "AND": 3, "OR": 4}
ARITY = {"CONST0": 0, "CONST1": 0, "NOT": 1, "AND": 2, "OR": 2}


class Ref(NamedTuple):
    """A wire: input ``i<index>`` or the output of gate ``g<index>``."""

    kind: str
    index: int

    def __str__(self):
        return f"{self.kind}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "Ref":
        if len(text) < 2 or text[0] not in "ig" or not text[1:].isdigit():
            raise ValueError(f"bad reference {text!r}")
        return cls(text[0], int(text[1:]))


def inp(i: int) -> Ref:
    return Ref("i", i)


def gate(j: int) -> Ref:
    return Ref("g", j)


class Gate(NamedTuple):
    op: str
    args: tuple = ()


@dataclass(frozen=True)
class Circuit:
    input_arity: int
    gates: tuple
    outputs: tuple

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(Gate(g.op, tuple(g.args)) for g in self.gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))

    @property
    def output_arity(self) -> int:
        return len(self.outputs)

    @property
    def size(self) -> int:
        return len(self.gates)

    def _node(self, ref: Ref) -> int:
        return ref.index if ref.kind == "i" else self.input_arity + ref.index

    @cached_property
    def compiled(self):
        """Flat arrays consumed by the kernels (op codes, operand nodes, output nodes)."""
        n = len(self.gates)
        op = np.zeros(n, dtype=np.intc)
        a = np.zeros(n, dtype=np.intc)
        b = np.zeros(n, dtype=np.intc)
        for j, g in enumerate(self.gates):
            op[j] = OPS[g.op]
            if g.args:
                a[j] = self._node(g.args[0])
                b[j] = self._node(g.args[-1])
        outs = np.array([self._node(r) for r in self.outputs], dtype=np.intc)
        return op, a, b, outs


def validate_circuit(c: Circuit) -> list:
    """Return every structural problem of ``c``; an empty list means well formed."""
    problems = []
    for j, g in enumerate(c.gates):
        if g.op not in OPS or len(g.args) != ARITY[g.op]:
            problems.append(RefOutOfRange(f"gate {j}", g.op))
            continue
        for ref in g.args:
            if ref.kind == "i":
                if not 0 <= ref.index < c.input_arity:
                    problems.append(RefOutOfRange(f"gate {j}", str(ref)))
            elif ref.index >= j:
                problems.append(ForwardRef(j))
            elif ref.index < 0:
                problems.append(RefOutOfRange(f"gate {j}", str(ref)))
    if not c.outputs:
        problems.append(EmptyOutputs())
    for ref in c.outputs:
        limit = c.input_arity if ref.kind == "i" else len(c.gates)
        if not 0 <= ref.index < limit:
            problems.append(RefOutOfRange("outputs", str(ref)))
    return problems


def check_circuit(c: Circuit) -> Circuit:
    problems = validate_circuit(c)
    if problems:
        raise ValidationError(problems)
    return c


def eval(c: Circuit, bits: Sequence[int]) -> tuple:  # noqa: A001 - mirrors the operation name
    """Evaluate ``c`` on one input vector with a single forward pass in gate order."""
    if len(bits) != c.input_arity:
        raise ArityMismatch("circuit input", c.input_arity, len(bits))
    val = [1 if b else 0 for b in bits]
    n = c.input_arity
    for g in c.gates:
        op, args = g.op, g.args
        if op == "CONST0":
            val.append(0)
        elif op == "CONST1":
            val.append(1)
        else:
            x = val[args[0].index if args[0].kind == "i" else n + args[0].index]
            if op == "NOT":
                val.append(1 - x)
            else:
                y = val[args[1].index if args[1].kind == "i" else n + args[1].index]
                val.append(x & y if op == "AND" else x | y)
    return tuple(val[r.index if r.kind == "i" else n + r.index] for r in c.outputs)


def eval_many(c: Circuit, rows) -> np.ndarray:
    """Evaluate ``c`` on each row of a ``(m, input_arity)`` 0/1 array via the kernel backend."""
    rows = np.asarray(rows, dtype=np.uint8)
    if rows.ndim != 2 or rows.shape[1] != c.input_arity:
        raise ArityMismatch("circuit input", c.input_arity, rows.shape[-1] if rows.ndim else 0)
    op, a, b, outs = c.compiled
    return kernels.eval_batch(op, a, b, c.input_arity, outs, rows)


def int_to_bits(value: int, width: int) -> tuple:
    """Bits of ``value``, variable 0 first (most significant)."""
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


def bits_to_int(bits: Sequence[int]) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | (1 if b else 0)
    return out


def bits_to_str(bits: Sequence[int]) -> str:
    return "".join("1" if b else "0" for b in bits)


def str_to_bits(text: str) -> tuple:
    if any(ch not in "01" for ch in text):
        raise ValueError(f"not a bit string: {text!r}")
    return tuple(int(ch) for ch in text)


def all_inputs(width: int) -> np.ndarray:
    """Every bit vector of ``width`` in canonical order, one per row."""
    values = np.arange(1 << width, dtype=np.int64)
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((values[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def truth_table(c: Circuit, cap: int = DEFAULT_CAP) -> dict:
    """Map every input vector (tuple, canonical order) to its output vector."""
    rows = 1 << c.input_arity
    if rows > cap:
        raise CapExceeded(rows, cap)
    out = eval_many(c, all_inputs(c.input_arity))
    return {int_to_bits(x, c.input_arity): tuple(int(b) for b in out[x]) for x in range(rows)}


class CircuitBuilder:
    """Incremental construction with macro-expanded XOR, MUX and comparators."""

    def __init__(self, input_arity: int):
        self.input_arity = input_arity
        self.gates: list = []
        self._consts: dict = {}

    def input(self, i: int) -> Ref:
        if not 0 <= i < self.input_arity:
            raise IndexError(i)
        return inp(i)

    def inputs(self, start: int, count: int) -> list:
        return [inp(start + k) for k in range(count)]

    def _add(self, op, *args) -> Ref:
        self.gates.append(Gate(op, args))
        return gate(len(self.gates) - 1)

    def const(self, value) -> Ref:
        key = 1 if value else 0
        if key not in self._consts:
            self._consts[key] = self._add("CONST1" if key else "CONST0")
        return self._consts[key]

    def not_(self, x):
        return self._add("NOT", x)

    def and_(self, x, y):
        return self._add("AND", x, y)

    def or_(self, x, y):
        return self._add("OR", x, y)

    def xor(self, x, y):
        return self.or_(self.and_(x, self.not_(y)), self.and_(self.not_(x), y))

    def mux(self, sel, then, other):
        """``then`` when ``sel`` is 1, else ``other``."""
        return self.or_(self.and_(sel, then), self.and_(self.not_(sel), other))

    def all_of(self, refs):
        refs = list(refs)
        if not refs:
            return self.const(1)
        acc = refs[0]
        for r in refs[1:]:
            acc = self.and_(acc, r)
        return acc

    def any_of(self, refs):
        refs = list(refs)
        if not refs:
            return self.const(0)
        acc = refs[0]
        for r in refs[1:]:
            acc = self.or_(acc, r)
        return acc

    def equals(self, bits, value: int):
        """1 iff the wires ``bits`` (most significant first) spell ``value``."""
        width = len(bits)
        if value >> width:
            return self.const(0)
        lits = [b if (value >> (width - 1 - k)) & 1 else self.not_(b) for k, b in enumerate(bits)]
        return self.all_of(lits)

    def encode(self, selectors, width: int, code_of):
        """Wires of ``code_of(k)`` for the (one-hot) selector ``selectors[k]`` that is set."""
        out = []
        for bit in range(width):
            hits = [s for k, s in enumerate(selectors) if (code_of(k) >> (width - 1 - bit)) & 1]
            out.append(self.any_of(hits))
        return out

    def build(self, outputs) -> Circuit:
        return Circuit(self.input_arity, tuple(self.gates), tuple(outputs))


def identity(width: int) -> Circuit:
    return Circuit(width, (), tuple(inp(i) for i in range(width)))


def constant(input_arity: int, bits: Sequence[int]) -> Circuit:
    b = CircuitBuilder(input_arity)
    return b.build([b.const(x) for x in bits])
