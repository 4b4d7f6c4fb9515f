"""Integer-indexed views of explicit and circuit systems shared by the engines.

Decisions are numbered in mixed radix with agent 0 most significant, which is
the canonical decision order of both representations (for circuits it is the
concatenated action bit string read as a binary number).
"""
from __future__ import annotations

from collections import deque

import numpy as np

from .circuit import DEFAULT_CAP, all_inputs, bits_to_str, eval_many, int_to_bits, str_to_bits
from .errors import CapExceeded, DecodeError
from .model import CircuitSystem, ExplicitSystem, check_circuit_system, check_system


class Arena:
    action_counts: list
    init: int

    def _setup_radix(self, counts):
        self.action_counts = list(counts)
        self.k = len(counts)
        weights = [1] * self.k
        for i in range(self.k - 2, -1, -1):
            weights[i] = weights[i + 1] * counts[i + 1]
        self.weights = weights
        total = 1
        for c in counts:
            total *= c
        self.num_decisions = total

    def component(self, d: int, j: int) -> int:
        return (d // self.weights[j]) % self.action_counts[j]

    def components(self, d: int) -> tuple:
        return tuple(self.component(d, j) for j in range(self.k))

    def compose(self, comps) -> int:
        return sum(c * w for c, w in zip(comps, self.weights))

    def deviations(self, d: int, j: int) -> list:
        """``d[a_j]`` for every action ``a_j`` of agent ``j`` in canonical order."""
        base = d - self.component(d, j) * self.weights[j]
        return [base + a * self.weights[j] for a in range(self.action_counts[j])]

    def decision_label(self, d: int) -> tuple:
        return tuple(self.action_label(j, a) for j, a in enumerate(self.components(d)))

    def decision_index(self, labels) -> int:
        labels = tuple(labels)
        if len(labels) != self.k:
            raise DecodeError(f"decision {labels} has {len(labels)} components, expected {self.k}")
        return self.compose(self.action_index(j, a) for j, a in enumerate(labels))

    def reachable(self) -> list:
        """States reachable from the initial state, in breadth-first canonical order."""
        seen = {self.init}
        order = [self.init]
        queue = deque(order)
        while queue:
            v = queue.popleft()
            for w in self.successors(v):
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    queue.append(w)
        return order


class ExplicitArena(Arena):
    is_circuit = False

    def __init__(self, sys: ExplicitSystem, validate: bool = True):
        if validate:
            check_system(sys)
        self.system = sys
        self._setup_radix([len(a) for a in sys.action_sets])
        self._index = {s: i for i, s in enumerate(sys.states)}
        self._actions = [{a: k for k, a in enumerate(acts)} for acts in sys.action_sets]
        table = sys.table
        self._succ = [[self._index[table[(v, d)]] for d in sys.decisions] for v in sys.states]
        self._goals = [sys.goal_agents(v) for v in sys.states]
        self.init = self._index[sys.init]
        self.num_states = len(sys.states)

    def successors(self, v: int) -> list:
        return self._succ[v]

    def goals_at(self, v: int) -> frozenset:
        return self._goals[v]

    def state_label(self, v: int):
        return self.system.states[v]

    def state_index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise DecodeError(f"unknown state {label!r}") from None

    def action_label(self, j: int, a: int):
        return self.system.action_sets[j][a]

    def action_index(self, j: int, label) -> int:
        try:
            return self._actions[j][label]
        except KeyError:
            raise DecodeError(f"unknown action {label!r} for agent {j}") from None


class CircuitArena(Arena):
    """Lazily evaluated circuit system; only rows actually visited are computed.

    ``cap`` bounds the number of (state, decision) rows materialized.
    """

    is_circuit = True

    def __init__(self, csys: CircuitSystem, cap: int = DEFAULT_CAP, validate: bool = True):
        if validate:
            check_circuit_system(csys)
        self.system = csys
        self.cap = cap
        self._setup_radix([1 << a for a in csys.action_vars])
        self.n = csys.state_vars
        self.init = int("".join(map(str, csys.init)), 2)
        self.num_states = 1 << self.n
        self._decision_rows = all_inputs(csys.decision_vars)
        self._succ: dict = {}
        self._goals: dict = {}
        self.rows = 0

    def successors(self, v: int) -> list:
        out = self._succ.get(v)
        if out is None:
            nd = self.num_decisions
            if self.rows + nd > self.cap:
                raise CapExceeded(self.rows + nd, self.cap)
            self.rows += nd
            state = np.tile(np.array(int_to_bits(v, self.n), dtype=np.uint8), (nd, 1))
            res = eval_many(self.system.phi, np.hstack([state, self._decision_rows]))
            weights = 1 << np.arange(self.n - 1, -1, -1, dtype=np.int64)
            out = (res.astype(np.int64) @ weights).tolist()
            self._succ[v] = out
        return out

    def goals_at(self, v: int) -> frozenset:
        out = self._goals.get(v)
        if out is None:
            row = np.array([int_to_bits(v, self.n)], dtype=np.uint8)
            out = frozenset(i for i, g in enumerate(self.system.goal_circuits) if eval_many(g, row)[0, 0])
            self._goals[v] = out
        return out

    def state_label(self, v: int) -> str:
        return bits_to_str(int_to_bits(v, self.n))

    def state_index(self, label) -> int:
        try:
            bits = str_to_bits(label)
        except ValueError as exc:
            raise DecodeError(str(exc)) from None
        if len(bits) != self.n:
            raise DecodeError(f"state {label!r} has {len(bits)} bits, expected {self.n}")
        return int(label, 2)

    def action_label(self, j: int, a: int) -> str:
        return bits_to_str(int_to_bits(a, self.system.action_vars[j]))

    def action_index(self, j: int, label) -> int:
        width = self.system.action_vars[j]
        if not isinstance(label, str) or len(label) != width or set(label) - {"0", "1"}:
            raise DecodeError(f"bad action {label!r} for agent {j}")
        return int(label, 2)


def arena_for(system, cap: int = DEFAULT_CAP) -> Arena:
    if isinstance(system, Arena):
        return system
    if isinstance(system, CircuitSystem):
        return CircuitArena(system, cap)
    if isinstance(system, ExplicitSystem):
        return ExplicitArena(system)
    raise TypeError(f"not a system: {type(system).__name__}")
