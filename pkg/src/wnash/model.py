"""System, transducer and trace types, plus unfolding of circuit-based objects."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .circuit import (
    DEFAULT_CAP,
    Circuit,
    all_inputs,
    bits_to_str,
    eval_many,
    str_to_bits,
    validate_circuit,
)
from .errors import (
    ArityMismatch,
    CapExceeded,
    DuplicateRow,
    MissingTransitionRow,
    NotATrace,
    RepresentationMismatch,
    SingletonActionSet,
    UnknownAction,
    UnknownState,
    ValidationError,
)
from . import circuit as _circuit


def substitute(decision: Sequence, j: int, action) -> tuple:
    """``d[a_j]``: the decision with agent ``j``'s component replaced."""
    d = list(decision)
    d[j] = action
    return tuple(d)


@dataclass(frozen=True)
class ExplicitSystem:
    """Explicit multi-agent system with a full transition table.

    ``trans`` may be given as a mapping ``(state, decision) -> state`` or as an
    iterable of ``(state, decision, state)`` rows; it is stored as rows so that
    duplicates survive until validation.
    """

    states: tuple
    init: str
    action_sets: tuple
    goals: tuple
    trans: tuple = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "action_sets", tuple(tuple(a) for a in self.action_sets))
        object.__setattr__(self, "goals", tuple(frozenset(g) for g in self.goals))
        rows = self.trans
        if isinstance(rows, Mapping):
            rows = [(v, d, w) for (v, d), w in rows.items()]
        object.__setattr__(self, "trans", tuple((v, tuple(d), w) for v, d, w in rows))

    @property
    def agent_count(self) -> int:
        return len(self.action_sets)

    @cached_property
    def decisions(self) -> tuple:
        """All decisions in canonical order (agent 0 varies slowest)."""
        return tuple(itertools.product(*self.action_sets))

    @cached_property
    def table(self) -> dict:
        return {(v, d): w for v, d, w in self.trans}

    def goal_agents(self, state) -> frozenset:
        return frozenset(i for i, g in enumerate(self.goals) if state in g)


def validate_system(sys: ExplicitSystem) -> list:
    """Every invariant violation of ``sys``; empty when the system is well formed."""
    problems = []
    known = set(sys.states)
    if sys.init not in known:
        problems.append(UnknownState(sys.init, "init"))
    if len(sys.goals) != sys.agent_count:
        problems.append(ArityMismatch("goals", sys.agent_count, len(sys.goals)))
    for i, g in enumerate(sys.goals):
        for s in sorted(g - known):
            problems.append(UnknownState(s, f"goal {i}"))
    for i, acts in enumerate(sys.action_sets):
        if len(set(acts)) < 2:
            problems.append(SingletonActionSet(i))
    action_sets = [set(a) for a in sys.action_sets]
    seen = set()
    for v, d, w in sys.trans:
        bad = False
        if v not in known:
            problems.append(UnknownState(v, "transition source"))
            bad = True
        if w not in known:
            problems.append(UnknownState(w, "transition target"))
        if len(d) != sys.agent_count:
            problems.append(ArityMismatch("decision", sys.agent_count, len(d)))
            bad = True
        else:
            for i, a in enumerate(d):
                if a not in action_sets[i]:
                    problems.append(UnknownAction(i, a, "transition"))
                    bad = True
        if bad:
            continue
        if (v, d) in seen:
            problems.append(DuplicateRow(v, d))
        seen.add((v, d))
    if sys.agent_count:
        for v in sys.states:
            for d in sys.decisions:
                if (v, d) not in seen:
                    problems.append(MissingTransitionRow(v, d))
    return problems


def check_system(sys: ExplicitSystem) -> ExplicitSystem:
    problems = validate_system(sys)
    if problems:
        raise ValidationError(problems)
    return sys


def step(sys: ExplicitSystem, v, d) -> str:
    return sys.table[(v, tuple(d))]


@dataclass(frozen=True)
class LassoTrace:
    """The ultimately periodic state sequence ``prefix . cycle^omega``."""

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("cycle must be nonempty")

    @property
    def states(self) -> tuple:
        return self.prefix + self.cycle


def _check_trace(sys: ExplicitSystem, t: LassoTrace):
    seq = t.states
    if seq[0] != sys.init:
        raise NotATrace(f"trace starts at {seq[0]!r}, not the initial state")
    succ = {}
    for v, _, w in sys.trans:
        succ.setdefault(v, set()).add(w)
    pairs = list(zip(seq, seq[1:])) + [(t.cycle[-1], t.cycle[0])]
    for a, b in pairs:
        if b not in succ.get(a, ()):
            raise NotATrace(f"no decision leads from {a!r} to {b!r}")


def winning_set(sys: ExplicitSystem, t: LassoTrace) -> frozenset:
    """Agents whose goal contains some state of the trace (the first state included)."""
    _check_trace(sys, t)
    visited = set(t.states)
    return frozenset(i for i, g in enumerate(sys.goals) if g & visited)


@dataclass(frozen=True)
class CircuitSystem:
    """Circuit-based multi-agent system over bit-vector states and actions."""

    state_vars: int
    init: tuple
    action_vars: tuple
    goal_circuits: tuple
    phi: Circuit

    def __post_init__(self):
        init = self.init
        if isinstance(init, str):
            init = str_to_bits(init)
        object.__setattr__(self, "init", tuple(int(b) for b in init))
        object.__setattr__(self, "action_vars", tuple(self.action_vars))
        object.__setattr__(self, "goal_circuits", tuple(self.goal_circuits))

    @property
    def agent_count(self) -> int:
        return len(self.action_vars)

    @property
    def decision_vars(self) -> int:
        return sum(self.action_vars)


def validate_circuit_system(csys: CircuitSystem) -> list:
    problems = []
    if len(csys.init) != csys.state_vars:
        problems.append(ArityMismatch("init", csys.state_vars, len(csys.init)))
    if csys.state_vars < 1:
        problems.append(ArityMismatch("state_vars", ">=1", csys.state_vars))
    for i, n in enumerate(csys.action_vars):
        if n < 1:
            problems.append(SingletonActionSet(i))
    if len(csys.goal_circuits) != csys.agent_count:
        problems.append(ArityMismatch("goal circuits", csys.agent_count, len(csys.goal_circuits)))
    for i, g in enumerate(csys.goal_circuits):
        problems.extend(validate_circuit(g))
        if g.input_arity != csys.state_vars:
            problems.append(ArityMismatch(f"goal {i} inputs", csys.state_vars, g.input_arity))
        if g.output_arity != 1:
            problems.append(ArityMismatch(f"goal {i} outputs", 1, g.output_arity))
    problems.extend(validate_circuit(csys.phi))
    if csys.phi.input_arity != csys.state_vars + csys.decision_vars:
        problems.append(ArityMismatch("phi inputs", csys.state_vars + csys.decision_vars, csys.phi.input_arity))
    if csys.phi.output_arity != csys.state_vars:
        problems.append(ArityMismatch("phi outputs", csys.state_vars, csys.phi.output_arity))
    return problems


def check_circuit_system(csys: CircuitSystem) -> CircuitSystem:
    problems = validate_circuit_system(csys)
    if problems:
        raise ValidationError(problems)
    return csys


@dataclass(frozen=True)
class ExplicitTransducer:
    """Moore machine reading system states and emitting one agent's actions."""

    states: tuple
    init: str
    trans: Mapping = field(repr=False)
    output: Mapping = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "trans", dict(self.trans))
        object.__setattr__(self, "output", dict(self.output))


@dataclass(frozen=True)
class CircuitTransducer:
    state_vars: int
    init: tuple
    omega: Circuit
    output: Circuit

    def __post_init__(self):
        init = self.init
        if isinstance(init, str):
            init = str_to_bits(init)
        object.__setattr__(self, "init", tuple(int(b) for b in init))


def validate_transducer(tr: ExplicitTransducer, sys: ExplicitSystem, agent: int) -> list:
    problems = []
    known = set(tr.states)
    if tr.init not in known:
        problems.append(UnknownState(tr.init, "transducer init"))
    for s in tr.states:
        for v in sys.states:
            if (s, v) not in tr.trans:
                problems.append(MissingTransitionRow(s, v))
            elif tr.trans[(s, v)] not in known:
                problems.append(UnknownState(tr.trans[(s, v)], "transducer target"))
        if s not in tr.output:
            problems.append(MissingTransitionRow(s, "output"))
        elif tr.output[s] not in sys.action_sets[agent]:
            problems.append(UnknownAction(agent, tr.output[s], "transducer output"))
    return problems


def validate_circuit_transducer(ct: CircuitTransducer, csys: CircuitSystem, agent: int) -> list:
    problems = []
    if len(ct.init) != ct.state_vars:
        problems.append(ArityMismatch("transducer init", ct.state_vars, len(ct.init)))
    problems.extend(validate_circuit(ct.omega))
    problems.extend(validate_circuit(ct.output))
    if ct.omega.input_arity != ct.state_vars + csys.state_vars:
        problems.append(ArityMismatch("omega inputs", ct.state_vars + csys.state_vars, ct.omega.input_arity))
    if ct.omega.output_arity != ct.state_vars:
        problems.append(ArityMismatch("omega outputs", ct.state_vars, ct.omega.output_arity))
    if ct.output.input_arity != ct.state_vars:
        problems.append(ArityMismatch("output inputs", ct.state_vars, ct.output.input_arity))
    if ct.output.output_arity != csys.action_vars[agent]:
        problems.append(ArityMismatch("output outputs", csys.action_vars[agent], ct.output.output_arity))
    return problems


def transducer_step(tr, s, v):
    """Moore step: read system state ``v``, move to ``s'``, emit ``O(s')``.

    Circuit transducers take and return bit strings.
    """
    if isinstance(tr, CircuitTransducer):
        nxt = _circuit.eval(tr.omega, str_to_bits(s) + str_to_bits(v))
        return bits_to_str(nxt), bits_to_str(_circuit.eval(tr.output, nxt))
    nxt = tr.trans[(s, v)]
    return nxt, tr.output[nxt]


def transducer_init(tr):
    return bits_to_str(tr.init) if isinstance(tr, CircuitTransducer) else tr.init


@dataclass(frozen=True)
class StrategyProfile:
    """One transducer per agent, all explicit or all circuit-based."""

    strategies: tuple

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))
        kinds = {type(s) for s in self.strategies}
        if len(kinds) > 1:
            raise RepresentationMismatch("profile mixes explicit and circuit transducers")
        if kinds - {ExplicitTransducer, CircuitTransducer}:
            raise TypeError("strategies must be transducers")

    @property
    def is_circuit(self) -> bool:
        return bool(self.strategies) and isinstance(self.strategies[0], CircuitTransducer)

    def __len__(self):
        return len(self.strategies)

    def __iter__(self):
        return iter(self.strategies)

    def __getitem__(self, i):
        return self.strategies[i]


def unfold(csys: CircuitSystem, cap: int = DEFAULT_CAP) -> ExplicitSystem:
    """Expand a circuit system into the equivalent explicit table.

    State ``v`` is named by its bit string (variable 0 first), actions likewise.
    """
    rows = (1 << csys.state_vars) * (1 << csys.decision_vars)
    if rows > cap:
        raise CapExceeded(rows, cap)
    n, m = csys.state_vars, csys.decision_vars
    states = tuple(bits_to_str(row) for row in all_inputs(n))
    action_sets = tuple(tuple(bits_to_str(row) for row in all_inputs(a)) for a in csys.action_vars)
    succ = eval_many(csys.phi, all_inputs(n + m))
    nd = 1 << m
    decisions = list(itertools.product(*action_sets))
    trans = []
    for vi, v in enumerate(states):
        base = vi * nd
        for di, d in enumerate(decisions):
            trans.append((v, d, bits_to_str(succ[base + di])))
    state_rows = all_inputs(n)
    goals = []
    for g in csys.goal_circuits:
        hit = eval_many(g, state_rows)[:, 0]
        goals.append(frozenset(states[i] for i in range(len(states)) if hit[i]))
    return ExplicitSystem(states, bits_to_str(csys.init), action_sets, tuple(goals), trans)


def unfold_transducer(ct: CircuitTransducer, csys: CircuitSystem, cap: int = DEFAULT_CAP) -> ExplicitTransducer:
    rows = (1 << ct.state_vars) * (1 << csys.state_vars)
    if rows > cap:
        raise CapExceeded(rows, cap)
    k, n = ct.state_vars, csys.state_vars
    states = tuple(bits_to_str(r) for r in all_inputs(k))
    inputs = tuple(bits_to_str(r) for r in all_inputs(n))
    nxt = eval_many(ct.omega, all_inputs(k + n))
    trans = {}
    for si, s in enumerate(states):
        for vi, v in enumerate(inputs):
            trans[(s, v)] = bits_to_str(nxt[(si << n) + vi])
    outs = eval_many(ct.output, all_inputs(k))
    output = {s: bits_to_str(outs[si]) for si, s in enumerate(states)}
    return ExplicitTransducer(states, bits_to_str(ct.init), trans, output)
