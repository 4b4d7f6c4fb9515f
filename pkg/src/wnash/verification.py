"""Checking whether a given strategy profile is a W-Nash equilibrium.

The system is composed with the transducers on the fly: the primary trace is
followed until a product configuration repeats, and each losing agent's
unilateral deviations are explored breadth-first in the product where that
agent is free.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from . import circuit as _circuit
from .arena import Arena, arena_for
from .circuit import DEFAULT_CAP, bits_to_int, int_to_bits
from .errors import ArityMismatch, RepresentationMismatch, ValidationError
from .model import (
    CircuitSystem,
    CircuitTransducer,
    ExplicitSystem,
    ExplicitTransducer,
    StrategyProfile,
    validate_circuit_transducer,
    validate_transducer,
)


class ProductConfig(NamedTuple):
    sys_state: object
    trans_states: tuple


@dataclass(frozen=True)
class PrimaryTraceReport:
    path: tuple
    cycle_start: int
    decisions: tuple
    winning_set: frozenset


@dataclass(frozen=True)
class DeviationWitness:
    agent: int
    action_path: tuple
    reached_goal_state: object


@dataclass(frozen=True)
class GoalMismatch:
    expected: frozenset
    observed: frozenset


@dataclass(frozen=True)
class Deviation:
    witness: DeviationWitness


@dataclass(frozen=True)
class Verdict:
    is_WNE: bool
    observed_winning_set: frozenset
    counterexample: GoalMismatch | Deviation | None = None


class _ExplicitRunner:
    def __init__(self, tr: ExplicitTransducer, arena: Arena, agent: int):
        self.init = tr.init
        labels = [arena.state_label(v) for v in range(arena.num_states)]
        self._next = {(s, vi): tr.trans[(s, v)] for s in tr.states for vi, v in enumerate(labels)}
        self._out = {s: arena.action_index(agent, a) for s, a in tr.output.items()}

    def step(self, s, v):
        nxt = self._next[(s, v)]
        return nxt, self._out[nxt]

    def label(self, s):
        return s


class _CircuitRunner:
    def __init__(self, ct: CircuitTransducer, arena: Arena):
        self.init = bits_to_int(ct.init)
        self.ct = ct
        self.width = ct.state_vars
        self.n = arena.n
        self._cache = {}

    def step(self, s, v):
        key = (s, v)
        hit = self._cache.get(key)
        if hit is None:
            nxt_bits = _circuit.eval(self.ct.omega, int_to_bits(s, self.width) + int_to_bits(v, self.n))
            hit = (bits_to_int(nxt_bits), bits_to_int(_circuit.eval(self.ct.output, nxt_bits)))
            self._cache[key] = hit
        return hit

    def label(self, s):
        return "".join(map(str, int_to_bits(s, self.width)))


class _Product:
    """System x profile with integer-level configurations ``(v, (s_0 .. s_k-1))``."""

    def __init__(self, system, profile, cap: int = DEFAULT_CAP):
        if not isinstance(profile, StrategyProfile):
            profile = StrategyProfile(profile)
        self.arena = arena = arena_for(system, cap)
        if len(profile) != arena.k:
            raise ArityMismatch("profile", arena.k, len(profile))
        if arena.is_circuit != profile.is_circuit and len(profile):
            raise RepresentationMismatch("system and profile representations differ")
        problems = []
        for i, tr in enumerate(profile):
            if arena.is_circuit:
                problems.extend(validate_circuit_transducer(tr, arena.system, i))
            else:
                problems.extend(validate_transducer(tr, arena.system, i))
        if problems:
            raise ValidationError(problems)
        if arena.is_circuit:
            self.runners = [_CircuitRunner(tr, arena) for tr in profile]
        else:
            self.runners = [_ExplicitRunner(tr, arena, i) for i, tr in enumerate(profile)]
        self.init = (arena.init, tuple(r.init for r in self.runners))

    def advance(self, cfg):
        """Transducers read the current system state; returns new states and their actions."""
        v, ss = cfg
        moves = [r.step(s, v) for r, s in zip(self.runners, ss)]
        return tuple(m[0] for m in moves), [m[1] for m in moves]

    def step(self, cfg):
        ss, acts = self.advance(cfg)
        d = self.arena.compose(acts)
        return (self.arena.successors(cfg[0])[d], ss), d

    def label(self, cfg) -> ProductConfig:
        v, ss = cfg
        return ProductConfig(self.arena.state_label(v), tuple(r.label(s) for r, s in zip(self.runners, ss)))


def _product(system, profile) -> _Product:
    return profile if isinstance(profile, _Product) else _Product(system, profile)


def product_step(system, profile, cfg: ProductConfig):
    """One step of the composed system from a labelled configuration."""
    prod = _product(system, profile)
    arena = prod.arena
    v = arena.state_index(cfg.sys_state)
    if arena.is_circuit:
        ss = tuple(int(s, 2) for s in cfg.trans_states)
    else:
        ss = tuple(cfg.trans_states)
    nxt, d = prod.step((v, ss))
    return prod.label(nxt), arena.decision_label(d)


def primary_trace(system, profile) -> PrimaryTraceReport:
    """Follow the profile until a configuration repeats; the path ends with the repeat."""
    prod = _product(system, profile)
    arena = prod.arena
    cfg = prod.init
    seen = {cfg: 0}
    path = [cfg]
    decisions = []
    while True:
        cfg, d = prod.step(cfg)
        decisions.append(d)
        path.append(cfg)
        if cfg in seen:
            break
        seen[cfg] = len(path) - 1
    won = set()
    for v, _ in path:
        won |= arena.goals_at(v)
    return PrimaryTraceReport(
        tuple(prod.label(c) for c in path),
        seen[cfg],
        tuple(arena.decision_label(d) for d in decisions),
        frozenset(won),
    )


def deviation_reachable(system, profile, j: int) -> DeviationWitness | None:
    """Shortest sequence of agent-``j`` actions reaching its goal while everyone
    else follows the profile, or None."""
    prod = _product(system, profile)
    arena = prod.arena
    if not 0 <= j < arena.k:
        raise ValueError(f"agent {j} out of range")
    start = prod.init
    if j in arena.goals_at(start[0]):
        return DeviationWitness(j, (), arena.state_label(start[0]))
    parent = {start: None}
    queue = deque([start])
    while queue:
        cfg = queue.popleft()
        ss, acts = prod.advance(cfg)
        succ = arena.successors(cfg[0])
        for a in range(arena.action_counts[j]):
            acts[j] = a
            nxt = (succ[arena.compose(acts)], ss)
            if nxt in parent:
                continue
            parent[nxt] = (cfg, a)
            if j in arena.goals_at(nxt[0]):
                path = []
                c = nxt
                while parent[c] is not None:
                    c, act = parent[c]
                    path.append(arena.action_label(j, act))
                path.reverse()
                return DeviationWitness(j, tuple(path), arena.state_label(nxt[0]))
            queue.append(nxt)
    return None


def verify(system, profile, W) -> Verdict:
    """Is ``profile`` a W-NE? Goal mismatch is reported before deviations,
    deviating agents are scanned in ascending order."""
    if isinstance(system, ExplicitSystem) and any(isinstance(t, CircuitTransducer) for t in profile):
        raise RepresentationMismatch("explicit system with circuit transducers")
    if isinstance(system, CircuitSystem) and any(isinstance(t, ExplicitTransducer) for t in profile):
        raise RepresentationMismatch("circuit system with explicit transducers")
    prod = _Product(system, profile)
    W = frozenset(W)
    report = primary_trace(system, prod)
    if report.winning_set != W:
        return Verdict(False, report.winning_set, GoalMismatch(W, report.winning_set))
    for j in range(prod.arena.k):
        if j in W:
            continue
        witness = deviation_reachable(system, prod, j)
        if witness is not None:
            return Verdict(False, report.winning_set, Deviation(witness))
    return Verdict(True, report.winning_set)
