"""Deciding whether some W-Nash equilibrium exists.

Pipeline: goal-tracking Büchi automaton A_W over decisions, one deviation
reachability game per losing agent, pruning of dangerous states/pairs to A'_W,
then lasso search for a nonempty language. YES answers carry the lasso word
plus receipts showing every (state, decision) pair on it is safe for every
losing agent.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .arena import Arena, arena_for
from .circuit import DEFAULT_CAP
from .errors import DecodeError
from .games import ReachabilityGame, WinPartition, solve
from .model import ExplicitSystem, LassoTrace, winning_set


class GoalTracker(NamedTuple):
    """Automaton state: system state index and the goals of W still pending."""

    state: int
    pending: frozenset


@dataclass(frozen=True)
class BuchiAW:
    arena: Arena = field(repr=False)
    coalition: frozenset
    init: GoalTracker
    states: tuple
    trans: dict = field(repr=False)
    accepting: frozenset
    empty: bool = False

    def label(self, q: GoalTracker):
        return self.arena.state_label(q.state), q.pending

    def step(self, q: GoalTracker, decision):
        """Successor on a decision given by its action labels; None when stuck."""
        return self.trans.get((q, self.arena.decision_index(decision)))

    def successors(self, q: GoalTracker) -> list:
        nd = self.arena.num_decisions
        return [(d, self.trans[(q, d)]) for d in range(nd) if (q, d) in self.trans]


@dataclass(frozen=True)
class DeviationGame:
    """Game where the coalition announces decisions at system states (player 1
    nodes ``v``) and agent ``agent`` may swap its own component at the pair
    nodes ``(v, d)`` (player 0)."""

    arena: Arena = field(repr=False)
    agent: int
    game: ReachabilityGame = field(repr=False)

    def node(self, state):
        return self.arena.state_index(state)

    def pair(self, state, decision):
        return (self.arena.state_index(state), self.arena.decision_index(decision))


@dataclass(frozen=True)
class LassoWord:
    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(tuple(d) for d in self.prefix))
        object.__setattr__(self, "cycle", tuple(tuple(d) for d in self.cycle))

    def __len__(self):
        return len(self.prefix) + len(self.cycle)


@dataclass(frozen=True)
class Certificate:
    trace: LassoTrace
    winning_set: frozenset
    receipts: dict


@dataclass(frozen=True)
class RealizabilityVerdict:
    answer: bool
    coalition: frozenset
    witness: LassoWord | None = None
    certificate: Certificate | None = None
    automaton_states: int = 0


def _coalition(arena: Arena, W) -> tuple:
    W = frozenset(W)
    bad = [i for i in W if not 0 <= i < arena.k]
    if bad:
        raise ValueError(f"agents {bad} out of range")
    return W, frozenset(range(arena.k)) - W


def build_AW(system, W, cap: int = DEFAULT_CAP) -> BuchiAW:
    """Reachable part of the goal-tracking automaton.

    A transition is undefined when it enters a goal of an agent outside ``W``;
    entering goals of ``W`` discharges them simultaneously. A goal of an
    outside agent at the initial state makes the language empty.
    """
    arena = arena_for(system, cap)
    W, outside = _coalition(arena, W)
    g0 = arena.goals_at(arena.init)
    init = GoalTracker(arena.init, W - g0)
    if g0 & outside:
        return BuchiAW(arena, W, init, (init,), {}, frozenset(), empty=True)
    trans = {}
    seen = {init}
    order = [init]
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for d, w in enumerate(arena.successors(q.state)):
            hit = arena.goals_at(w)
            if hit & outside:
                continue
            nxt = GoalTracker(w, q.pending - hit)
            trans[(q, d)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    accepting = frozenset(q for q in order if not q.pending)
    return BuchiAW(arena, W, init, tuple(order), trans, accepting)


def build_deviation_game(system, j: int, cap: int = DEFAULT_CAP) -> DeviationGame:
    """Deviation game for agent ``j`` over the states reachable in the system."""
    arena = arena_for(system, cap)
    if not 0 <= j < arena.k:
        raise ValueError(f"agent {j} out of range")
    reach = arena.reachable()
    nd = arena.num_decisions
    pairs = [(v, d) for v in reach for d in range(nd)]
    edges = []
    for v in reach:
        succ = arena.successors(v)
        for d in range(nd):
            edges.append((v, (v, d)))
            for alt in arena.deviations(d, j):
                edges.append(((v, d), succ[alt]))
    goal = frozenset(v for v in reach if j in arena.goals_at(v))
    return DeviationGame(arena, j, ReachabilityGame(pairs, reach, edges, goal))


def solve_deviation_games(system, W, cap: int = DEFAULT_CAP) -> dict:
    arena = arena_for(system, cap)
    _, outside = _coalition(arena, W)
    return {j: solve(build_deviation_game(arena, j).game, validate=False) for j in sorted(outside)}


def prune(aw: BuchiAW, partitions: dict) -> BuchiAW:
    """Restrict ``aw`` to states and transitions that are safe for every losing agent."""
    outside = frozenset(range(aw.arena.k)) - aw.coalition
    missing = outside - set(partitions)
    if missing:
        raise ValueError(f"no partition for agents {sorted(missing)}")
    if aw.empty:
        return aw
    wins = [partitions[j].win0 for j in sorted(outside)]

    def safe_state(q):
        return not any(q.state in w for w in wins)

    def safe_pair(q, d):
        return not any((q.state, d) in w for w in wins)

    if not safe_state(aw.init):
        return BuchiAW(aw.arena, aw.coalition, aw.init, (aw.init,), {}, frozenset(), empty=True)
    trans = {}
    seen = {aw.init}
    order = [aw.init]
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for d, nxt in aw.successors(q):
            if not safe_pair(q, d) or not safe_state(nxt):
                continue
            trans[(q, d)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    accepting = frozenset(q for q in order if q in aw.accepting)
    return BuchiAW(aw.arena, aw.coalition, aw.init, tuple(order), trans, accepting)


def _live_states(aw: BuchiAW) -> set:
    """States with an infinite run (greatest fixed point of having a live successor)."""
    out = {q: aw.successors(q) for q in aw.states}
    preds = {q: [] for q in aw.states}
    degree = {}
    for q, succ in out.items():
        degree[q] = len(succ)
        for _, nxt in succ:
            preds[nxt].append(q)
    dead = deque(q for q, n in degree.items() if n == 0)
    live = set(aw.states)
    while dead:
        q = dead.popleft()
        live.discard(q)
        for p in preds[q]:
            if p in live:
                degree[p] -= 1
                if degree[p] == 0:
                    dead.append(p)
    return live


def _lasso_indices(aw: BuchiAW):
    if aw.empty:
        return None
    live = _live_states(aw)
    targets = aw.accepting & live
    if not targets:
        return None
    parent = {aw.init: None}
    queue = deque([aw.init])
    found = None
    while queue:
        q = queue.popleft()
        if q in targets:
            found = q
            break
        for d, nxt in aw.successors(q):
            if nxt not in parent:
                parent[nxt] = (q, d)
                queue.append(nxt)
    if found is None:
        return None
    prefix = []
    q = found
    while parent[q] is not None:
        q, d = parent[q]
        prefix.append(d)
    prefix.reverse()
    # accepting states are closed under transitions: walk the least live move until a repeat
    position = {}
    walk = []
    q = found
    while q not in position:
        position[q] = len(walk)
        d, q2 = next((d, n) for d, n in aw.successors(q) if n in live)
        walk.append(d)
        q = q2
    start = position[q]
    return prefix + walk[:start], walk[start:]


def nonempty(aw: BuchiAW) -> LassoWord | None:
    """A lasso word accepted by ``aw``, or None when its language is empty."""
    found = _lasso_indices(aw)
    if found is None:
        return None
    label = aw.arena.decision_label
    return LassoWord([label(d) for d in found[0]], [label(d) for d in found[1]])


def decode_word(arena: Arena, w: LassoWord):
    """Run ``w`` from the initial state.

    Returns ``(states, decisions, prefix_len, cycle_len)`` where the state
    sequence ``states[:prefix_len]`` followed by ``states[prefix_len:prefix_len
    + cycle_len]`` repeated forever is the induced trace, and ``decisions[i]``
    is taken at ``states[i]``.
    """
    if not w.cycle:
        raise DecodeError("empty cycle")
    alpha = [arena.decision_index(d) for d in w.prefix]
    beta = [arena.decision_index(d) for d in w.cycle]
    states = [arena.init]
    decisions = []
    for d in alpha:
        decisions.append(d)
        states.append(arena.successors(states[-1])[d])
    block_start = {}
    m = 0
    while states[-1] not in block_start:
        block_start[states[-1]] = m
        for d in beta:
            decisions.append(d)
            states.append(arena.successors(states[-1])[d])
        m += 1
    m1 = block_start[states[-1]]
    p = len(alpha) + m1 * len(beta)
    c = (m - m1) * len(beta)
    return states[: p + c], decisions[: p + c], p, c


def _trace_goals(arena: Arena, states) -> frozenset:
    out = set()
    for v in states:
        out |= arena.goals_at(v)
    return frozenset(out)


def realize(system, W, cap: int = DEFAULT_CAP) -> RealizabilityVerdict:
    """Decide W-NE realizability for an explicit or circuit-based system."""
    arena = arena_for(system, cap)
    W, outside = _coalition(arena, W)
    aw = build_AW(arena, W)
    if aw.empty:
        return RealizabilityVerdict(False, W)
    partitions = {j: solve(build_deviation_game(arena, j).game, validate=False) for j in sorted(outside)}
    pruned = prune(aw, partitions)
    found = _lasso_indices(pruned)
    if found is None:
        return RealizabilityVerdict(False, W, automaton_states=len(pruned.states))
    label = arena.decision_label
    word = LassoWord([label(d) for d in found[0]], [label(d) for d in found[1]])
    states, decisions, p, c = decode_word(arena, word)
    receipts = {}
    for j, part in partitions.items():
        pairs = []
        for v, d in zip(states, decisions):
            assert v in part.win1 and (v, d) in part.win1
            pairs.append((arena.state_label(v), label(d)))
        receipts[j] = tuple(pairs)
    trace = LassoTrace([arena.state_label(v) for v in states[:p]], [arena.state_label(v) for v in states[p:]])
    cert = Certificate(trace, _trace_goals(arena, states), receipts)
    return RealizabilityVerdict(True, W, word, cert, automaton_states=len(pruned.states))


def realize_explicit(sys: ExplicitSystem, W) -> RealizabilityVerdict:
    return realize(sys, W)


def realize_circuit(csys, W, cap: int = DEFAULT_CAP) -> RealizabilityVerdict:
    return realize(csys, W, cap)


def certify_witness(system, W, w: LassoWord, cap: int = DEFAULT_CAP) -> bool:
    """Re-check both equilibrium conditions for a lasso word with fresh game solves.

    (1) the induced trace wins for exactly ``W``; (2) for every losing agent,
    every visited state and (state, decision) pair lies in that agent's
    losing region of its deviation game.
    """
    arena = arena_for(system, cap)
    W, outside = _coalition(arena, W)
    states, decisions, p, _ = decode_word(arena, w)
    if isinstance(system, ExplicitSystem):
        trace = LassoTrace([arena.state_label(v) for v in states[:p]], [arena.state_label(v) for v in states[p:]])
        observed = winning_set(system, trace)
    else:
        observed = _trace_goals(arena, states)
    if observed != W:
        return False
    for j in sorted(outside):
        part: WinPartition = solve(build_deviation_game(arena, j).game)
        for v, d in zip(states, decisions):
            if v not in part.win1 or (v, d) not in part.win1:
                return False
    return True
