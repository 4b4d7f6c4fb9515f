"""Turn-based reachability games: attractor partition and memoryless strategies."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable

import numpy as np

from . import kernels
from .errors import (
    DeadEndState,
    IllegalOpponentMove,
    MissingInit,
    OverlappingOwners,
    UnknownState,
    ValidationError,
)


@dataclass(frozen=True)
class ReachabilityGame:
    """Player 0 (the reacher) owns ``v0_states`` and wants to visit ``goal``.

    Canonical state order is ``v0_states`` followed by ``v1_states`` in the
    given order; it decides every tie.
    """

    v0_states: tuple
    v1_states: tuple
    edges: tuple
    goal: frozenset
    init: Hashable = None

    def __post_init__(self):
        object.__setattr__(self, "v0_states", tuple(self.v0_states))
        object.__setattr__(self, "v1_states", tuple(self.v1_states))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "goal", frozenset(self.goal))

    @cached_property
    def states(self) -> tuple:
        return self.v0_states + self.v1_states

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def successors(self) -> dict:
        """State -> successors in canonical order, duplicates dropped."""
        idx = self.index
        out = {s: set() for s in self.states}
        for u, v in self.edges:
            if u in out and v in idx:
                out[u].add(v)
        return {s: sorted(vs, key=idx.__getitem__) for s, vs in out.items()}

    def owner(self, state) -> int:
        return 0 if self.index[state] < len(self.v0_states) else 1


def validate_game(g: ReachabilityGame) -> list:
    problems = []
    v0 = set(g.v0_states)
    for s in g.v1_states:
        if s in v0:
            problems.append(OverlappingOwners(s))
    known = set(g.states)
    for u, v in g.edges:
        for s in (u, v):
            if s not in known:
                problems.append(UnknownState(s, "edge"))
    for s in sorted(g.goal - known, key=repr):
        problems.append(UnknownState(s, "goal"))
    if g.init is not None and g.init not in known:
        problems.append(UnknownState(g.init, "init"))
    succ = g.successors
    for s in g.states:
        if not succ[s]:
            problems.append(DeadEndState(s))
    return problems


@dataclass(frozen=True)
class WinPartition:
    win0: frozenset
    win1: frozenset
    strat0: dict = field(repr=False)
    strat1: dict = field(repr=False)
    rank: dict = field(repr=False)


def _csr(g: ReachabilityGame):
    idx = g.index
    n = len(g.states)
    succ_ptr = np.zeros(n + 1, dtype=np.intc)
    preds = [[] for _ in range(n)]
    for i, s in enumerate(g.states):
        nxt = g.successors[s]
        succ_ptr[i + 1] = succ_ptr[i] + len(nxt)
        for t in nxt:
            preds[idx[t]].append(i)
    pred_ptr = np.zeros(n + 1, dtype=np.intc)
    for i in range(n):
        pred_ptr[i + 1] = pred_ptr[i] + len(preds[i])
    pred_idx = np.array([p for ps in preds for p in ps], dtype=np.intc)
    owner = np.array([0] * len(g.v0_states) + [1] * len(g.v1_states), dtype=np.int8)
    goal = np.array([1 if s in g.goal else 0 for s in g.states], dtype=np.uint8)
    return owner, succ_ptr, pred_ptr, pred_idx, goal


def solve(g: ReachabilityGame, validate: bool = True) -> WinPartition:
    """Attractor of the goal for player 0; its complement is player 1's region.

    Player 0's strategy moves to the lowest-ranked successor (closest attractor
    layer); player 1's strategy picks the first successor staying in its region.
    """
    if validate:
        problems = validate_game(g)
        if problems:
            raise ValidationError(problems)
    owner, succ_ptr, pred_ptr, pred_idx, goal = _csr(g)
    ranks = kernels.attractor_ranks(owner, succ_ptr, pred_ptr, pred_idx, goal)
    rank = {s: int(ranks[i]) for i, s in enumerate(g.states) if ranks[i] >= 0}
    win0 = frozenset(rank)
    win1 = frozenset(s for s in g.states if s not in rank)
    strat0, strat1 = {}, {}
    for s in g.v0_states:
        if s in win0 and s not in g.goal:
            strat0[s] = min(
                (t for t in g.successors[s] if t in rank),
                key=lambda t: rank[t],
            )
    for s in g.v1_states:
        if s in win1:
            strat1[s] = next(t for t in g.successors[s] if t in win1)
    return WinPartition(win0, win1, strat0, strat1, rank)


def who_wins(g: ReachabilityGame) -> int:
    if g.init is None:
        raise MissingInit()
    return 0 if g.init in solve(g).win0 else 1


def play(
    g: ReachabilityGame,
    partition: WinPartition,
    init,
    opponent: Callable,
) -> list:
    """Play from ``init``: the region's winner follows its strategy, ``opponent``
    chooses everywhere else.

    ``opponent(state, successors)`` returns the next state. A path for a
    player-0 start stops on reaching the goal; otherwise it has ``|V| + 1``
    states.
    """
    driver = 0 if init in partition.win0 else 1
    strat = partition.strat0 if driver == 0 else partition.strat1
    limit = len(g.states) + 1
    path = [init]
    while len(path) < limit:
        cur = path[-1]
        if cur in g.goal and driver == 0:
            break
        succ = g.successors[cur]
        if g.owner(cur) == driver:
            nxt = strat[cur]
        else:
            nxt = opponent(cur, succ)
            if nxt not in succ:
                raise IllegalOpponentMove(cur, nxt)
        path.append(nxt)
    return path
