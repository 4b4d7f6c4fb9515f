"""Brute-force reference deciders and seeded random instance generators.

Nothing here reuses the search code of the engines: the reference realizer
materializes every tracker state and decides emptiness through strongly
connected components, and the reference deviation check closes the full
product graph.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import networkx as nx

from .circuit import Circuit, Gate, inp, gate
from .errors import CapExceeded, WnashError
from .games import ReachabilityGame
from .model import (
    CircuitSystem,
    CircuitTransducer,
    ExplicitSystem,
    ExplicitTransducer,
    StrategyProfile,
    check_system,
    transducer_init,
    transducer_step,
)

ORACLE_CAP = 200_000


@dataclass(frozen=True)
class RandomSystemParams:
    state_count: int = 4
    agent_count: int = 2
    actions_per_agent: int = 2
    goal_density: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.state_count <= 6:
            raise WnashError(f"state_count must be in 1..6, got {self.state_count}")
        if not 1 <= self.agent_count <= 3:
            raise WnashError(f"agent_count must be in 1..3, got {self.agent_count}")
        if self.actions_per_agent != 2:
            raise WnashError("actions_per_agent is fixed at 2")
        if not 0.0 <= self.goal_density <= 1.0:
            raise WnashError("goal_density must be a probability")
        if not 0 <= self.seed < 1 << 64:
            raise WnashError("seed must be a 64-bit unsigned integer")


def gen_random_explicit(p: RandomSystemParams) -> ExplicitSystem:
    rng = random.Random(p.seed)
    states = tuple(f"v{i}" for i in range(p.state_count))
    action_sets = tuple(tuple(f"a{i}{k}" for k in range(p.actions_per_agent)) for i in range(p.agent_count))
    goals = tuple(
        frozenset(s for s in states if rng.random() < p.goal_density) for _ in range(p.agent_count)
    )
    trans = [(v, d, rng.choice(states)) for v in states for d in itertools.product(*action_sets)]
    return check_system(ExplicitSystem(states, states[0], action_sets, goals, trans))


def _solve_naive(nodes, owner, edges, goal) -> set:
    """Player-0 winning region by iterating the one-step attractor to a fixed point."""
    win = set(goal)
    changed = True
    while changed:
        changed = False
        for u in nodes:
            if u in win:
                continue
            succ = edges[u]
            if (owner[u] == 0 and any(w in win for w in succ)) or (
                owner[u] == 1 and succ and all(w in win for w in succ)
            ):
                win.add(u)
                changed = True
    return win


def _deviator_region(sys: ExplicitSystem, j: int) -> set:
    nodes, owner, edges = [], {}, {}
    table = sys.table
    for v in sys.states:
        nodes.append(("S", v))
        owner[("S", v)] = 1
        edges[("S", v)] = [("P", v, d) for d in sys.decisions]
        for d in sys.decisions:
            key = ("P", v, d)
            nodes.append(key)
            owner[key] = 0
            edges[key] = [("S", table[(v, d[:j] + (a,) + d[j + 1:])]) for a in sys.action_sets[j]]
    return _solve_naive(nodes, owner, edges, {("S", v) for v in sys.goals[j]})


def brute_realize(sys, W, cap: int = ORACLE_CAP) -> bool:
    """Is there a trace winning exactly ``W`` that stays out of every losing agent's danger zone?"""
    sys = _explicit(sys, cap)
    W = frozenset(W)
    losers = [j for j in range(sys.agent_count) if j not in W]
    size = len(sys.states) * (1 << len(W))
    if size > cap or len(sys.states) * len(sys.decisions) > cap:
        raise CapExceeded(max(size, len(sys.states) * len(sys.decisions)), cap)
    danger = [_deviator_region(sys, j) for j in losers]

    def unsafe(node):
        return any(node in region for region in danger)

    def won(v):
        return frozenset(i for i in W if v in sys.goals[i])

    if any(sys.init in sys.goals[j] for j in losers) or unsafe(("S", sys.init)):
        return False
    graph = nx.DiGraph()
    subsets = [frozenset(c) for r in range(len(W) + 1) for c in itertools.combinations(sorted(W), r)]
    for v in sys.states:
        for seen in subsets:
            graph.add_node((v, seen))
            if unsafe(("S", v)):
                continue
            for d in sys.decisions:
                w = sys.table[(v, d)]
                if unsafe(("P", v, d)) or unsafe(("S", w)):
                    continue
                if any(w in sys.goals[j] for j in losers):
                    continue
                graph.add_edge((v, seen), (w, seen | won(w)))
    start = (sys.init, won(sys.init))
    reach = nx.descendants(graph, start) | {start}
    for comp in nx.strongly_connected_components(graph.subgraph(reach)):
        node = next(iter(comp))
        cyclic = len(comp) > 1 or graph.has_edge(node, node)
        if cyclic and any(seen == W for _, seen in comp):
            return True
    return False


def brute_deviation(sys, profile: StrategyProfile, j: int, cap: int = ORACLE_CAP) -> bool:
    """Can agent ``j`` alone steer the profile's play into its goal?"""
    if isinstance(sys, CircuitSystem):
        from .model import unfold, unfold_transducer

        profile = StrategyProfile(tuple(unfold_transducer(t, sys, cap) for t in profile))
        sys = unfold(sys, cap)
    sizes = [len(t.states) for t in profile]
    total = len(sys.states)
    for s in sizes:
        total *= s
    if total > cap:
        raise CapExceeded(total, cap)
    graph = nx.DiGraph()
    for v in sys.states:
        for mem in itertools.product(*(t.states for t in profile)):
            stepped = [transducer_step(t, s, v) for t, s in zip(profile, mem)]
            nxt_mem = tuple(s for s, _ in stepped)
            d = [a for _, a in stepped]
            for a in sys.action_sets[j]:
                d[j] = a
                graph.add_edge((v, mem), (sys.table[(v, tuple(d))], nxt_mem))
    start = (sys.init, tuple(transducer_init(t) for t in profile))
    graph.add_node(start)
    reach = nx.descendants(graph, start) | {start}
    return any(v in sys.goals[j] for v, _ in reach)


def _explicit(sys, cap):
    if isinstance(sys, CircuitSystem):
        from .model import unfold

        return unfold(sys, cap)
    return check_system(sys)


# -- random instances -------------------------------------------------------

def gen_random_profile(sys: ExplicitSystem, rng: random.Random, max_states: int = 2) -> StrategyProfile:
    out = []
    for acts in sys.action_sets:
        states = tuple(f"q{k}" for k in range(rng.randint(1, max_states)))
        trans = {(s, v): rng.choice(states) for s in states for v in sys.states}
        output = {s: rng.choice(acts) for s in states}
        out.append(ExplicitTransducer(states, states[0], trans, output))
    return StrategyProfile(tuple(out))


def gen_random_circuit(rng: random.Random, inputs: int, outputs: int, gates: int) -> Circuit:
    body = []
    for j in range(gates):
        pool = [inp(i) for i in range(inputs)] + [gate(k) for k in range(j)]
        roll = rng.random()
        if roll < 0.05 or not pool:
            body.append(Gate(rng.choice(("CONST0", "CONST1")), ()))
        elif roll < 0.3:
            body.append(Gate("NOT", (rng.choice(pool),)))
        else:
            body.append(Gate(rng.choice(("AND", "OR")), (rng.choice(pool), rng.choice(pool))))
    pool = [inp(i) for i in range(inputs)] + [gate(k) for k in range(gates)]
    return Circuit(inputs, tuple(body), tuple(rng.choice(pool) for _ in range(outputs)))


def gen_random_circuit_system(
    rng: random.Random, state_vars: int, action_vars=(1, 1), gates: int = 12
) -> CircuitSystem:
    m = state_vars + sum(action_vars)
    phi = gen_random_circuit(rng, m, state_vars, gates)
    goals = tuple(gen_random_circuit(rng, state_vars, 1, max(2, gates // 3)) for _ in action_vars)
    init = tuple(rng.randint(0, 1) for _ in range(state_vars))
    return CircuitSystem(state_vars, init, tuple(action_vars), goals, phi)


def gen_random_circuit_profile(csys: CircuitSystem, rng: random.Random, max_vars: int = 2) -> StrategyProfile:
    out = []
    for a in csys.action_vars:
        k = rng.randint(1, max_vars)
        omega = gen_random_circuit(rng, k + csys.state_vars, k, 6)
        output = gen_random_circuit(rng, k, a, 4)
        out.append(CircuitTransducer(k, tuple(rng.randint(0, 1) for _ in range(k)), omega, output))
    return StrategyProfile(tuple(out))


def gen_random_game(rng: random.Random, max_states: int = 10) -> ReachabilityGame:
    n = rng.randint(1, max_states)
    names = [f"u{i}" for i in range(n)]
    owners = [rng.randint(0, 1) for _ in names]
    edges = []
    for u in names:
        for w in rng.sample(names, rng.randint(1, min(3, n))):
            edges.append((u, w))
    goal = {u for u in names if rng.random() < 0.25}
    v0 = [u for u, o in zip(names, owners) if o == 0]
    v1 = [u for u, o in zip(names, owners) if o == 1]
    return ReachabilityGame(v0, v1, edges, goal, rng.choice(names))


# -- consistency suite ------------------------------------------------------

@dataclass
class SuiteReport:
    seed: int
    count: int
    realize_checks: int = 0
    realize_mismatches: int = 0
    certificate_checks: int = 0
    certificate_failures: int = 0
    deviation_checks: int = 0
    deviation_mismatches: int = 0
    first_counterexample: str | None = None
    rows: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return not (self.realize_mismatches or self.certificate_failures or self.deviation_mismatches)

    def _fail(self, text):
        if self.first_counterexample is None:
            self.first_counterexample = text


def _default_realizer(sys, W):
    from .realizability import realize_explicit

    return realize_explicit(sys, W)


def suite_params(seed: int, index: int, max_states: int = 5, max_agents: int = 3) -> RandomSystemParams:
    rng = random.Random(f"{seed}:{index}")
    return RandomSystemParams(
        state_count=rng.randint(1, max_states),
        agent_count=rng.randint(1, max_agents),
        goal_density=rng.choice((0.2, 0.35, 0.5)),
        seed=rng.getrandbits(64),
    )


def consistency_suite(seed: int, count: int, realizer=None, profiles: bool = True) -> SuiteReport:
    """Cross-check the engines against the reference deciders on ``count`` random systems.

    ``realizer(sys, W)`` may return a bool or a verdict object; the default is
    the production realizer. Certificates are checked only for verdicts.
    """
    from .realizability import certify_witness
    from .verification import deviation_reachable

    realizer = realizer or _default_realizer
    report = SuiteReport(seed, count)
    for index in range(count):
        params = suite_params(seed, index)
        sys = gen_random_explicit(params)
        k = sys.agent_count
        for r in range(k + 1):
            for W in itertools.combinations(range(k), r):
                W = frozenset(W)
                got = realizer(sys, W)
                answer = got if isinstance(got, bool) else got.answer
                want = brute_realize(sys, W)
                report.realize_checks += 1
                report.rows.append((index, tuple(sorted(W)), answer, want))
                if answer != want:
                    report.realize_mismatches += 1
                    report._fail(f"system {index} (seed {params.seed}) W={sorted(W)}: engine {answer}, oracle {want}")
                if answer and not isinstance(got, bool):
                    report.certificate_checks += 1
                    if not certify_witness(sys, W, got.witness):
                        report.certificate_failures += 1
                        report._fail(f"system {index} W={sorted(W)}: witness failed certification")
        if profiles:
            prof = gen_random_profile(sys, random.Random(params.seed ^ 0x5EED))
            for j in range(k):
                got = deviation_reachable(sys, prof, j) is not None
                want = brute_deviation(sys, prof, j)
                report.deviation_checks += 1
                if got != want:
                    report.deviation_mismatches += 1
                    report._fail(f"system {index} agent {j}: deviation engine {got}, oracle {want}")
    return report
