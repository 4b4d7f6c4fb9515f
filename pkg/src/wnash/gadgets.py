"""Generators turning games and space-bounded machines into systems and profiles.

Each generator returns the produced object(s) together with the coalition the
matching decision problem should be asked about.
"""
from __future__ import annotations

import itertools

from .circuit import CircuitBuilder, Circuit, inp
from .games import ReachabilityGame, validate_game
from .machines import (
    BLANK,
    LEFT,
    RIGHT,
    AltTM,
    DetTM,
    MachineID,
    _checked,
)
from .errors import ValidationError, WnashError
from .model import CircuitSystem, CircuitTransducer, ExplicitSystem, ExplicitTransducer, StrategyProfile


# -- games to explicit systems ----------------------------------------------

def _fresh(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def game_to_system(g: ReachabilityGame) -> tuple:
    """Two-agent system whose empty-coalition equilibria exist iff player 1 wins ``g``.

    Agent ``k`` picks the next state at states owned by player ``k``; a move
    that is not an edge sends the play to player ``k``'s penalty sink.
    Agent 0's goal is the target set plus player 1's sink; agent 1 has none.
    """
    problems = validate_game(g)
    if g.init is None:
        problems.append(WnashError("game has no initial state"))
    if problems:
        raise ValidationError(problems)
    names = {s: str(s) for s in g.states}
    if len(set(names.values())) != len(names):
        raise WnashError("game state names collide once rendered as strings")
    taken = set(names.values())
    hat0, hat1 = _fresh("^0", taken), _fresh("^1", taken)
    actions = [names[s] for s in g.states]
    # every agent needs two actions; tiny games borrow the sinks as dummies
    for extra in (hat0, hat1):
        if len(actions) < 2:
            actions.append(extra)
    states = [names[s] for s in g.states] + [hat0, hat1]
    succ = {names[s]: {names[t] for t in ts} for s, ts in g.successors.items()}
    owner = {names[s]: g.owner(s) for s in g.states}
    trans = {}
    for v in states:
        for d in itertools.product(actions, actions):
            if v in (hat0, hat1):
                trans[(v, d)] = v
            else:
                k = owner[v]
                trans[(v, d)] = d[k] if d[k] in succ[v] else (hat0, hat1)[k]
    goals = (frozenset(names[s] for s in g.goal) | {hat1}, frozenset())
    sys = ExplicitSystem(states, names[g.init], (actions, actions), goals, trans)
    return sys, frozenset()


# -- shared ID bit layout ---------------------------------------------------

def _width(count: int) -> int:
    """Bits needed to spell 0..count-1 (at least one)."""
    return max(1, (count - 1).bit_length())


class _Layout:
    """Bit layout for machine IDs after ``flags`` leading flag bits.

    Cell ``i`` holds a symbol code (0 = blank, k+1 = alphabet[k]) followed by a
    head code (0 = no head, k+1 = states[k]).
    """

    def __init__(self, m, n: int, flags: int):
        self.m, self.n, self.flags = m, n, flags
        self.ws = (len(m.alphabet)).bit_length() or 1
        self.wh = (len(m.states)).bit_length() or 1
        self.cell = self.ws + self.wh
        self.vars = flags + n * self.cell
        self.sidx = {r: k for k, r in enumerate(m.states)}
        self.gcode = {BLANK: 0, **{g: k + 1 for k, g in enumerate(m.alphabet)}}

    def sym_bits(self, i):
        base = self.flags + i * self.cell
        return [inp(base + k) for k in range(self.ws)]

    def head_bits(self, i):
        base = self.flags + i * self.cell + self.ws
        return [inp(base + k) for k in range(self.wh)]

    def encode_id(self, mid: MachineID, flags=()) -> str:
        bits = list(flags)
        for g, r in mid.cells:
            bits += _bits(self.gcode[g], self.ws)
            bits += _bits(0 if r is None else self.sidx[r] + 1, self.wh)
        return "".join(map(str, bits))

    def decoders(self, b: CircuitBuilder):
        """Per-cell head/symbol predicates plus their tape-wide disjunctions."""
        m, n = self.m, self.n
        head = [[b.equals(self.head_bits(i), k + 1) for k in range(len(m.states))] for i in range(n)]
        sym = [[b.equals(self.sym_bits(i), c) for c in range(len(m.alphabet) + 1)] for i in range(n)]
        here = [b.any_of(row) for row in head]
        in_state = [b.any_of(head[i][k] for i in range(n)) for k in range(len(m.states))]
        reading = [b.any_of(b.and_(here[i], sym[i][c]) for i in range(n)) for c in range(len(m.alphabet) + 1)]
        return head, sym, here, in_state, reading


def _bits(value: int, width: int) -> list:
    return [(value >> (width - 1 - k)) & 1 for k in range(width)]


# -- alternating machines to circuit systems --------------------------------

def atm_to_circuit_system(m: AltTM, n: int) -> tuple:
    """Two-agent circuit system with an empty-coalition equilibrium iff ``m`` rejects.

    Agent 0 resolves existential and deterministic states, agent 1 universal
    ones. State bits: ``acc`` and ``rej`` sink flags, then the ID cells.
    An illegal move by agent 0 lands in the rejecting sink, one by agent 1 in
    the accepting sink; leaving the tape also rejects.
    """
    _checked(m)
    if n < 1:
        raise WnashError("tape length must be at least 1")
    lay = _Layout(m, n, flags=2)
    nr, ng = len(m.states), len(m.alphabet)
    ar, ag = _width(nr), _width(ng)
    A = ar + ag + 1
    b = CircuitBuilder(lay.vars + 2 * A)
    acc, rej = inp(0), inp(1)
    a0 = b.inputs(lay.vars, A)
    a1 = b.inputs(lay.vars + A, A)

    head, sym, here, in_state, reading = lay.decoders(b)
    normal = b.and_(b.not_(acc), b.not_(rej))
    has_head = b.any_of(here)
    of_kind = lambda kind: b.any_of(in_state[k] for k, r in enumerate(m.states) if m.labels[r] == kind)
    act1 = of_kind("and")
    acc_h, rej_h = of_kind("accept"), of_kind("reject")

    sel = [b.mux(act1, x1, x0) for x0, x1 in zip(a0, a1)]
    st_is = [b.equals(sel[:ar], k) for k in range(nr)]
    wr_is = [b.equals(sel[ar:ar + ag], k) for k in range(ng)]
    right = sel[-1]
    left = b.not_(right)

    legal_terms = []
    for (r, g), moves in m.trans.items():
        cond = b.and_(in_state[lay.sidx[r]], reading[lay.gcode[g]])
        for r2, g2, d in moves:
            legal_terms.append(b.all_of([cond, st_is[lay.sidx[r2]], wr_is[lay.gcode[g2] - 1],
                                         right if d == RIGHT else left]))
    legal = b.any_of(legal_terms)
    oob = b.or_(b.and_(here[0], left), b.and_(here[n - 1], right))
    active = b.all_of([normal, has_head, b.not_(acc_h), b.not_(rej_h)])
    blamed1 = b.all_of([active, b.not_(legal), act1])
    acc_next = b.or_(acc, b.and_(normal, b.or_(acc_h, blamed1)))
    go = b.all_of([active, legal, b.not_(oob)])
    rej_next = b.and_(b.not_(acc_next), b.not_(go))

    outputs = [acc_next, rej_next] + _tape_update(b, lay, go, here, st_is, wr_is, right, left)
    phi = b.build(outputs)

    gb = CircuitBuilder(lay.vars)
    _, _, _, in_state_g, _ = lay.decoders(gb)
    acc_head = gb.any_of(in_state_g[k] for k, r in enumerate(m.states) if m.labels[r] == "accept")
    g0 = gb.build([gb.or_(inp(0), gb.and_(gb.not_(inp(1)), acc_head))])
    zb = CircuitBuilder(lay.vars)
    g1 = zb.build([zb.const(0)])

    init = lay.encode_id(MachineID.initial(m.init, n), flags=(0, 0))
    return CircuitSystem(lay.vars, init, (A, A), (g0, g1), phi), frozenset()


def _tape_update(b, lay, go, here, st_is, wr_is, right, left) -> list:
    """Next-cell bits: write at the head, move it, zero everything unless ``go``."""
    n = lay.n
    wcode = b.encode(wr_is, lay.ws, lambda k: k + 1)
    scode = b.encode(st_is, lay.wh, lambda k: k + 1)
    out = []
    for i in range(n):
        arrive = []
        if i > 0:
            arrive.append(b.and_(here[i - 1], right))
        if i < n - 1:
            arrive.append(b.and_(here[i + 1], left))
        arrive = b.any_of(arrive)
        for old, new in zip(lay.sym_bits(i), wcode):
            out.append(b.and_(go, b.mux(here[i], new, old)))
        for old, new in zip(lay.head_bits(i), scode):
            keep = b.and_(b.not_(here[i]), old)
            out.append(b.and_(go, b.mux(arrive, new, keep)))
    return out


# -- deterministic machines to a turn-based explicit system ------------------

def _move_label(r, g, d) -> str:
    return f"{r}:{g}:{d}"


def _cell_label(g, r) -> str:
    return g if r is None else f"{g}@{r}"


def dtm_to_turnbased(m: DetTM, n: int) -> tuple:
    """Turn-based ``n``-agent system plus profile that is an all-agent equilibrium iff ``m`` accepts.

    States ``h<i>`` mean the head is at cell ``i`` and agent ``i`` moves;
    ``m<i>:<move>`` records the move agent ``i`` announced; ``accept`` and
    ``reject`` absorb. Agent ``i`` remembers cells ``i-1..i+1``.
    """
    _checked(m)
    if n < 2:
        raise WnashError("the turn-based construction needs at least two cells")
    moves = [(r, g, d) for r in m.states for g in m.alphabet for d in (LEFT, RIGHT)]
    actions = [_move_label(*mv) for mv in moves]
    heads = [f"h{i}" for i in range(n)]
    announce = {(i, mv): f"m{i}:{_move_label(*mv)}" for i in range(n) for mv in moves}
    states = heads + list(announce.values()) + ["accept", "reject"]

    def after(i, mv):
        r, _, d = mv
        t = i + 1 if d == RIGHT else i - 1
        if not 0 <= t < n:
            return "reject"
        if r in m.accepting:
            return "accept"
        return heads[t]

    trans = []
    decisions = list(itertools.product(actions, repeat=n))
    by_label = dict(zip(actions, moves))
    for i, v in enumerate(heads):
        for d in decisions:
            trans.append((v, d, announce[(i, by_label[d[i]])]))
    for (i, mv), v in announce.items():
        w = after(i, mv)
        trans.extend((v, d, w) for d in decisions)
    for v in ("accept", "reject"):
        trans.extend((v, d, v) for d in decisions)
    goals = (frozenset({"accept"}),) * n
    sys = ExplicitSystem(states, heads[0], (actions,) * n, goals, trans)
    profile = StrategyProfile(tuple(_window_transducer(m, n, i, states, announce) for i in range(n)))
    return sys, profile, frozenset(range(n))


def _window_transducer(m: DetTM, n: int, i: int, sys_states, announce) -> ExplicitTransducer:
    window = [c for c in (i - 1, i, i + 1) if 0 <= c < n]
    symbols = (BLANK,) + m.alphabet
    head_opts = [None] + [(c, r) for c in window for r in m.states]
    subids = []
    for syms in itertools.product(symbols, repeat=len(window)):
        for h in head_opts:
            subids.append(tuple((g, h[1] if h and h[0] == c else None) for c, g in zip(window, syms)))
    label = {s: "|".join(_cell_label(g, r) for g, r in s) for s in subids}
    pos = {c: k for k, c in enumerate(window)}
    info = {v: key for key, v in announce.items()}

    def update(s, v):
        if v not in info:
            return s
        j, (r, g, d) = info[v]
        t = j + 1 if d == RIGHT else j - 1
        if j not in pos and t not in pos:
            return s
        cells = [(sym, None) for sym, _ in s]
        if j in pos:
            cells[pos[j]] = (g, None)
        if t in pos:
            cells[pos[t]] = (cells[pos[t]][0], r)
        return tuple(cells)

    default = _move_label(m.states[0], m.alphabet[0], LEFT)
    inward = RIGHT if i < n - 1 else LEFT

    def out(s):
        g, r = s[pos[i]]
        if r is None:
            return default
        if r in m.accepting:
            return _move_label(r, m.alphabet[0], inward)
        return _move_label(*m.trans[(r, g)])

    init_window = MachineID.initial(m.init, n).cells
    init = tuple(init_window[c] for c in window)
    trans = {(label[s], v): label[update(s, v)] for s in subids for v in sys_states}
    output = {label[s]: out(s) for s in subids}
    return ExplicitTransducer([label[s] for s in subids], label[init], trans, output)


# -- deterministic machines to a one-agent circuit system --------------------

def dtm_to_one_agent_circuit(m: DetTM, n: int) -> tuple:
    """One-agent circuit system and strategy that wins iff ``m`` accepts.

    State bits: an error flag, then the ID cells. The action names a cell, a
    state, a symbol and a direction; the transition writes and moves the head
    there, and any out-of-range request raises the error flag. The strategy
    remembers the current ID and emits the move the machine would make.
    """
    _checked(m)
    if n < 1:
        raise WnashError("tape length must be at least 1")
    lay = _Layout(m, n, flags=1)
    nr, ng = len(m.states), len(m.alphabet)
    ap, ar, ag = _width(n), _width(nr), _width(ng)
    A = ap + ar + ag + 1
    b = CircuitBuilder(lay.vars + A)
    act = b.inputs(lay.vars, A)
    pos_is = [b.equals(act[:ap], p) for p in range(n)]
    st_is = [b.equals(act[ap:ap + ar], k) for k in range(nr)]
    wr_is = [b.equals(act[ap + ar:ap + ar + ag], k) for k in range(ng)]
    right = act[-1]
    left = b.not_(right)
    oob = b.or_(b.and_(pos_is[0], left), b.and_(pos_is[n - 1], right))
    ok = b.all_of([b.not_(inp(0)), b.any_of(pos_is), b.any_of(st_is), b.any_of(wr_is), b.not_(oob)])
    phi = b.build([b.not_(ok)] + _tape_update(b, lay, ok, pos_is, st_is, wr_is, right, left))

    gb = CircuitBuilder(lay.vars)
    _, _, _, in_state, _ = lay.decoders(gb)
    final = gb.any_of(in_state[lay.sidx[r]] for r in m.states if r in m.accepting)
    g0 = gb.build([gb.and_(gb.not_(inp(0)), final)])

    init = lay.encode_id(MachineID.initial(m.init, n), flags=(0,))
    csys = CircuitSystem(lay.vars, init, (A,), (g0,), phi)

    # strategy: state = last observed ID, output = the machine's move at the head
    k = lay.vars
    omega = Circuit(2 * k, (), tuple(inp(k + j) for j in range(k)))
    ob = CircuitBuilder(k)
    _, _, here, in_state, reading = lay.decoders(ob)
    fire = []
    for (r, g), (r2, g2, d) in m.trans.items():
        if r in m.accepting:
            continue
        fire.append((ob.and_(in_state[lay.sidx[r]], reading[lay.gcode[g]]), lay.sidx[r2], lay.gcode[g2] - 1, d))
    pos_bits = ob.encode(here, ap, lambda p: p)
    st_bits = [ob.any_of(c for c, r2, _, _ in fire if (r2 >> (ar - 1 - j)) & 1) for j in range(ar)]
    wr_bits = [ob.any_of(c for c, _, g2, _ in fire if (g2 >> (ag - 1 - j)) & 1) for j in range(ag)]
    dir_bit = ob.any_of(c for c, _, _, d in fire if d == RIGHT)
    output = ob.build(pos_bits + st_bits + wr_bits + [dir_bit])
    strategy = CircuitTransducer(k, init, omega, output)
    return csys, StrategyProfile((strategy,)), frozenset({0})
