"""Line-oriented text formats for every document kind.

Each document opens with ``<kind> v1``. Blank lines and lines starting with
``#`` are ignored. Serializers emit the canonical form, which their parsers
read back to an equal object.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .circuit import ARITY, Circuit, Gate, Ref, bits_to_str, check_circuit
from .errors import ParseError, ValidationError
from .games import ReachabilityGame, validate_game
from .machines import AltTM, DetTM, validate_atm, validate_dtm
from .model import (
    CircuitSystem,
    CircuitTransducer,
    ExplicitSystem,
    ExplicitTransducer,
    check_circuit_system,
    check_system,
)

KINDS = ("emas", "cmas", "etrans", "ctrans", "game", "dtm", "atm", "verdict", "report")


class _Lines:
    """Cursor over the meaningful lines of a document, keeping 1-based numbers."""

    def __init__(self, text: str):
        self.items = [
            (no, line.strip())
            for no, line in enumerate(text.splitlines(), 1)
            if line.strip() and not line.strip().startswith("#")
        ]
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.items)

    def peek(self):
        return self.items[self.pos] if not self.done() else (self.last_no(), "")

    def last_no(self) -> int:
        return self.items[-1][0] if self.items else 1

    def next(self):
        if self.done():
            raise ParseError(self.last_no(), "unexpected end of document")
        item = self.items[self.pos]
        self.pos += 1
        return item

    def header(self, kind: str):
        no, line = self.next()
        if line != f"{kind} v1":
            raise ParseError(no, f"expected header '{kind} v1', got {line!r}")

    def field(self, key: str) -> str:
        no, line = self.next()
        k, sep, value = line.partition(":")
        if not sep or k.strip() != key:
            raise ParseError(no, f"expected '{key}:'")
        return value.strip()

    def words(self, key: str) -> list:
        return self.field(key).split()

    def integer(self, key: str) -> int:
        no = self.peek()[0]
        value = self.field(key)
        try:
            return int(value)
        except ValueError:
            raise ParseError(no, f"{key} must be an integer, got {value!r}") from None

    def at(self, prefix: str) -> bool:
        return not self.done() and self.peek()[1].startswith(prefix)

    def end(self):
        if not self.done():
            no, line = self.peek()
            raise ParseError(no, f"unexpected line {line!r}")


def _validated(obj, problems):
    if problems:
        raise ValidationError(problems)
    return obj


def detect_kind(text: str) -> str:
    lines = _Lines(text)
    if lines.done():
        raise ParseError(1, "empty document")
    no, line = lines.peek()
    kind, _, version = line.partition(" ")
    if kind not in KINDS or version != "v1":
        raise ParseError(no, f"unknown document header {line!r}")
    return kind


# -- explicit systems -------------------------------------------------------

def parse_emas(text: str) -> ExplicitSystem:
    r = _Lines(text)
    r.header("emas")
    states = r.words("states")
    init = r.field("init")
    k = r.integer("agents")
    actions = [r.words(f"actions {i}") for i in range(k)]
    goals = [r.words(f"goal {i}") for i in range(k)]
    rows = []
    while r.at("trans:"):
        no, line = r.next()
        lhs, arrow, rhs = line[len("trans:"):].partition("->")
        parts, target = lhs.split(), rhs.split()
        if not arrow or len(target) != 1 or len(parts) != k + 1:
            raise ParseError(no, "expected 'trans: v a_0 ... a_k-1 -> w'")
        rows.append((parts[0], tuple(parts[1:]), target[0]))
    r.end()
    return check_system(ExplicitSystem(states, init, actions, goals, rows))


def _line(key: str, items) -> str:
    items = " ".join(items)
    return f"{key}: {items}" if items else f"{key}:"


def serialize_emas(sys: ExplicitSystem) -> str:
    out = ["emas v1", _line("states", sys.states), f"init: {sys.init}", f"agents: {sys.agent_count}"]
    out += [_line(f"actions {i}", a) for i, a in enumerate(sys.action_sets)]
    out += [_line(f"goal {i}", [s for s in sys.states if s in g]) for i, g in enumerate(sys.goals)]
    table = sys.table
    for v in sys.states:
        for d in sys.decisions:
            out.append(f"trans: {v} {' '.join(d)} -> {table[(v, d)]}")
    return "\n".join(out) + "\n"


# -- netlists ---------------------------------------------------------------

def _parse_netlist(r: _Lines, name: str) -> Circuit:
    no, line = r.next()
    if line != f"circuit {name}":
        raise ParseError(no, f"expected 'circuit {name}'")
    n = r.integer("inputs")
    gates = []
    while r.at("g"):
        no, line = r.next()
        lhs, eq, rhs = line.partition("=")
        words = rhs.split()
        if not eq or lhs.strip() != f"g{len(gates)}" or not words:
            raise ParseError(no, f"expected 'g{len(gates)} = OP refs'")
        op, args = words[0], words[1:]
        if op not in ARITY or len(args) != ARITY[op]:
            raise ParseError(no, f"bad gate {rhs.strip()!r}")
        try:
            gates.append(Gate(op, tuple(Ref.parse(a) for a in args)))
        except ValueError as exc:
            raise ParseError(no, str(exc)) from None
    try:
        outputs = tuple(Ref.parse(a) for a in r.words("outputs"))
    except ValueError as exc:
        raise ParseError(r.peek()[0], str(exc)) from None
    no, line = r.next()
    if line != "end":
        raise ParseError(no, "expected 'end'")
    return check_circuit(Circuit(n, tuple(gates), outputs))


def parse_netlist(text: str, name: str = "c") -> Circuit:
    r = _Lines(text)
    c = _parse_netlist(r, name)
    r.end()
    return c


def serialize_netlist(c: Circuit, name: str = "c") -> str:
    out = [f"circuit {name}", f"inputs: {c.input_arity}"]
    for j, g in enumerate(c.gates):
        out.append(" ".join([f"g{j} = {g.op}"] + [str(a) for a in g.args]))
    out.append(_line("outputs", [str(o) for o in c.outputs]))
    out.append("end")
    return "\n".join(out)


# -- circuit systems --------------------------------------------------------

def parse_cmas(text: str) -> CircuitSystem:
    r = _Lines(text)
    r.header("cmas")
    n = r.integer("state_vars")
    init = r.field("init")
    k = r.integer("agents")
    action_vars = []
    for i in range(k):
        action_vars.append(r.integer(f"action_vars {i}"))
    phi = _parse_netlist(r, "phi")
    goals = tuple(_parse_netlist(r, f"goal{i}") for i in range(k))
    r.end()
    if any(ch not in "01" for ch in init):
        raise ParseError(1, f"init must be a bit string, got {init!r}")
    return check_circuit_system(CircuitSystem(n, init, action_vars, goals, phi))


def serialize_cmas(csys: CircuitSystem) -> str:
    out = ["cmas v1", f"state_vars: {csys.state_vars}", f"init: {bits_to_str(csys.init)}",
           f"agents: {csys.agent_count}"]
    out += [f"action_vars {i}: {a}" for i, a in enumerate(csys.action_vars)]
    out.append(serialize_netlist(csys.phi, "phi"))
    out += [serialize_netlist(g, f"goal{i}") for i, g in enumerate(csys.goal_circuits)]
    return "\n".join(out) + "\n"


# -- transducers ------------------------------------------------------------

def parse_etrans(text: str) -> ExplicitTransducer:
    r = _Lines(text)
    r.header("etrans")
    states = r.words("states")
    init = r.field("init")
    output, trans = {}, {}
    while r.at("output:"):
        no, line = r.next()
        s, arrow, a = (x.strip() for x in line[len("output:"):].partition("->"))
        if not arrow or not s or not a or s in output:
            raise ParseError(no, "expected a unique 'output: s -> action'")
        output[s] = a
    while r.at("trans:"):
        no, line = r.next()
        lhs, arrow, rhs = line[len("trans:"):].partition("->")
        lhs, rhs = lhs.split(), rhs.split()
        if not arrow or len(lhs) != 2 or len(rhs) != 1 or tuple(lhs) in trans:
            raise ParseError(no, "expected a unique 'trans: s v -> s2'")
        trans[tuple(lhs)] = rhs[0]
    r.end()
    return ExplicitTransducer(states, init, trans, output)


def serialize_etrans(tr: ExplicitTransducer, sys_states=None) -> str:
    """``sys_states`` fixes the row order; by default rows follow first appearance."""
    out = ["etrans v1", _line("states", tr.states), f"init: {tr.init}"]
    out += [f"output: {s} -> {tr.output[s]}" for s in tr.states if s in tr.output]
    if sys_states is None:
        sys_states = list(dict.fromkeys(v for _, v in tr.trans))
    for s in tr.states:
        for v in sys_states:
            if (s, v) in tr.trans:
                out.append(f"trans: {s} {v} -> {tr.trans[(s, v)]}")
    return "\n".join(out) + "\n"


def parse_ctrans(text: str) -> CircuitTransducer:
    r = _Lines(text)
    r.header("ctrans")
    k = r.integer("state_vars")
    init = r.field("init")
    omega = _parse_netlist(r, "omega")
    output = _parse_netlist(r, "output")
    r.end()
    return CircuitTransducer(k, init, omega, output)


def serialize_ctrans(ct: CircuitTransducer) -> str:
    out = ["ctrans v1", f"state_vars: {ct.state_vars}", f"init: {bits_to_str(ct.init)}",
           serialize_netlist(ct.omega, "omega"), serialize_netlist(ct.output, "output")]
    return "\n".join(out) + "\n"


# -- games ------------------------------------------------------------------

def parse_game(text: str) -> ReachabilityGame:
    r = _Lines(text)
    r.header("game")
    v0, v1 = r.words("player0"), r.words("player1")
    init = r.field("init") or None
    goal = r.words("goal")
    edges = []
    while r.at("edge:"):
        no, line = r.next()
        u, arrow, w = (x.strip() for x in line[len("edge:"):].partition("->"))
        if not arrow or not u or not w:
            raise ParseError(no, "expected 'edge: u -> w'")
        edges.append((u, w))
    r.end()
    g = ReachabilityGame(v0, v1, edges, frozenset(goal), init)
    return _validated(g, validate_game(g))


def serialize_game(g: ReachabilityGame) -> str:
    out = ["game v1", _line("player0", map(str, g.v0_states)), _line("player1", map(str, g.v1_states)),
           _line("init", [] if g.init is None else [str(g.init)]),
           _line("goal", [str(s) for s in g.states if s in g.goal])]
    for u in g.states:
        out += [f"edge: {u} -> {w}" for w in g.successors[u]]
    return "\n".join(out) + "\n"


# -- machines ---------------------------------------------------------------

def _parse_delta(r: _Lines):
    no, line = r.next()
    lhs, arrow, rhs = line[len("delta:"):].partition("->")
    lhs, rhs = lhs.split(), rhs.split()
    if not arrow or len(lhs) != 2 or len(rhs) != 3:
        raise ParseError(no, "expected 'delta: r g -> r2 g2 L|R'")
    return no, tuple(lhs), tuple(rhs)


def parse_dtm(text: str) -> DetTM:
    r = _Lines(text)
    r.header("dtm")
    states, alphabet, init = r.words("states"), r.words("alphabet"), r.field("init")
    accepting = r.words("accepting")
    trans = {}
    while r.at("delta:"):
        no, key, move = _parse_delta(r)
        if key in trans:
            raise ParseError(no, f"duplicate transition for {key}")
        trans[key] = move
    r.end()
    m = DetTM(states, alphabet, init, trans, accepting)
    return _validated(m, validate_dtm(m))


def serialize_dtm(m: DetTM) -> str:
    out = ["dtm v1", _line("states", m.states), _line("alphabet", m.alphabet), f"init: {m.init}",
           _line("accepting", [s for s in m.states if s in m.accepting])]
    for rr, g in itertools.product(m.states, ("_",) + m.alphabet):
        if (rr, g) in m.trans:
            out.append(f"delta: {rr} {g} -> {' '.join(m.trans[(rr, g)])}")
    return "\n".join(out) + "\n"


def parse_atm(text: str) -> AltTM:
    r = _Lines(text)
    r.header("atm")
    states, alphabet, init = r.words("states"), r.words("alphabet"), r.field("init")
    labels = {}
    while r.at("label:"):
        no, line = r.next()
        words = line[len("label:"):].split()
        if len(words) != 2:
            raise ParseError(no, "expected 'label: r kind'")
        labels[words[0]] = words[1]
    trans = {}
    while r.at("delta:"):
        _, key, move = _parse_delta(r)
        trans.setdefault(key, []).append(move)
    r.end()
    m = AltTM(states, alphabet, init, trans, labels)
    return _validated(m, validate_atm(m))


def serialize_atm(m: AltTM) -> str:
    out = ["atm v1", _line("states", m.states), _line("alphabet", m.alphabet), f"init: {m.init}"]
    out += [f"label: {s} {m.labels[s]}" for s in m.states]
    for rr, g in itertools.product(m.states, ("_",) + m.alphabet):
        for move in m.moves(rr, g):
            out.append(f"delta: {rr} {g} -> {' '.join(move)}")
    return "\n".join(out) + "\n"


# -- key/value documents (verdicts and reports) -----------------------------

@dataclass
class Document:
    """Ordered ``key: value`` entries under a ``<kind> v1`` header."""

    kind: str
    entries: list = field(default_factory=list)

    def add(self, key: str, value="") -> "Document":
        self.entries.append((key, str(value)))
        return self

    def get(self, key: str, default=None):
        for k, v in self.entries:
            if k == key:
                return v
        return default

    def all(self, key_prefix: str) -> list:
        return [(k, v) for k, v in self.entries if k.startswith(key_prefix)]


def parse_document(text: str, kind: str | None = None) -> Document:
    r = _Lines(text)
    kind = kind or detect_kind(text)
    r.header(kind)
    doc = Document(kind)
    while not r.done():
        no, line = r.next()
        key, sep, value = line.partition(":")
        if not sep or not key.strip():
            raise ParseError(no, "expected 'key: value'")
        doc.add(key.strip(), value.strip())
    return doc


def serialize_document(doc: Document) -> str:
    out = [f"{doc.kind} v1"] + [f"{k}: {v}" if v else f"{k}:" for k, v in doc.entries]
    return "\n".join(out) + "\n"


def _agents(items) -> str:
    return ",".join(map(str, sorted(items))) or "none"


def _decision(d) -> str:
    return ",".join(d)


def realize_verdict_doc(verdict) -> Document:
    doc = Document("verdict").add("problem", "realize").add("answer", "YES" if verdict.answer else "NO")
    doc.add("coalition", _agents(verdict.coalition))
    doc.add("automaton_states", verdict.automaton_states)
    if verdict.witness is not None:
        doc.add("prefix", " ".join(map(_decision, verdict.witness.prefix)))
        doc.add("cycle", " ".join(map(_decision, verdict.witness.cycle)))
    cert = verdict.certificate
    if cert is not None:
        doc.add("trace_prefix", " ".join(cert.trace.prefix))
        doc.add("trace_cycle", " ".join(cert.trace.cycle))
        doc.add("winning_set", _agents(cert.winning_set))
        for j in sorted(cert.receipts):
            doc.add(f"receipt {j}", " ".join(f"{v}|{_decision(d)}" for v, d in cert.receipts[j]))
    return doc


def verify_verdict_doc(verdict, W) -> Document:
    from .verification import Deviation, GoalMismatch

    doc = Document("verdict").add("problem", "verify").add("answer", "YES" if verdict.is_WNE else "NO")
    doc.add("coalition", _agents(W))
    doc.add("observed_winning_set", _agents(verdict.observed_winning_set))
    cx = verdict.counterexample
    if isinstance(cx, GoalMismatch):
        doc.add("counterexample", "goal-mismatch")
        doc.add("expected", _agents(cx.expected))
        doc.add("observed", _agents(cx.observed))
    elif isinstance(cx, Deviation):
        doc.add("counterexample", "deviation")
        doc.add("deviator", cx.witness.agent)
        doc.add("actions", " ".join(map(str, cx.witness.action_path)))
        doc.add("reached", cx.witness.reached_goal_state)
    return doc


def suite_report_doc(report) -> Document:
    doc = Document("report").add("seed", report.seed).add("count", report.count)
    for key in ("realize_checks", "realize_mismatches", "certificate_checks", "certificate_failures",
                "deviation_checks", "deviation_mismatches"):
        doc.add(key, getattr(report, key))
    doc.add("status", "PASS" if report.passed else "FAIL")
    if report.first_counterexample:
        doc.add("first_counterexample", report.first_counterexample)
    return doc


PARSERS = {
    "emas": parse_emas,
    "cmas": parse_cmas,
    "etrans": parse_etrans,
    "ctrans": parse_ctrans,
    "game": parse_game,
    "dtm": parse_dtm,
    "atm": parse_atm,
    "verdict": lambda t: parse_document(t, "verdict"),
    "report": lambda t: parse_document(t, "report"),
}


def parse_any(text: str):
    return PARSERS[detect_kind(text)](text)


def serialize_any(obj) -> str:
    if isinstance(obj, ExplicitSystem):
        return serialize_emas(obj)
    if isinstance(obj, CircuitSystem):
        return serialize_cmas(obj)
    if isinstance(obj, ExplicitTransducer):
        return serialize_etrans(obj)
    if isinstance(obj, CircuitTransducer):
        return serialize_ctrans(obj)
    if isinstance(obj, ReachabilityGame):
        return serialize_game(obj)
    if isinstance(obj, DetTM):
        return serialize_dtm(obj)
    if isinstance(obj, AltTM):
        return serialize_atm(obj)
    if isinstance(obj, Document):
        return serialize_document(obj)
    raise TypeError(f"no text format for {type(obj).__name__}")
