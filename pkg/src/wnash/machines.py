"""Space-bounded Turing machines: IDs, single steps and acceptance oracles."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import CapExceeded, MalformedID, UnknownState, ValidationError, WnashError
from .games import ReachabilityGame, solve

BLANK = "_"
LEFT, RIGHT = "L", "R"
LABELS = ("accept", "reject", "or", "and", "det")


@dataclass(frozen=True)
class DetTM:
    """Deterministic machine; ``trans`` maps ``(state, symbol)`` to ``(state, written, dir)``.

    ``alphabet`` excludes the blank ``_``, which may be read but not written.
    """

    states: tuple
    alphabet: tuple
    init: str
    trans: dict = field(repr=False)
    accepting: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "trans", {k: tuple(v) for k, v in dict(self.trans).items()})
        object.__setattr__(self, "accepting", frozenset(self.accepting))


@dataclass(frozen=True)
class AltTM:
    """Alternating machine; ``trans`` maps ``(state, symbol)`` to at most two moves."""

    states: tuple
    alphabet: tuple
    init: str
    trans: dict = field(repr=False)
    labels: dict = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(
            self, "trans", {k: tuple(tuple(m) for m in v) for k, v in dict(self.trans).items()}
        )
        object.__setattr__(self, "labels", dict(self.labels))

    def moves(self, state, symbol) -> tuple:
        return self.trans.get((state, symbol), ())


def _check_move(m, move, where, problems):
    r, g, d = move
    if r not in m.states:
        problems.append(UnknownState(r, where))
    if g not in m.alphabet:
        problems.append(WnashError(f"{where}: cannot write {g!r}"))
    if d not in (LEFT, RIGHT):
        problems.append(WnashError(f"{where}: bad direction {d!r}"))


def _check_common(m, problems):
    if m.init not in m.states:
        problems.append(UnknownState(m.init, "init"))
    if BLANK in m.alphabet:
        problems.append(WnashError("the blank symbol is implicit and must not be declared"))
    if not m.alphabet:
        problems.append(WnashError("alphabet is empty"))
    for (r, g) in m.trans:
        if r not in m.states:
            problems.append(UnknownState(r, "transition"))
        if g != BLANK and g not in m.alphabet:
            problems.append(WnashError(f"transition reads unknown symbol {g!r}"))


def validate_dtm(m: DetTM) -> list:
    problems = []
    _check_common(m, problems)
    for s in sorted(m.accepting - set(m.states)):
        problems.append(UnknownState(s, "accepting"))
    for r in m.states:
        if r in m.accepting:
            continue
        for g in (BLANK,) + m.alphabet:
            if (r, g) not in m.trans:
                problems.append(WnashError(f"no transition for ({r}, {g})"))
    for key, move in m.trans.items():
        _check_move(m, move, f"transition {key}", problems)
    return problems


def validate_atm(m: AltTM) -> list:
    problems = []
    _check_common(m, problems)
    for r in m.states:
        lab = m.labels.get(r)
        if lab not in LABELS:
            problems.append(WnashError(f"state {r!r} has label {lab!r}"))
            continue
        for g in (BLANK,) + m.alphabet:
            moves = m.moves(r, g)
            if lab == "det" and len(moves) != 1:
                problems.append(WnashError(f"deterministic state {r!r} needs exactly one move on {g!r}"))
            if len(moves) > 2:
                problems.append(WnashError(f"state {r!r} has more than two moves on {g!r}"))
    for key, moves in m.trans.items():
        for move in moves:
            _check_move(m, move, f"transition {key}", problems)
    return problems


def _checked(m):
    problems = validate_dtm(m) if isinstance(m, DetTM) else validate_atm(m)
    if problems:
        raise ValidationError(problems)
    return m


@dataclass(frozen=True)
class MachineID:
    """Tape contents with the head marked: ``cells[i] = (symbol, state or None)``."""

    cells: tuple

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple((c[0], c[1]) for c in self.cells))

    @classmethod
    def initial(cls, init_state: str, n: int) -> "MachineID":
        return cls(((BLANK, init_state),) + ((BLANK, None),) * (n - 1))

    @property
    def head(self) -> tuple:
        heads = [(i, r) for i, (_, r) in enumerate(self.cells) if r is not None]
        if len(heads) != 1:
            raise MalformedID(f"ID has {len(heads)} heads")
        return heads[0]

    def render(self) -> str:
        """Compact notation: ``⊥, a, ⟨b,r⟩, a, ⊥``."""
        parts = []
        for g, r in self.cells:
            sym = "⊥" if g == BLANK else g
            parts.append(sym if r is None else f"⟨{sym},{r}⟩")
        return ", ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "MachineID":
        cells = []
        for part in _split_cells(text):
            part = part.strip()
            if part.startswith("⟨") and part.endswith("⟩"):
                sym, _, state = part[1:-1].partition(",")
                cells.append((_sym(sym.strip()), state.strip()))
            else:
                cells.append((_sym(part), None))
        return cls(tuple(cells))


def _sym(text):
    return BLANK if text in ("⊥", BLANK) else text


def _split_cells(text):
    depth, cur, out = 0, [], []
    for ch in text:
        if ch == "⟨":
            depth += 1
        elif ch == "⟩":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def apply_move(mid: MachineID, move) -> MachineID | None:
    """Write, move and change state at the head; None when the head leaves the tape."""
    pos, _ = mid.head
    r, g, d = move
    target = pos + 1 if d == RIGHT else pos - 1
    if not 0 <= target < len(mid.cells):
        return None
    cells = list(mid.cells)
    cells[pos] = (g, None)
    cells[target] = (cells[target][0], r)
    return MachineID(tuple(cells))


@dataclass(frozen=True)
class StepResult:
    kind: str  # "next", "accept" or "out_of_bounds"
    id: MachineID | None = None


def tm_step(m: DetTM, mid: MachineID) -> StepResult:
    """Acceptance is tested before moving."""
    pos, r = mid.head
    if r in m.accepting:
        return StepResult("accept")
    move = m.trans.get((r, mid.cells[pos][0]))
    if move is None:
        raise MalformedID(f"no transition for ({r}, {mid.cells[pos][0]})")
    nxt = apply_move(mid, move)
    if nxt is None:
        return StepResult("out_of_bounds")
    return StepResult("next", nxt)


def dtm_accepts(m: DetTM, n: int) -> bool:
    """Does ``m`` accept the empty tape within ``n`` cells? Direct simulation with loop detection."""
    _checked(m)
    mid = MachineID.initial(m.init, n)
    seen = set()
    while mid not in seen:
        seen.add(mid)
        res = tm_step(m, mid)
        if res.kind == "accept":
            return True
        if res.kind == "out_of_bounds":
            return False
        mid = res.id
    return False


ACC_SINK, REJ_SINK = "ACC", "REJ"


def atm_game(m: AltTM, n: int, cap: int = 1 << 20) -> ReachabilityGame:
    """Reachability game over the IDs of ``m``: player 0 resolves existential and
    deterministic states, player 1 universal ones; goal = accepting IDs."""
    _checked(m)
    init = MachineID.initial(m.init, n)
    owner0, owner1 = [ACC_SINK], [REJ_SINK]
    edges = [(ACC_SINK, ACC_SINK), (REJ_SINK, REJ_SINK)]
    goal = {ACC_SINK}
    seen = {init}
    queue = deque([init])
    while queue:
        mid = queue.popleft()
        pos, r = mid.head
        label = m.labels[r]
        if label == "accept":
            owner0.append(mid)
            goal.add(mid)
            edges.append((mid, mid))
            continue
        if label == "reject":
            owner1.append(mid)
            edges.append((mid, REJ_SINK))
            continue
        (owner1 if label == "and" else owner0).append(mid)
        moves = m.moves(r, mid.cells[pos][0])
        if not moves:
            edges.append((mid, ACC_SINK if label == "and" else REJ_SINK))
        for move in moves:
            nxt = apply_move(mid, move)
            if nxt is None:
                edges.append((mid, REJ_SINK))
                continue
            edges.append((mid, nxt))
            if nxt not in seen:
                if len(seen) >= cap:
                    raise CapExceeded(len(seen) + 1, cap)
                seen.add(nxt)
                queue.append(nxt)
    return ReachabilityGame(owner0, owner1, edges, goal, init)


def atm_accepts(m: AltTM, n: int, cap: int = 1 << 20) -> bool:
    g = atm_game(m, n, cap)
    return g.init in solve(g).win0
