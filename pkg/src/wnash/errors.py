"""Exception types.

Validators return lists of these instead of raising, so every problem in an
input is reported at once; everything else raises them.
"""


class WnashError(Exception):
    """Base class for all errors raised by the toolkit."""


class ValidationError(WnashError):
    """Raised when an input fails validation; carries every problem found."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(str(p) for p in self.problems))


class Problem(WnashError):
    """A single validation finding."""


# systems

class MissingTransitionRow(Problem):
    def __init__(self, state, decision):
        self.state, self.decision = state, decision
        super().__init__(f"no transition row for ({state}, {decision})")


class DuplicateRow(Problem):
    def __init__(self, state, decision):
        self.state, self.decision = state, decision
        super().__init__(f"duplicate transition row for ({state}, {decision})")


class SingletonActionSet(Problem):
    def __init__(self, agent):
        self.agent = agent
        super().__init__(f"agent {agent} has fewer than two actions")


class UnknownState(Problem):
    def __init__(self, state, where=""):
        self.state, self.where = state, where
        super().__init__(f"unknown state {state!r}" + (f" in {where}" if where else ""))


class UnknownAction(Problem):
    def __init__(self, agent, action, where=""):
        self.agent, self.action = agent, action
        super().__init__(f"unknown action {action!r} for agent {agent}" + (f" in {where}" if where else ""))


class ArityMismatch(Problem):
    def __init__(self, what, expected, got):
        self.what, self.expected, self.got = what, expected, got
        super().__init__(f"{what}: expected arity {expected}, got {got}")


# circuits

class ForwardRef(Problem):
    def __init__(self, gate):
        self.gate = gate
        super().__init__(f"gate {gate} refers to itself or a later gate")


class RefOutOfRange(Problem):
    def __init__(self, where, ref):
        self.where, self.ref = where, ref
        super().__init__(f"{where}: reference {ref} out of range")


class EmptyOutputs(Problem):
    def __init__(self):
        super().__init__("circuit has no outputs")


# games

class DeadEndState(Problem):
    def __init__(self, state):
        self.state = state
        super().__init__(f"state {state!r} has no outgoing edge")


class OverlappingOwners(Problem):
    def __init__(self, state):
        self.state = state
        super().__init__(f"state {state!r} is owned by both players")


class MissingInit(WnashError):
    def __init__(self):
        super().__init__("game has no initial state")


class IllegalOpponentMove(WnashError):
    def __init__(self, state, move):
        self.state, self.move = state, move
        super().__init__(f"illegal move {state!r} -> {move!r}")


# runtime

class CapExceeded(WnashError):
    def __init__(self, required, cap):
        self.required, self.cap = required, cap
        super().__init__(f"size {required} exceeds cap {cap}")


class NotATrace(WnashError):
    pass


class DecodeError(WnashError):
    pass


class RepresentationMismatch(WnashError):
    pass


class MalformedID(WnashError):
    pass


class ParseError(WnashError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")
