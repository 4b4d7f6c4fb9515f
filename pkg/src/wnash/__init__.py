"""Equilibrium realizability and verification for multi-agent reachability systems."""
from .arena import CircuitArena, ExplicitArena, arena_for
from .circuit import Circuit, CircuitBuilder, Gate, Ref, eval, eval_many, gate, inp, truth_table
from .errors import CapExceeded, ParseError, ValidationError, WnashError
from .games import ReachabilityGame, WinPartition, play, solve, who_wins
from .kernels import BACKEND
from .machines import AltTM, DetTM, MachineID, atm_accepts, dtm_accepts, tm_step
from .model import (
    CircuitSystem,
    CircuitTransducer,
    ExplicitSystem,
    ExplicitTransducer,
    LassoTrace,
    StrategyProfile,
    unfold,
    unfold_transducer,
    winning_set,
)
from .realizability import LassoWord, certify_witness, realize, realize_circuit, realize_explicit
from .verification import primary_trace, verify

__version__ = "0.1.0"
