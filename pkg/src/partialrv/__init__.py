"""Partial runtime verification with six-valued generalised monitors."""
from .automata import Dfa, Nba, bisimulation_quotient, lasso_member, parse_automaton, safety_close
from .encoder import AcyclicFinalStates, encode, prepare_for_encoding
from .events import Interpretation, LassoWord, UnknownEvent, UnknownProposition
from .genmonitor import GeneralisedMonitor, synthesize
from .ltl import eval_lasso, parse
from .ltl2nba import translate
from .ltnu import (
    CoverageCheckFailed,
    combine_ltnu,
    derivatives,
    monitor_ltnu,
    parse_term,
    prove_valid,
    rank,
    refuted_prefix,
)
from .oracle import EmptinessOracle
from .verdicts import InconsistentVerdicts, Verdict3, Verdict6, combine, invert

__version__ = "0.1.0"
