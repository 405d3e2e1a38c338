"""Learning decompositions of a DFA into intersections of smaller DFAs.

A sample of labeled words is encoded as a SAT instance for each candidate
tuple of state counts; a breadth-first search over those tuples yields the
Pareto-optimal ones.
"""
from .automata import (Decomposition, Dfa, decomposition_accepts, dfa_accepts, equivalent,
                       is_consistent, minimize, product)
from .encoding import EncodeOptions, decode, encode
from .errors import (ContradictionError, DfaDecompError, EngineError, FormatError,
                     GenerationError, InputError, SizeCapExceeded)
from .pareto import Frontier, SearchOptions, dominates, identify, search_frontier
from .sample import LabeledSample, build_apta, load_sample
from .satgate import SolveResult, Status, solve
from .sizing import decomposition_dl, dfa_dl

__version__ = "0.1.0"

__all__ = [
    "ContradictionError", "Decomposition", "Dfa", "DfaDecompError", "EncodeOptions",
    "EngineError", "FormatError", "Frontier", "GenerationError", "InputError",
    "LabeledSample", "SearchOptions", "SizeCapExceeded", "SolveResult", "Status",
    "build_apta", "decode", "decomposition_accepts", "decomposition_dl", "dfa_accepts",
    "dfa_dl", "dominates", "encode", "equivalent", "identify", "is_consistent",
    "load_sample", "minimize", "product", "search_frontier", "solve",
]
