"""Exception hierarchy shared by every module."""


class DfaDecompError(Exception):
    """Base class for all library errors."""


class InputError(DfaDecompError, ValueError):
    """Malformed or out-of-contract input (bad symbol, size, file content)."""


class FormatError(InputError):
    """A serialized document could not be parsed."""


class ContradictionError(InputError):
    """The same word is labeled both positive and negative."""


class EngineError(DfaDecompError, RuntimeError):
    """The SAT engine failed; never used to signal UNSAT."""


class SizeCapExceeded(DfaDecompError, RuntimeError):
    """The frontier search wanted to explore a DFA larger than the safety cap."""


class GenerationError(DfaDecompError, RuntimeError):
    """A sample generator cannot satisfy the requested class balance."""
