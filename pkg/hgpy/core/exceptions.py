"""Exception types raised by hgpy

Decode failures and failed verification checks are results, not exceptions.
"""
from typing import Any


class HgpyError(Exception):
    """Base class of all hgpy errors"""


class DimensionError(HgpyError, ValueError):
    """Vector length or matrix shape does not match"""


class InvalidInputError(HgpyError, ValueError):
    """Input rejected by a precondition"""


class GraphFormatError(HgpyError, ValueError):
    """Malformed graph text file"""


class GraphGenerationError(HgpyError):

    def __init__(self, message: str, attempts: int):
        HgpyError.__init__(self, message)
        self.attempts = attempts


class InfeasibleError(HgpyError):
    """Requested enumeration exceeds the configured ceiling"""

    def __init__(self, message: str, required: int = None, limit: int = None):
        HgpyError.__init__(self, message)
        self.required = required
        self.limit = limit


class HypothesisError(HgpyError):
    """Hypotheses of an analytical statement are not met by the input"""


class OracleInvariantError(HgpyError):
    """Exact recomputation contradicts an asserted inequality"""

    def __init__(self, message: str, witness: Any = None):
        HgpyError.__init__(self, message)
        self.witness = witness
