class FreeGogError(Exception):
    """Base class for all errors raised by freegog."""


class AlphabetError(FreeGogError, ValueError):
    """A word uses a generator outside the ambient alphabet."""


class WordSyntaxError(FreeGogError, ValueError):
    pass


class ContainmentError(FreeGogError):
    """An edge group is not contained in one of its endpoint vertex groups."""


class NotApplicable(FreeGogError):
    """A move or partition was asked for on an object it does not apply to."""


class PreconditionError(FreeGogError, ValueError):
    pass


class HypothesisError(FreeGogError):
    """Input the reduction cannot accept (e.g. a tree mid-graph component)."""


class OracleLimit(FreeGogError):
    """The brute-force oracle refused a request that exceeds its caps."""


class FormatError(FreeGogError, ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
