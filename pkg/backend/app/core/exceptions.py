"""Error hierarchy for the interval coloring toolkit.

Every error raised on purpose by the services derives from IntervalColoringError, so the
API and the CLI can map the whole family to one response code. A failed interval check is
not an error: verify_interval reports it.
"""


class IntervalColoringError(Exception):
    """Base class for all toolkit errors"""


class InvalidEdgeError(IntervalColoringError):
    """Edge endpoints are equal or outside the vertex range"""


class InvalidMatchingError(IntervalColoringError):
    """An edge set is not a perfect matching"""


class InvalidOrderingError(IntervalColoringError):
    """A paired ordering is not a permutation of the vertices"""


class SplitIndexError(IntervalColoringError):
    """Split index outside [1, n-1]"""


class MalformedColoringError(IntervalColoringError):
    """Color map is partial or uses colors outside [1, t]"""


class ColorRangeError(IntervalColoringError):
    """Requested color class outside [1, t]"""


class InternalInconsistencyError(IntervalColoringError):
    """A construction that is proved to succeed produced an invalid object"""


class LabeledFactorizationInvalidError(IntervalColoringError):
    """A labeled 1-factorization breaks one of its invariants"""


class InsufficientSplitsError(IntervalColoringError):
    """Fewer splittable matchings than the number of labels requested"""


class PreconditionError(IntervalColoringError):
    """Inputs do not satisfy an operation's precondition"""


class DocumentParseError(IntervalColoringError):
    """A coloring, factorization or certificate document could not be parsed"""

    def __init__(self, message: str, *, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        context = []
        if line is not None:
            context.append(f"line {line}")
        if field:
            context.append(f"field '{field}'")
        super().__init__(f"{message} ({', '.join(context)})" if context else message)
