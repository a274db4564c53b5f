"""Exception hierarchy shared by every module."""


class SingerError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(SingerError):
    """A JSON document does not have the expected shape."""


class TopologyError(SingerError):
    """The input is not a triangulated (or cellulated) 2-sphere."""


class LabelError(SingerError):
    """An edge label is missing, below 2, or attached to a non-edge."""


class UnknownVertex(SingerError, KeyError):
    pass


class InvariantViolation(SingerError):
    """A labeled cell complex breaks one of its structural invariants."""


class InfiniteLabel(SingerError):
    pass


class SubsetTooLarge(SingerError):
    pass


class NotSpherical(SingerError):
    pass


class NotMetricFlag(SingerError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(
            "not metric flag: " + "; ".join(str(v) for v in self.violations[:5])
        )


class NotEmptyCircuit(SingerError):
    pass


class LinkMismatch(SingerError):
    pass


class DegenerateGlue(SingerError):
    pass


class AdjacentEuclideanVertices(SingerError):
    def __init__(self, u, v):
        self.pair = (u, v)
        super().__init__(f"Euclidean vertices {u} and {v} are adjacent")


class PreconditionViolated(SingerError):
    pass


class SimplexInput(SingerError):
    pass


class GenerationFailed(SingerError):
    pass


class InternalContradiction(SingerError):
    """A step that the proof guarantees cannot fail has failed.

    ``witness`` holds JSON-ready data describing the offending configuration.
    """

    def __init__(self, message, witness=None):
        self.witness = witness or {}
        super().__init__(message)
