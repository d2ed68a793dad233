"""Exception hierarchy for resistlab."""


class ResistlabError(Exception):
    """Base class for all resistlab errors."""


# graph construction
class DuplicateEdgeError(ResistlabError):
    pass


class NegativeWeightError(ResistlabError):
    pass


class IndexOutOfRangeError(ResistlabError):
    pass


class SelfLoopError(ResistlabError):
    pass


class ZeroDegreeVertexError(ResistlabError):
    pass


# connectivity / spectral preconditions
class DisconnectedError(ResistlabError):
    pass


class BipartiteError(ResistlabError):
    pass


class EigenFailureError(ResistlabError):
    pass


class SingularSystemError(ResistlabError):
    pass


class StepCapExceededError(ResistlabError):
    pass


# generators
class InvalidDensitySpecError(ResistlabError):
    pass


class SpecMismatchError(ResistlabError):
    pass


class OddNError(ResistlabError):
    pass


class ProbabilityOverflowError(ResistlabError):
    pass


# bounds
class EdgeSetMismatchError(ResistlabError):
    pass


class ZeroWeightError(ResistlabError):
    pass


class NotCompleteError(ResistlabError):
    pass


class InvalidProbabilityError(ResistlabError):
    pass


# flows / grids
class PreconditionViolatedError(ResistlabError):
    pass


class DegenerateDegreeError(ResistlabError):
    pass


class NotAFlowError(ResistlabError):
    pass


class FlowOnMissingEdgeError(ResistlabError):
    pass


class InvalidParamsError(ResistlabError):
    pass


class EmptyCellError(ResistlabError):
    pass


class BottleneckTooNarrowError(ResistlabError):
    pass


class PairTooCloseError(ResistlabError):
    pass


class DomainNotRectangleError(ResistlabError):
    pass


class GridNotValidError(ResistlabError):
    pass


# experiments
class ConfigError(ResistlabError):
    pass


class PreconditionUnsatisfiableError(ResistlabError):
    pass
