"""Exception hierarchy shared by all fapkit modules."""


class FapError(Exception):
    """Base class for every error raised by fapkit."""


class InstanceError(FapError, ValueError):
    """The instance text or edge list violates the instance invariants."""


class MalformedLine(InstanceError):
    pass


class DuplicateEdge(InstanceError):
    pass


class SelfLoop(InstanceError):
    pass


class ZeroEdgesNotForest(InstanceError):
    pass


class NonContiguousIds(InstanceError):
    pass


class DisconnectedInput(FapError):
    """The input graph is disconnected, so no spanning solution exists."""


class BridgeInInput(FapError):
    """The input graph has a bridge, so no 2-edge-connected spanning subgraph exists."""


class InfeasibleInput(FapError):
    """An edge set handed to the solver fails the connectivity predicate."""


class Infeasible(FapError):
    """The oracle found that not even the full edge set is feasible."""


class TooLarge(FapError):
    """The instance exceeds the oracle's size limit."""


class MalformedSet(FapError, ValueError):
    """A dual variable is attached to the empty set, to V, or to unknown vertices."""


class PreconditionUnmet(FapError):
    pass


class TraceMismatch(FapError):
    """Replaying a trace did not reproduce the recorded solution."""


class ParamsInvalid(FapError, ValueError):
    pass
