"""Exception hierarchy.

Every error raised by the package derives from :class:`RailReschedError` so
callers (and the CLI) can catch them in one place.
"""


class RailReschedError(Exception):
    pass


# network model
class DuplicateStationId(RailReschedError):
    pass


class DanglingTrackEndpoint(RailReschedError):
    pass


class DisconnectedGraph(RailReschedError):
    pass


class NoRouteExists(RailReschedError):
    pass


class UnknownTrain(RailReschedError):
    pass


class UnknownStation(RailReschedError):
    pass


class InvalidNetwork(RailReschedError):
    """Catch-all for semantic network errors (bad platform count, ...)."""


class InvalidTimetable(RailReschedError):
    """A timetable that breaks its own planned times or the feasibility rules."""


class NotFittedError(RailReschedError, AttributeError):
    pass


# petri nets
class MarkingDimensionMismatch(RailReschedError):
    pass


class TransitionNotEnabled(RailReschedError):
    def __init__(self, transition, index=None):
        self.transition = transition
        self.index = index
        where = "" if index is None else f" at sequence index {index}"
        super().__init__(f"transition {transition!r} is not enabled{where}")


class NodeBudgetExceeded(RailReschedError):
    pass


class InvalidNet(RailReschedError):
    pass


# constraints
class NonAdjacentStations(RailReschedError):
    pass


class EarlyArrivalViolation(RailReschedError):
    pass


class MultipleResourcesHeld(RailReschedError):
    pass


class UnknownState(RailReschedError):
    pass


# rescheduling
class InvalidInterval(RailReschedError):
    pass


class TrainNotOnApproach(RailReschedError):
    pass


class PreconditionUnsatisfied(RailReschedError):
    pass


class ScheduleMismatch(RailReschedError):
    pass


class InfeasibleAfterRecovery(RailReschedError):
    pass


# agents
class IllegalMessageRoute(RailReschedError):
    pass


class HorizonExceeded(RailReschedError):
    pass


# io
class ParseError(RailReschedError):
    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        loc = []
        if path is not None:
            loc.append(str(path))
        if line is not None:
            loc.append(f"line {line}")
        if column is not None:
            loc.append(f"col {column}")
        prefix = ":".join(loc)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class NonMonotoneItinerary(ParseError):
    pass
