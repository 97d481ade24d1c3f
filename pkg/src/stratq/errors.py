"""Exception hierarchy shared by all modules.

Validation problems derive from ``ValueError`` (the CLI maps them to exit
code 2); solver failures derive from ``RuntimeError`` (exit code 1).
"""


class StratqError(Exception):
    pass


class InvalidInput(StratqError, ValueError):
    pass


class NonPositiveInput(InvalidInput):
    pass


class UnstableQueue(InvalidInput):
    pass


class TrivialReward(InvalidInput):
    pass


class WrongScenario(InvalidInput):
    pass


class OutOfRegion(InvalidInput):
    pass


class EmptyConditioningEvent(InvalidInput):
    pass


class TruncationTooSmall(InvalidInput):
    pass


class NoConvergence(StratqError, RuntimeError):
    """Iterative solver gave up; ``details`` carries residuals or a trajectory."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details
