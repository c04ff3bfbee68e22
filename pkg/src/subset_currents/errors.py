"""Exception hierarchy shared by all modules."""


class CurrentsError(Exception):
    """Base class for every error raised by this package."""


class MarkingError(CurrentsError):
    """The marking graph violates one of its structural invariants."""

    def __init__(self, reason, detail=""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class NotFoldedError(CurrentsError):
    pass


class NotCyclicallyReducedError(CurrentsError):
    pass


class GraphFormatError(CurrentsError):
    """Malformed graph, tree, or weight-table input."""


class BudgetExceeded(CurrentsError):
    pass


class PreconditionError(CurrentsError):
    """A mathematical precondition of an operation does not hold."""


class SwitchConditionError(PreconditionError):
    """Weight system is not balanced on some semi-round class."""

    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0]
        super().__init__(
            f"{len(self.violations)} unbalanced semi-round class(es); first {first.key}: "
            f"origin side {first.origin_sum} != terminus side {first.terminus_sum}"
        )


class RationalizationError(PreconditionError):
    def __init__(self, message, achieved=None):
        self.achieved = achieved
        super().__init__(message)
