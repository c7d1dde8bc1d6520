"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


# corpus loading / alignment parsing

class LineCountMismatch(ToolkitError):
    pass


class EmptyFile(ToolkitError):
    pass


class MalformedLink(ToolkitError):
    pass


class IndexOutOfBounds(ToolkitError):
    pass


class PairMismatch(ToolkitError):
    pass


class SchemaViolation(ToolkitError):
    pass


# schema rendering

class OverlappingSpans(ToolkitError):
    pass


class UnbalancedBrackets(ToolkitError):
    pass


class NestedBrackets(ToolkitError):
    pass


# extraction

class TaggerFailure(ToolkitError):
    pass


class MissingAlignment(ToolkitError):
    pass


# models

class SeparatorCollision(ToolkitError):
    pass


class DegenerateLabels(ToolkitError):
    pass


class AdapterTimeout(ToolkitError):
    pass


class MalformedScores(ToolkitError):
    pass


# strategies / engine

class NoPositives(ToolkitError):
    pass


class EmptyPool(ToolkitError):
    pass


class InsufficientPositives(ToolkitError):
    pass


class LabelSinkTimeout(ToolkitError):
    pass


class ValidationFailure(ToolkitError):
    """A label submission violated the record schema; the whole batch is rejected."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(f"{len(self.violations)} invalid submission(s): {self.violations}")


class EmptyTestSet(ToolkitError):
    pass
