"""Exception hierarchy shared across the toolkit."""


class GcodeDiffError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GcodeDiffError):
    """Problem in the G-code frontend (bad syntax, unsupported motion)."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class MalformedArgument(ParseError):
    pass


class UnsupportedMotion(ParseError):
    pass


class SemanticsError(GcodeDiffError):
    """Problem while executing the motion semantics."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class DegenerateMove(SemanticsError):
    pass


class NonPlanarMove(SemanticsError):
    pass


class EmptyInput(GcodeDiffError):
    pass


class OutOfBounds(GcodeDiffError):
    pass


class GridMismatch(GcodeDiffError):
    pass


class NoNumericCells(GcodeDiffError):
    pass


class InvalidDims(GcodeDiffError):
    pass


class IoFailure(GcodeDiffError):
    pass
