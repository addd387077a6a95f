"""Exception types shared across the package."""


class ScError(Exception):
    """Base class; ``code`` is a short machine-readable tag."""

    code = "ERROR"

    def __init__(self, message="", **info):
        super().__init__(message)
        if "code" in info:
            self.code = info.pop("code")
        self.info = info


class PresentationSyntaxError(ScError):
    code = "SYNTAX"

    def __init__(self, message, line=None, col=None):
        where = f"line {line}" if line is not None else "input"
        if col is not None:
            where += f", col {col}"
        super().__init__(f"{where}: {message}", line=line, col=col)
        self.line = line
        self.col = col


class ValidationError(ScError):
    code = "VALIDATION"


class BudgetExceeded(ScError):
    code = "BUDGET"


class OverflowError_(ScError):
    code = "OVERFLOW"


class OracleUnknown(ScError):
    code = "ORACLE_UNKNOWN"


class NotClassical(ScError):
    code = "NOT_CLASSICAL"


class NonInterior(ScError):
    code = "NON_INTERIOR"


class PreconditionError(ScError):
    code = "PRECONDITION"


class PatternMismatch(ScError):
    code = "PATTERN_MISMATCH"


class SearchExhausted(ScError):
    code = "SEARCH_EXHAUSTED"


class DiagramError(ScError):
    code = "DIAGRAM"
