"""Exception types shared across the package."""


class DescentError(Exception):
    """Base class for every error raised by modtwist."""


class ContractError(DescentError, ValueError):
    """A precondition of an operation does not hold."""


class SingularMatrixError(DescentError, ArithmeticError):
    pass


class GroupTableError(DescentError, ValueError):
    """A Cayley table or permutation generating set does not define a group."""


class SearchCapExceeded(DescentError):
    """A brute-force search would exceed its configured size cap."""

    def __init__(self, message, estimate=None, cap=None):
        super().__init__(message)
        self.estimate = estimate
        self.cap = cap


class ProblemFormatError(DescentError, ValueError):
    """A problem file is malformed; ``path`` names the offending field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class RouteDisagreement(DescentError):
    """Two independent decision routes returned different verdicts."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
