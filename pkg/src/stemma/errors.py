"""Exception hierarchy shared by all modules.

Every error carries a stable machine-readable ``code`` so the HTTP layer can
map exceptions to the wire format without string matching.
"""


class StemmaError(Exception):
    """Base class; ``code`` is the wire-level error identifier."""

    code = "INTERNAL"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


class UnknownDomain(StemmaError):
    code = "UNKNOWN_DOMAIN"


class DuplicateDomain(StemmaError):
    code = "CONFLICT"


class NotFound(StemmaError):
    code = "NOT_FOUND"


class UnknownParent(StemmaError):
    code = "NOT_FOUND"


class CrossDomainParent(StemmaError):
    code = "CONFLICT"


class InvalidGenome(StemmaError):
    code = "INVALID_GENOME"


class InvalidArgument(StemmaError):
    code = "INVALID_ARGUMENT"


class CorruptStore(StemmaError):
    code = "CORRUPT_STORE"

    def __init__(self, line_number: int, message: str = ""):
        super().__init__(message or f"corrupt record at line {line_number}")
        self.line_number = line_number


class EmptySelection(StemmaError):
    code = "EMPTY_SELECTION"


class IndexOutOfRange(StemmaError):
    code = "INVALID_ARGUMENT"


class StaleEpoch(StemmaError):
    code = "STALE_EPOCH"


class InvalidPopSize(StemmaError):
    code = "INVALID_ARGUMENT"


class SessionExpired(StemmaError):
    code = "SESSION_EXPIRED"


class CycleDetected(StemmaError):
    code = "INVALID_GENOME"


class DanglingNode(StemmaError):
    code = "INVALID_GENOME"


class IncompatibleGenomes(StemmaError):
    code = "INVALID_GENOME"
