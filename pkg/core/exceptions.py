from typing import Optional, Sequence


class KRingError(Exception):
    """Base class for every error raised by the toric K-ring package."""


class LatticeError(KRingError, ValueError):
    pass


class ConeError(KRingError, ValueError):
    pass


class FanError(KRingError, ValueError):
    pass


class CellularError(KRingError, ValueError):
    pass


class LaurentError(KRingError, ValueError):
    pass


class NotDivisibleError(KRingError, ArithmeticError):
    def __init__(self, message: str = "division remainder nonzero"):
        super().__init__(message)


class GKMError(KRingError, ValueError):
    pass


class MembershipError(GKMError):
    """A tuple failed the congruences on one or more GKM edges."""

    def __init__(self, violations: Sequence[tuple[int, int]]):
        self.violations = list(violations)
        pairs = ", ".join(f"({i + 1},{j + 1})" for i, j in self.violations)
        super().__init__(f"not a member, violated edges: {pairs}")


class PLPError(KRingError, ValueError):
    pass


class BasisError(KRingError, ValueError):
    pass


class SolverExhaustedError(BasisError):
    def __init__(self, index: int, detail: str = ""):
        self.index = index
        message = f"solver exhausted at cone {index + 1}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class NotInSpanError(BasisError):
    def __init__(self, index: Optional[int] = None):
        self.index = index
        message = "not in the span"
        if index is not None:
            message = f"{message} (cone {index + 1})"
        super().__init__(message)


class DocumentError(KRingError, ValueError):
    """Malformed input document; carries the field path and line if known."""

    def __init__(self, message: str, field: str = "", line: Optional[int] = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
