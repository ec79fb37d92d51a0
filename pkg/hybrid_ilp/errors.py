"""Exception hierarchy for the hybrid ILP toolkit."""

from __future__ import annotations

from typing import TYPE_CHECKING, List

if TYPE_CHECKING:
    from hybrid_ilp.schemas import Violation


class HybridILPError(Exception):
    """Base class for every error raised by the package."""


# ── Input errors ───────────────────────────────────────────

class ParseError(HybridILPError):
    """Lexical or syntax error in a surface-syntax document."""

    def __init__(self, message: str, line: int = 1, column: int = 1,
                 context: str = "", source: str = ""):
        self.line = max(line, 1)
        self.column = max(column, 1)
        self.context = context
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{self.line}:{self.column}: {message}")


class KBValidationError(HybridILPError):
    """One or more rules are not admissible (safeness violations)."""

    def __init__(self, violations: List["Violation"], source: str = ""):
        self.violations = list(violations)
        self.source = source
        lines = [v.describe() for v in self.violations]
        super().__init__("invalid rules:\n  " + "\n  ".join(lines))


class UnknownPredicateError(HybridILPError):
    pass


class ArityMismatchError(HybridILPError):
    pass


class KindClashError(HybridILPError):
    """A name is used with incompatible predicate kinds."""


class BiasError(HybridILPError):
    """Language bias refers to something outside the KB signature."""


class GroundingError(HybridILPError):
    pass


# ── Reasoning errors ───────────────────────────────────────

class ResourceLimitError(HybridILPError):
    """A configured cap was exceeded."""

    def __init__(self, limit: str, value: int, cap: int):
        self.limit = limit
        self.value = value
        self.cap = cap
        super().__init__(f"{limit} exceeded: {value} > {cap}")


class InconsistentKBError(HybridILPError):
    """The input knowledge base has no NM-model."""

