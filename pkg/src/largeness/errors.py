"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "LargenessError",
    "AxiomViolation",
    "SizeLimit",
    "DomainError",
    "ParameterDomain",
    "MassMismatch",
    "EmptySupport",
    "NotMultiple",
    "SpaceMismatch",
    "GridMismatch",
    "InsufficientData",
    "DegenerateProfile",
    "NotSummable",
]


class LargenessError(Exception):
    """Base class for package-specific errors."""


class AxiomViolation(LargenessError):
    """A distance function failed a metric axiom.

    ``kind`` is one of ``"diagonal"``, ``"symmetry"``, ``"triangle"``;
    ``witness`` is the offending index tuple.  For a triangle witness
    ``(i, j, k)`` the violation is ``d(i, j) > d(i, k) + d(k, j)``.
    """

    def __init__(self, kind: str, witness, detail: str = ""):
        self.kind = kind
        self.witness = tuple(int(w) for w in witness)
        msg = f"{kind} axiom violated at {self.witness}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class SizeLimit(LargenessError):
    """An operation would enumerate or allocate beyond its point budget."""


class DomainError(LargenessError):
    """An argument fell outside the mathematical domain of an operation."""


class ParameterDomain(LargenessError):
    """A construction's parameters violate its admissible range."""


class MassMismatch(LargenessError):
    """Two measures that must carry equal total mass do not."""


class EmptySupport(LargenessError):
    """A measure with empty support was passed where mass is required."""


class NotMultiple(LargenessError):
    """Masses are not integer multiples of the requested granularity."""

    def __init__(self, granularity: float, detail: str = ""):
        self.granularity = granularity
        msg = f"masses are not integer multiples of {granularity!r}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class SpaceMismatch(LargenessError):
    """Operands live on different ground spaces."""


class GridMismatch(LargenessError):
    """An epsilon grid lacks the structure an operation needs (e.g. doubled pairs)."""


class InsufficientData(LargenessError):
    """Too few usable data points to produce an estimate."""


class DegenerateProfile(LargenessError):
    """A covering profile carries no growth to fit (constant counts)."""


class NotSummable(LargenessError):
    """A side-length sequence's d-th power sum exceeds the packing budget."""
