"""Exception hierarchy shared across the toolkit."""


class ProofChainError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(ProofChainError):
    """An argument is out of range or otherwise malformed."""


class ProofError(ProofChainError):
    """Proof generation refused: the statement is false or inputs mismatch."""


class NotFoundError(ProofChainError):
    """A referenced id (validator, entity, record, field) is unknown."""


class LedgerError(ProofChainError):
    """Base class for ledger append/lookup failures."""


class OrderingError(LedgerError):
    """A block timestamp regressed behind the chain tip."""


class ConflictError(LedgerError):
    """A (author, label) registration collides at the same timestamp."""


class GraphBuildError(ProofChainError):
    """A graph update would violate a structural invariant."""
