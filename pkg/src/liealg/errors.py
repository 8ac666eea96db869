"""Exception hierarchy shared by all modules."""


class LieAlgError(ValueError):
    """Base class for every error raised by liealg."""


class InvalidIrrepError(LieAlgError):
    """Bad irrep label: non-half-integer j or non-positive k."""


class DomainError(LieAlgError):
    """A state parameter lies outside the domain of its family."""


class TruncationError(LieAlgError):
    """The requested tail tolerance cannot be met below the basis cap."""


class DimensionMismatchError(LieAlgError):
    """Operands live on different bases."""


class DegenerateSuperpositionError(LieAlgError):
    """A superposition cancelled to (numerically) zero norm."""


class SchmidtRankError(LieAlgError):
    """The Bell-operator construction needs Schmidt rank <= 2."""


class IdentityError(LieAlgError):
    """A generation identity failed its numerical gate."""


class UnsupportedIdentityError(DomainError):
    """A generation identity was requested outside the parameters where it holds."""
