"""Exception hierarchy shared by every symlab module."""


class SymlabError(Exception):
    """Base class for all symlab errors."""


class DimensionMismatch(SymlabError):
    """Operands do not share the same matrix dimension."""


class DimensionTooLarge(SymlabError):
    """Matrix dimension exceeds the configured guard."""


class NumericalFailure(SymlabError):
    """A numerical backend did not converge."""


class FunctionUndefinedOnSpectrum(SymlabError):
    """A spectral function table has no entry for an eigenvalue cluster."""


class NotPsd(SymlabError):
    """Matrix is not positive semidefinite within tolerance."""


class NotPositiveDefinite(SymlabError):
    """Matrix is not positive definite within tolerance."""


class SingularMatrix(SymlabError):
    """Matrix has an eigenvalue below the inversion tolerance."""


class BadRank(SymlabError):
    """Requested rank is outside 1..n."""


class NotAnEffect(SymlabError):
    """Matrix eigenvalues are not within [0, 1] up to tolerance."""


class NotInvertibleEffect(NotAnEffect):
    """Effect has an eigenvalue at or below zero."""


class NotAProjection(SymlabError):
    """Matrix is not idempotent within tolerance."""


class NotRankOneProjection(NotAProjection):
    """Projection does not have rank one."""


class TrivialProjection(SymlabError):
    """Operation requires a projection different from 0 and I."""


class EqualInputs(SymlabError):
    """Operation requires two distinct matrices."""


class NonCommutingInput(SymlabError):
    """Inputs were required to commute but do not."""


class NonSeparableSpectrum(SymlabError):
    """Eigenvalue clusters cannot be separated at the configured width."""


class OutOfInterval(SymlabError):
    """Matrix violates the declared order-interval bounds."""


class DomainViolation(SymlabError):
    """Input lies outside the domain class of a symmetry descriptor."""


class ContractUnknown(SymlabError):
    """Unknown relation/operation contract name."""


class OracleNotInClass(SymlabError):
    """Black-box oracle failed a check required by its declared class."""


class InconsistentSample(SymlabError):
    """Frame sample is not consistent with any density matrix."""
