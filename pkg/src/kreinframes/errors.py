"""Exception hierarchy.

Input-contract problems (bad shapes, bad files) raise ``ValueError`` or
``FrameFileError``; the classes below signal *mathematical* failures:
either a precondition of an operation is not met, or a quantity that a
theorem guarantees could not be reproduced numerically (an implementation
alarm, not a user error).
"""


class KreinFrameError(Exception):
    """Base class for all kreinframes-specific errors."""


class NotDefiniteError(KreinFrameError):
    """A subspace expected to be uniformly definite is not."""


class NotMaximalDefiniteError(KreinFrameError):
    """A subspace expected to be maximal uniformly definite is not."""


class NotGraphError(KreinFrameError):
    """Subspace is not a graph over the requested half of a decomposition."""


class ContractViolationError(KreinFrameError):
    """An angular operator came out with norm >= 1 (up to margin)."""


class NotComplementaryError(KreinFrameError):
    """Two subspaces expected to span the whole space directly do not."""


class DegenerateSubspaceError(KreinFrameError):
    """A subspace expected to be regular has a singular Gram matrix."""


class NotJFrameError(KreinFrameError):
    """Operation requires a valid J-frame."""


class RepresentationInconsistentError(KreinFrameError):
    """Two independent routes to the same block entry disagree."""


class OracleMismatchError(KreinFrameError):
    """Spectral bounds disagree with the brute-force frame-bound oracle."""

    def __init__(self, msg, spectral=None, oracle=None):
        super().__init__(msg)
        self.spectral = spectral
        self.oracle = oracle


class InvariantViolationError(KreinFrameError):
    """A theorem-backed identity failed beyond tolerance (alarm)."""


class SingularSError(KreinFrameError):
    """Operator expected to be invertible is singular."""


class SpectrumNotInRHPError(KreinFrameError):
    """Square root requires all eigenvalues in the open right half-plane."""


class RecurrenceBreakdownError(KreinFrameError):
    """Triangular sqrt recurrence hit a (near-)zero divisor."""


class ContourTooCloseError(KreinFrameError):
    """Quadrature contour passes too close to the spectrum."""


class CannotEncloseError(KreinFrameError):
    """No admissible circular contour exists for this spectrum."""


class NonRegularKernelError(KreinFrameError):
    """The kernel companion of a synthesis operator is not regular."""


class OperatorMismatchError(KreinFrameError):
    """Two frames do not share the same frame operator."""


class GenerationError(KreinFrameError):
    """Random instance generation exhausted its retry budget."""


class FrameFileError(KreinFrameError):
    """Malformed frame/operator file; message names the offending field."""
