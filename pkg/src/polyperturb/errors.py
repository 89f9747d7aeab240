"""Exception hierarchy.

The CLI maps these onto exit codes: input/precondition problems become
exit 3, numerical failures exit 4.
"""


class PolyPerturbError(Exception):
    """Base class for all library errors."""


class PreconditionError(PolyPerturbError, ValueError):
    """An operation was called outside its domain."""


class NumericalFailure(PolyPerturbError, ArithmeticError):
    """An iterative numerical method failed."""


class CapacityExceeded(PreconditionError):
    pass


class CapMismatch(PreconditionError):
    pass


class NotNonconstant(PreconditionError):
    pass


class BadIndex(PreconditionError):
    pass


class DegreeMismatch(PreconditionError):
    pass


class NotInvertible(PreconditionError):
    pass


class CardinalityMismatch(PreconditionError):
    pass


class DegenerateVariant(PreconditionError):
    pass


class TooLarge(PreconditionError):
    pass


class ZeroOperator(PreconditionError):
    pass


class DegreeNotPreserved(PreconditionError):
    def __init__(self, message, poly=None):
        super().__init__(message)
        self.poly = poly


class PreconditionFailed(PreconditionError):
    """A theorem-check precondition does not hold.

    ``reason`` is one of ``"not_apolar"``, ``"g_roots_outside"``,
    ``"not_invertible"`` or ``"operator_roots_outside"``.
    """

    def __init__(self, reason, message=None, residual=None):
        super().__init__(message or reason)
        self.reason = reason
        self.residual = residual


class NotInAlgebra(PolyPerturbError):
    """The matrix does not commute with differentiation."""

    def __init__(self, commutator_norm, toeplitz_defect=None):
        super().__init__(
            f"operator does not commute with D (commutator norm {commutator_norm:.3e})")
        self.commutator_norm = commutator_norm
        self.toeplitz_defect = toeplitz_defect


class NoConvergence(NumericalFailure):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class SolverFailure(NumericalFailure):
    def __init__(self, message, poly=None):
        super().__init__(message)
        self.poly = poly
