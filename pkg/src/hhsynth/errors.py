"""Exception types raised across the package."""


class ShapeError(ValueError):
    """Operand dimensions are incompatible."""


class SizeError(ValueError):
    """Requested problem size is out of the supported range."""


class PreconditionError(ValueError):
    """An input violates the documented precondition of an operation."""


class NotUnitaryError(PreconditionError):
    """A matrix expected to be unitary is not (within tolerance)."""


class StructureError(PreconditionError):
    """A vector lacks the zero-prefix structure required for padded preparation."""


class NumericalError(ArithmeticError):
    """Numerical degradation detected (e.g. a column that should be unit-norm is not)."""


class VerificationError(RuntimeError):
    """A synthesized circuit does not reproduce its target matrix."""

    def __init__(self, residual, tol):
        super().__init__(f"verification failed: residual {residual:.3e} > tol {tol:.3e}")
        self.residual = residual
        self.tol = tol
