"""Exception types raised across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a quantity is defined.

    ``param`` names the offending parameter so front ends can report it.
    """

    def __init__(self, param, value, message=None):
        self.param = param
        self.value = value
        if message is None:
            message = f"parameter {param}={value!r} is outside its domain"
        super().__init__(message)


class NotHermitianError(ValueError):
    """Input matrix fails the Hermiticity check."""

    def __init__(self, max_asymmetry, tol):
        self.max_asymmetry = max_asymmetry
        super().__init__(
            f"matrix is not Hermitian: max |M - M^dagger| = {max_asymmetry:.3e} > {tol:.1e}"
        )


class InvalidPOVMError(ValueError):
    pass
