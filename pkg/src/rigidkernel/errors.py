"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid parameters or arguments outside a function's domain."""


class StabilityError(ArithmeticError):
    """A numerical construction lost accuracy beyond its tolerance."""
