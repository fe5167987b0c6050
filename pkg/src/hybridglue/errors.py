"""Exception types shared across the package."""


class InvalidParameter(ValueError):
    """An argument is outside the domain an operation accepts."""


class StabilityDomainError(InvalidParameter):
    """The marked surface violates 2g - 2 + s > 0."""


class GluingIncompatibility(ValueError):
    """Two parabolic objects cannot be glued to a bundle of integral degree."""


class BranchError(ValueError):
    """A complex logarithm/arcsinh left the principal branch domain."""


class DegenerateCusp(ValueError):
    """The filling-coefficient linear system is singular."""


class NoSolution(RuntimeError):
    """An iterative solve did not converge."""


class NumericError(ArithmeticError):
    """A numerical field became non-finite."""
