class ParameterError(ValueError):
    """An input lies outside its valid domain."""


class NumericalError(ArithmeticError):
    """An iterative routine failed to converge or lost its invariants."""
