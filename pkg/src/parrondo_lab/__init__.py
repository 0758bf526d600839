"""Classical and quantum Parrondo games on small cycles."""

__version__ = "0.1.0"
TOOL_NAME = "parrondo-cycle-lab"

from parrondo_lab.errors import NumericalError, ParameterError  # noqa: E402

__all__ = ["NumericalError", "ParameterError", "TOOL_NAME", "__version__"]
