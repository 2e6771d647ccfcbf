"""Orthogonal polynomial ensembles conditioned on rigid point configurations.

Builds the weights induced on ``[-R, R]`` by an exterior configuration,
their Christoffel-Darboux kernels, the equilibrium measures of the
comparison fields, and the experiments checking convergence to the sine
kernel.
"""

from rigidkernel.errors import ParameterError, StabilityError

__version__ = "0.1.0"

__all__ = ["ParameterError", "StabilityError", "__version__"]
