"""Gaussian simulation of coherent x squeezed-vacuum Mach-Zehnder interferometry.

Parity detection and the local-oscillator intensity-difference scheme, with
closed forms cross-checked against exact Gaussian moments and a truncated
Fock-space oracle.
"""
from .errors import (
    DomainError,
    NumericalError,
    StationaryPointError,
    TruncationError,
    TruncationWarning,
    UsageError,
)
from .gaussian import (
    GaussianState,
    LinearMap,
    apply,
    chain,
    coherent_state,
    intensity_difference_moments,
    marginal,
    squeezed_vacuum,
    symmetric_number_mean,
    tensor,
    vacuum,
    wigner_at,
)

__version__ = "0.1.0"
