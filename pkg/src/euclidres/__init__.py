"""Semiclassical tunneling rates under adapted non-stationary pulses.

Modules
-------
quantities
    Unit systems and conversions.
pulses
    Pulse shapes, their step limits and Fourier components.
triangular
    Closed forms and branch analysis for the triangular barrier.
smooth
    Quadrature and complex-time integration for general barriers.
scenarios
    Application reports in lab units.
cli
    Command-line front end.
"""
from importlib import metadata as _metadata

try:
    __version__ = _metadata.version("artifact")
except _metadata.PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .errors import (  # noqa: E402
    DimensionError,
    DomainError,
    EuclidresError,
    IntegrationError,
    InvalidSpecError,
    NoPhysicalBranchError,
    QuadratureError,
    RootNotFoundError,
)
from .kernels import BACKEND  # noqa: E402
from .pulses import Pulse, StepProfile  # noqa: E402
from .quantities import BarrierSpec, LabBarrier, Quantity, convert, to_natural  # noqa: E402

__all__ = [
    "BACKEND",
    "BarrierSpec",
    "DimensionError",
    "DomainError",
    "EuclidresError",
    "IntegrationError",
    "InvalidSpecError",
    "LabBarrier",
    "NoPhysicalBranchError",
    "Pulse",
    "QuadratureError",
    "Quantity",
    "RootNotFoundError",
    "StepProfile",
    "__version__",
    "convert",
    "to_natural",
]
