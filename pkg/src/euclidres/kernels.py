"""Select the compiled integrator when available, else the pure-Python one.

Set ``EUCLIDRES_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import logging
import os

from . import _kernels_py

logger = logging.getLogger(__name__)

BACKEND = "python"
integrate_polyline = _kernels_py.integrate_polyline

if os.environ.get("EUCLIDRES_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        logger.debug("compiled kernels unavailable; using the pure-Python integrator")
    else:
        integrate_polyline = _kernels.integrate_polyline
        BACKEND = "cython"

POT_CALLABLE = _kernels_py.POT_CALLABLE
POT_TRIANGULAR = _kernels_py.POT_TRIANGULAR
POT_COULOMB = _kernels_py.POT_COULOMB
POT_CUBIC = _kernels_py.POT_CUBIC
POT_PCHIP = _kernels_py.POT_PCHIP
PULSE_NONE = _kernels_py.PULSE_NONE
PULSE_QUARTIC = _kernels_py.PULSE_QUARTIC
PULSE_LORENTZ = _kernels_py.PULSE_LORENTZ
PULSE_ODD = _kernels_py.PULSE_ODD
