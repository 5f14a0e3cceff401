"""Non-stationary signal shapes and their imaginary-time profiles.

Three shapes are supported, all with amplitude ``eps``, inverse width ``omega``
and time parameter ``theta``:

* ``quartic-gaussian``: ``-eps * exp(-W^4 t^4 - 2 W^4 theta^2 t^2)``, even in t.
  On the imaginary axis it peaks sharply at ``t = i theta``.
* ``lorentz-gaussian``: ``-eps * t theta / (t^2 + theta^2) * exp(-W^2 t^2)``,
  odd in t with poles at ``t = +-i theta``.
* ``odd-gaussian``: ``-eps * (t / theta) * exp(-W^2 t^2)``, the pole-free
  look-alike of the previous shape. It is kept as a negative control only.

Functions accept complex times where the formula is analytic.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DomainError, InvalidSpecError, QuadratureError

logger = logging.getLogger(__name__)

QUARTIC = "quartic-gaussian"
LORENTZ = "lorentz-gaussian"
ODD = "odd-gaussian"
SHAPES = (QUARTIC, LORENTZ, ODD)

PHI_RTOL = 1e-10


@dataclass(frozen=True)
class Pulse:
    shape: str
    eps: float
    omega: float
    theta: float

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise InvalidSpecError(f"unknown pulse shape {self.shape!r}; expected one of {SHAPES}")
        if self.eps < 0:
            raise InvalidSpecError("pulse amplitude must be non-negative")
        if not self.omega > 0 or not self.theta > 0:
            raise InvalidSpecError("omega and theta must be positive")

    @property
    def omega2theta2(self) -> float:
        return (self.omega * self.theta) ** 2

    @classmethod
    def from_omega2theta2(cls, shape: str, eps: float, theta: float, omega2theta2: float) -> "Pulse":
        return cls(shape, eps, math.sqrt(omega2theta2) / theta, theta)


@dataclass(frozen=True)
class StepProfile:
    """Instant-signal limit of the quartic-Gaussian pulse: phi = tau - lam*theta*H(tau - theta)."""

    lam: float
    theta: float

    def __post_init__(self):
        if self.lam < 0 or not self.theta > 0:
            raise InvalidSpecError("step profile needs lam >= 0 and theta > 0")


def evaluate(p: Pulse, t):
    """Field value at (possibly complex) time ``t``."""
    t = np.asarray(t)
    W, th = p.omega, p.theta
    if p.shape == QUARTIC:
        t2 = t * t
        out = -p.eps * np.exp(-(W ** 4) * t2 * t2 - 2 * W ** 4 * th * th * t2)
    elif p.shape == LORENTZ:
        out = -p.eps * t * th / (t * t + th * th) * np.exp(-W * W * t * t)
    else:
        out = -p.eps * (t / th) * np.exp(-W * W * t * t)
    return out[()] if out.ndim == 0 else out


def reduced_profile(p: Pulse, E0: float) -> Callable:
    """Return ``h(t) = field(t) / E0``."""
    if not E0 > 0:
        raise InvalidSpecError("static field must be positive")
    return lambda t: evaluate(p, t) / E0


def effective_amplitude(p: Pulse, E0: float) -> float:
    """Step height ``lam`` of the quartic-Gaussian pulse in the instant-signal limit."""
    if p.shape != QUARTIC:
        raise DomainError("effective amplitude is defined for the quartic-gaussian pulse only")
    w4t4 = p.omega2theta2 ** 2
    if w4t4 < 4:
        warnings.warn(f"Omega^4 theta^4 = {w4t4:.3g} < 4: outside the instant-signal regime", RuntimeWarning)
    if p.eps == 0:
        return 0.0
    log_lam = 0.5 * math.log(math.pi) - math.log(2 * p.omega2theta2) + math.log(p.eps / E0) + w4t4
    return math.exp(log_lam)


def amplitude_for_lambda(lam: float, E0: float, theta: float, omega2theta2: float) -> float:
    """Quartic-Gaussian amplitude ``eps`` giving the step height ``lam``."""
    if lam == 0:
        return 0.0
    log_eps = math.log(lam) + math.log(2 * omega2theta2) - 0.5 * math.log(math.pi) - omega2theta2 ** 2
    eps = E0 * math.exp(log_eps)
    if eps == 0.0:
        raise DomainError(f"amplitude for lam={lam} underflows at Omega^4 theta^4={omega2theta2 ** 2:.4g}; "
                          "use a StepProfile instead")
    return eps


def _quartic_shape(p: Pulse, xi):
    # normalised so that the integral over xi approaches 1 as omega grows
    W2 = p.omega ** 2
    th = p.theta
    return (2 * W2 * th / math.sqrt(math.pi)) * np.exp(-(W2 ** 2) * (xi * xi - th * th) ** 2)


def h_imaginary(p: Pulse, E0: float, xi, lam: float | None = None):
    """Reduced field on the imaginary axis, ``h(t = i xi)``, for the quartic-Gaussian pulse.

    Written as ``-lam * theta * g(xi)`` with a unit-area bump ``g`` so that huge
    ``exp(W^4 theta^4)`` factors never appear explicitly.
    """
    if p.shape != QUARTIC:
        raise DomainError("h on the imaginary axis is real only for the quartic-gaussian pulse")
    if lam is None:
        lam = _lam_quiet(p, E0)
    return -lam * p.theta * _quartic_shape(p, np.asarray(xi, dtype=float))


def _lam_quiet(p: Pulse, E0: float) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return effective_amplitude(p, E0)


def kick_fraction(p: Pulse, tau: float) -> float:
    """Fraction of the smoothed step accumulated by ``tau`` (tends to H(tau - theta))."""
    if tau <= 0:
        return 0.0
    th = p.theta
    width = 1.0 / (p.omega ** 2 * th)
    pts = [x for x in (th - 8 * width, th, th + 8 * width) if 0 < x < tau]
    val, err, *rest = integrate.quad(
        lambda x: _quartic_shape(p, x), 0.0, tau, points=pts or None,
        epsabs=0.0, epsrel=PHI_RTOL * 1e-2, limit=400, full_output=1,
    )
    if len(rest) > 1 and err > PHI_RTOL * max(abs(val), 1e-300):
        raise QuadratureError("phi quadrature did not converge", {"tau": tau, "value": val, "error": err})
    return val


def phi(p, tau: float, E0: float | None = None) -> float:
    """Imaginary-time profile ``phi(tau) = tau + int_0^tau h(i xi) d xi``.

    ``p`` may be a :class:`Pulse` (quartic-Gaussian, or any shape with zero
    amplitude) or a :class:`StepProfile`.
    """
    if tau < 0:
        raise DomainError("phi is defined for tau >= 0")
    if isinstance(p, StepProfile):
        return tau - p.lam * p.theta * (1.0 if tau > p.theta else 0.0)
    if p.eps == 0:
        return float(tau)
    if p.shape != QUARTIC:
        raise DomainError(f"phi is complex for the {p.shape} pulse")
    lam = _lam_quiet(p, E0)
    return tau - lam * p.theta * kick_fraction(p, tau)


def contour_kick(p: Pulse) -> float:
    """Magnitude of the field integral around the pole at ``t = i theta``."""
    if p.shape != LORENTZ:
        raise DomainError("only the lorentz-gaussian pulse has a pole")
    if p.omega2theta2 < 4:
        warnings.warn("Omega^2 theta^2 < 4: outside the instant-signal regime", RuntimeWarning)
    if p.eps == 0:
        return 0.0
    return math.pi * p.theta * p.eps * math.exp(p.omega2theta2)


@dataclass(frozen=True)
class FourierComponent:
    value: complex
    pole: complex
    saddle: complex
    method: str  # "asymptotic" or "numerical"


def fourier_pole_term(p: Pulse, w: float, ignore_step: bool = False) -> complex:
    th, W2 = p.theta, p.omega ** 2
    if not ignore_step and th > w / (2 * W2):
        return 0j
    return -1j * math.pi * th * p.eps * math.exp(p.omega2theta2 - w * th)


def fourier_saddle_term(p: Pulse, w: float) -> complex:
    th, W = p.theta, p.omega
    denom = w * w - (2 * W * W * th) ** 2
    if denom == 0:
        raise DomainError("saddle term is singular at w = 2 Omega^2 theta")
    return 2j * math.sqrt(math.pi) * p.eps * w * th * W / denom * math.exp(-w * w / (4 * W * W))


def fourier_numerical(p: Pulse, w: float) -> complex:
    """``int field(t) exp(i w t) dt`` by oscillatory quadrature (odd shapes only)."""
    if p.shape == QUARTIC:
        raise DomainError("numerical Fourier component implemented for odd shapes")
    # odd integrand: only the sine part survives, value = 2i int_0^inf f(t) sin(wt) dt
    tmax = 12.0 / p.omega + 2 * p.theta
    val, err = integrate.quad(lambda t: float(evaluate(p, t)), 0.0, tmax, weight="sin", wvar=w, limit=2000)
    return 2j * val


def fourier_component(p: Pulse, w: float, window: float = 0.05) -> FourierComponent:
    """Fourier component of the lorentz-gaussian pulse.

    Uses the pole + saddle asymptotic form, except within a relative
    ``window`` of ``w = 2 Omega^2 theta`` where that form has a spurious pole;
    there the integral is evaluated numerically.
    """
    if p.shape != LORENTZ:
        raise DomainError("fourier_component is defined for the lorentz-gaussian pulse")
    if not w > 0:
        raise DomainError("frequency must be positive")
    w_c = 2 * p.omega ** 2 * p.theta
    pole = fourier_pole_term(p, w)
    if abs(w - w_c) < window * w_c:
        logger.debug("w=%g inside the coalescence window of w_c=%g; using quadrature", w, w_c)
        num = fourier_numerical(p, w)
        return FourierComponent(num, pole, num - pole, "numerical")
    saddle = fourier_saddle_term(p, w)
    return FourierComponent(pole + saddle, pole, saddle, "asymptotic")


def sample(p: Pulse, n: int = 400, span: float = 3.0):
    """Sample ``(t/theta, field/eps)`` on ``[-span*theta, span*theta]``."""
    t = np.linspace(-span * p.theta, span * p.theta, n)
    unit = Pulse(p.shape, 1.0, p.omega, p.theta)
    return t / p.theta, np.real(evaluate(unit, t))
