"""Instant-signal tunneling through a general smooth barrier.

A particle with energy ``E`` leaves the well region at the matching point
``x0`` and, after a momentum kick delivered by the pulse at imaginary time
``theta``, continues with energy ``E + dE`` to the exit point ``x1``. The
classical traversal time of the free segment fixes ``dE(E, theta)``; the action
and the extremal and threshold fields follow from it by quadrature.

The complex-time ODE integrator :func:`integrate_euclidean` provides an
independent check of the quadrature results.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize
from scipy.interpolate import CubicSpline, PchipInterpolator

from . import kernels
from .errors import DomainError, InvalidSpecError, QuadratureError, RootNotFoundError
from .pulses import LORENTZ, QUARTIC, Pulse
from .quantities import BarrierSpec

logger = logging.getLogger(__name__)

QUAD_RTOL = 1e-12
ROOT_RTOL = 1e-13


@dataclass(frozen=True)
class PotentialModel:
    """Static potential with its analytic continuation to complex ``x``.

    ``x_inner`` fixes the matching point on the well side. When it is None, the
    first rising crossing of ``V = E`` is used. ``energy_range`` bounds the
    levels that sit under the barrier. ``scale`` is a typical energy used to
    seed brackets.
    """

    kind: str
    mass: float
    V: Callable
    dV: Callable
    domain: tuple[float, float]
    energy_range: tuple[float, float]
    scale: float
    x_inner: float | None = None
    code: int = kernels.POT_CALLABLE
    params: tuple = ()
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.mass > 0:
            raise InvalidSpecError("mass must be positive")

    @classmethod
    def triangular(cls, V: float, E0: float, m: float) -> "PotentialModel":
        if not E0 > 0:
            raise InvalidSpecError("static field must be positive")
        return cls(
            "triangular", m, lambda x: V - E0 * x, lambda x: -E0 + 0 * x, (0.0, math.inf),
            (-math.inf, V), (E0 ** 2 / m) ** (1 / 3), 0.0, kernels.POT_TRIANGULAR, (V, E0),
        )

    @classmethod
    def from_spec(cls, spec: BarrierSpec) -> "PotentialModel":
        return cls.triangular(spec.V, spec.E0, spec.m)

    @classmethod
    def coulomb(cls, beta: float, m: float) -> "PotentialModel":
        if not beta > 0:
            raise InvalidSpecError("Coulomb strength must be positive")
        return cls(
            "coulomb", m, lambda x: beta / x, lambda x: -beta / (x * x), (0.0, math.inf),
            (0.0, math.inf), m * beta ** 2, 0.0, kernels.POT_COULOMB, (beta,),
        )

    @classmethod
    def cubic(cls, a: float, b: float, m: float) -> "PotentialModel":
        """Metastable well ``a x^2 - b x^3`` with its barrier top at ``x = 2a/3b``."""
        if not (a > 0 and b > 0):
            raise InvalidSpecError("cubic well needs a > 0 and b > 0")
        top = 4 * a ** 3 / (27 * b ** 2)
        return cls(
            "cubic", m, lambda x: a * x * x - b * x ** 3, lambda x: 2 * a * x - 3 * b * x * x,
            (0.0, math.inf), (0.0, top), top, None, kernels.POT_CUBIC, (a, b),
        )

    @classmethod
    def tabulated(cls, x, v, m: float, x_inner: float | None = None) -> "PotentialModel":
        """Monotone cubic (PCHIP) interpolation of sampled values."""
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        if x.ndim != 1 or x.shape != v.shape or len(x) < 4:
            raise InvalidSpecError("tabulated potential needs matching 1-D x and V with at least 4 samples")
        if not np.all(np.diff(x) > 0):
            raise InvalidSpecError("tabulated x must be strictly increasing")
        pch = PchipInterpolator(x, v)
        # heuristic interpolation error: PCHIP against a not-a-knot spline at the midpoints
        mid = 0.5 * (x[1:] + x[:-1])
        err = float(np.max(np.abs(pch(mid) - CubicSpline(x, v)(mid))))
        n = len(x) - 1
        packed = (float(n),) + tuple(pch.x) + tuple(np.asarray(pch.c, dtype=float).ravel())
        dpch = pch.derivative()
        inner = x_inner if x_inner is not None else None
        return cls(
            "tabulated", m,
            _table_eval(pch, packed, False), _table_eval(dpch, packed, True),
            (float(x[0]), float(x[-1])), (float(v.min()), float(v.max())),
            float(v.max() - v.min()), inner, kernels.POT_PCHIP, packed,
            {"interpolation_error": err, "real": pch, "real_derivative": dpch},
        )

    @classmethod
    def from_callables(cls, V: Callable, dV: Callable, m: float, domain, energy_range, scale: float,
                       x_inner: float | None = None) -> "PotentialModel":
        return cls("callable", m, V, dV, tuple(domain), tuple(energy_range), scale, x_inner)


def _table_eval(real_fn, packed, deriv):
    # vectorized scipy evaluation on the real axis, piecewise cubic continuation off it
    def f(z):
        if np.iscomplexobj(z):
            return _pchip_complex(packed, z, deriv)
        return real_fn(z)

    return f


def _pchip_complex(packed, z, deriv=False):
    from ._kernels_py import potential

    z = np.asarray(z)
    flat = [potential(kernels.POT_PCHIP, packed, complex(zz))[1 if deriv else 0] for zz in z.ravel()]
    out = np.array(flat).reshape(z.shape)
    if not np.iscomplexobj(z):
        out = out.real
    return out[()] if out.ndim == 0 else out


def load_tabulated(path, m: float | None = None) -> tuple[PotentialModel, str]:
    """Read a two-column ``x V`` table with ``#`` comments and a ``units:`` header line.

    The mass may be given by a ``mass:`` header line or the ``m`` argument.
    Returns the model and the declared unit system.
    """
    units = None
    mass = m
    rows = []
    with open(path) as fh:
        for line in fh:
            s = line.strip()
            if not s:
                continue
            body = s.lstrip("#").strip()
            key, sep, val = body.partition(":")
            if sep and key.strip().lower() == "units":
                units = val.strip().lower()
                continue
            if sep and key.strip().lower() == "mass" and mass is None:
                mass = float(val)
                continue
            if s.startswith("#"):
                continue
            parts = s.replace(",", " ").split()
            if len(parts) != 2:
                raise InvalidSpecError(f"expected two columns, got {s!r}")
            rows.append((float(parts[0]), float(parts[1])))
    if units not in ("atomic", "nuclear"):
        raise InvalidSpecError("table must declare 'units: atomic' or 'units: nuclear'")
    if mass is None:
        raise InvalidSpecError("mass missing: give a 'mass:' header line or pass m")
    arr = np.array(rows)
    return PotentialModel.tabulated(arr[:, 0], arr[:, 1], mass), units


# -- turning points -----------------------------------------------------------


def _vr(pot: PotentialModel, x):
    return np.real(pot.V(x))


def turning_points(pot: PotentialModel, energy: float, hi: float | None = None) -> np.ndarray:
    """All crossings of ``V(x) = energy`` inside the domain, sorted."""
    lo, top = pot.domain
    if hi is None:
        if math.isfinite(top):
            hi = top
        else:
            hi = (lo if lo > 0 else 0.0) + 1.0
            # grow until the potential has dropped below the level for good
            for _ in range(200):
                with np.errstate(all="ignore"):
                    vh = float(_vr(pot, np.array([hi]))[0])
                if vh < energy and _dv_real(pot, hi) < 0:
                    break
                hi *= 2.0
    grid = np.linspace(lo, hi, 4001)
    grid = np.unique(np.concatenate([grid, lo + (hi - lo) * np.geomspace(1e-10, 1.0, 2001)]))
    with np.errstate(all="ignore"):
        vals = _vr(pot, grid) - energy
    ok = np.isfinite(vals)
    grid, vals = grid[ok], vals[ok]
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        a, b = grid[i], grid[i + 1]
        r = optimize.brentq(lambda x: float(_vr(pot, np.array([x]))[0]) - energy, a, b,
                            xtol=1e-14 * max(abs(a), abs(b), 1e-300), rtol=4 * np.finfo(float).eps)
        roots.append(r)
    roots += grid[vals == 0].tolist()
    if not roots:
        raise RootNotFoundError(f"no turning point at energy {energy}", scan=(grid, vals))
    return np.array(sorted(roots))


def _dv_real(pot: PotentialModel, x: float) -> float:
    return float(np.real(pot.dV(np.array([x]))[0]))


def matching_points(pot: PotentialModel, E: float, dE: float) -> tuple[float, float]:
    """``(x0, x1)``: well-side point at energy ``E`` and exit point at ``E + dE``."""
    if pot.x_inner is not None:
        x0 = pot.x_inner
    else:
        roots = turning_points(pot, E)
        rising = [r for r in roots if _dv_real(pot, r) > 0]
        if not rising:
            raise RootNotFoundError(f"no well-side turning point at E={E}", scan=roots)
        x0 = rising[0]
    roots = turning_points(pot, E + dE)
    falling = [r for r in roots if r > x0 and _dv_real(pot, r) < 0]
    if not falling:
        raise RootNotFoundError(f"no exit point beyond x0={x0} at energy {E + dE}", scan=roots)
    return x0, falling[0]


_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _composite_gl(f, L: float, knots: np.ndarray, rtol: float = QUAD_RTOL, max_panels: int = 1 << 14):
    """Integrate a vectorized ``f`` over ``[0, L]`` by panel-doubling Gauss-Legendre.

    Panels always break at ``knots``. Returns ``(value, error_estimate)``.
    """
    # geometric edges resolve near-singular behaviour close to u = 0
    edges = np.unique(np.concatenate([[0.0], L * np.geomspace(1e-7, 1.0, 24), np.linspace(0.0, L, 9),
                                      knots[(knots > 0) & (knots < L)]]))

    def rule(e):
        mid = 0.5 * (e[1:] + e[:-1])
        half = 0.5 * np.diff(e)
        pts = mid[:, None] + half[:, None] * _GL_X[None, :]
        return float(np.sum(half * (f(pts.ravel()).reshape(pts.shape) @ _GL_W)))

    prev = rule(edges)
    while len(edges) < max_panels:
        edges = np.sort(np.concatenate([edges, 0.5 * (edges[1:] + edges[:-1])]))
        cur = rule(edges)
        err = abs(cur - prev)
        if err <= rtol * abs(cur) or cur == prev:
            return cur, err
        prev = cur
    return prev, err


def _endpoint_integral(pot: PotentialModel, level: float, x0: float, x1: float, power: float,
                       c_left: float | None = None) -> float:
    """``int_x0^x1 (V - level)^power dx`` with ``x = x1 - u^2`` and ``x = x0 + u^2`` substitutions.

    Near each end ``V - level`` is written as ``u^2 q(u) + c`` with
    ``c = V(end) - level`` so that the root-finding error in the turning point
    does not leak into the integrand at tiny ``u``. ``x1`` is a turning point of
    ``level`` so ``c`` vanishes there; ``c_left`` gives the exact offset at ``x0``
    when it is known (``E - level`` for a turning point of ``E``).
    """
    xm = 0.5 * (x0 + x1)
    span = x1 - x0
    knots = np.asarray(pot.params[1:int(pot.params[0]) + 2]) if pot.code == kernels.POT_PCHIP else np.empty(0)

    def make(xe, sign, c_exact):
        Ve = float(_vr(pot, np.array([xe]))[0]) if xe > pot.domain[0] or pot.x_inner is None else math.inf
        if not math.isfinite(Ve):
            # singular end (e.g. Coulomb at the origin): no cancellation to guard against
            def d_of(u):
                return _vr(pot, xe + sign * u * u) - level
            return d_of
        slope = sign * _dv_real(pot, xe)
        c = max(Ve - level if c_exact is None else c_exact, 0.0)
        tiny = 1e-6 * span
        # second-order Taylor form of q below ``tiny``; curvature from q at a larger step
        h = 1e-3 * span
        curv = ((float(_vr(pot, np.array([xe + sign * h]))[0]) - Ve) / h - slope) / h

        def d_of(u):
            u2 = u * u
            with np.errstate(all="ignore"):
                big = (_vr(pot, xe + sign * u2) - Ve) / np.where(u2 > tiny, u2, 1.0)
            q = np.where(u2 > tiny, big, slope + curv * u2)
            return u2 * q + c
        return d_of

    def integrand(d_of):
        def f(u):
            d = np.maximum(d_of(u), 0.0)
            with np.errstate(all="ignore"):
                val = d ** power
            if power < 0:
                val = np.where(d > 0, val, 0.0)
            return 2 * u * val
        return f

    total = 0.0
    parts = (
        (make(x1, -1.0, 0.0), math.sqrt(x1 - xm), np.sqrt(np.clip(x1 - knots, 0, None))),
        (make(x0, 1.0, c_left), math.sqrt(xm - x0), np.sqrt(np.clip(knots - x0, 0, None))),
    )
    for d_of, L, uk in parts:
        val, err = _composite_gl(integrand(d_of), L, uk)
        if not (err <= 1e-10 * max(abs(val), 1e-300)):
            raise QuadratureError("turning-point quadrature did not converge",
                                  {"level": level, "x0": x0, "x1": x1, "value": val, "error": err})
        total += val
    return total


def _c_left(pot: PotentialModel, dE: float) -> float | None:
    # a well-side turning point of E sits exactly -dE above the exit level
    return -dE if pot.x_inner is None else None


def static_traversal_time(pot: PotentialModel, E: float) -> float:
    """Limit of the segment duration as the energy gain goes to zero."""
    x0, x1 = matching_points(pot, E, 0.0)
    return math.sqrt(pot.mass / 2) * _endpoint_integral(pot, E, x0, x1, -0.5, _c_left(pot, 0.0))


def theta_of_deltaE(pot: PotentialModel, E: float, dE: float) -> float:
    """Imaginary-time duration of the free segment at energy ``E + dE``."""
    if not dE < 0:
        raise DomainError(f"energy gain must be negative, got {dE}")
    x0, x1 = matching_points(pot, E, dE)
    return math.sqrt(pot.mass / 2) * _endpoint_integral(pot, E + dE, x0, x1, -0.5, _c_left(pot, dE))


def _floor(pot: PotentialModel) -> float:
    # lowest exit energy that still meets a barrier
    return pot.energy_range[0] if pot.kind != "cubic" else -math.inf


def deltaE_of_theta(pot: PotentialModel, E: float, theta: float) -> float:
    """Invert :func:`theta_of_deltaE` by bracketed root finding.

    Depending on the barrier shape the duration grows (triangular, Coulomb)
    or shrinks (wells with a falling tail) as the gain becomes more negative;
    the attainable side of the static time is detected first.
    """
    if not theta > 0:
        raise DomainError("theta must be positive")
    t_static = static_traversal_time(pot, E)
    s = max(abs(E), pot.scale) if E != 0 else pot.scale
    floor = _floor(pot) - E
    grows = theta_of_deltaE(pot, E, -s * 1e-9) > t_static
    if (theta <= t_static) == grows:
        side = ">" if grows else "<"
        raise DomainError(f"theta={theta} not attainable: need theta {side} {t_static} (static traversal time)")
    hi = -s * 1e-14
    lo = None
    for k in range(-20, 30):
        cand = -s * 4.0 ** k
        if cand <= floor:
            cand = floor * (1 - 1e-13)
        try:
            t = theta_of_deltaE(pot, E, cand)
        except (RootNotFoundError, QuadratureError):
            break
        if (t >= theta) == grows:
            lo = cand
            break
        hi = cand
        if cand <= floor * (1 - 1e-13):
            break
    if lo is None:
        raise DomainError(f"theta={theta} beyond the attainable interval on the {'upper' if grows else 'lower'} side of {t_static}")
    # the classical segment must be unique: check monotonicity on a sample
    probe = np.linspace(hi, lo, 5)
    ts = np.array([theta_of_deltaE(pot, E, d) for d in probe])
    steps = np.diff(ts) if grows else -np.diff(ts)
    if np.any(steps <= 0):
        raise DomainError(f"theta(dE) not monotone on [{lo}, {hi}]; samples {ts.tolist()}")
    return optimize.brentq(lambda d: theta_of_deltaE(pot, E, d) - theta, lo, hi,
                           xtol=1e-15 * abs(lo), rtol=ROOT_RTOL)


@dataclass(frozen=True)
class InstantSolution:
    E: float
    theta: float
    delta_e: float
    x0: float
    x1: float
    A: float
    note: str = "valid only at E = E_ext(eps)"


def _action_parts(pot: PotentialModel, E: float, dE: float) -> tuple[float, float, float]:
    x0, x1 = matching_points(pot, E, dE)
    return 2 * math.sqrt(2 * pot.mass) * _endpoint_integral(pot, E + dE, x0, x1, 0.5, _c_left(pot, dE)), x0, x1


def action_smooth(pot: PotentialModel, E: float, theta: float) -> InstantSolution:
    """Action at the extremal field for energy ``E`` and signal parameter ``theta``."""
    dE = deltaE_of_theta(pot, E, theta)
    area, x0, x1 = _action_parts(pot, E, dE)
    return InstantSolution(E, theta, dE, x0, x1, area + 2 * theta * dE)


def static_action_smooth(pot: PotentialModel, E: float) -> float:
    x0, x1 = matching_points(pot, E, 0.0)
    return 2 * math.sqrt(2 * pot.mass) * _endpoint_integral(pot, E, x0, x1, 0.5, _c_left(pot, 0.0))


def _energy_probes(pot: PotentialModel, n: int = 90) -> np.ndarray:
    lo, hi = pot.energy_range
    s = pot.scale
    if math.isfinite(lo) and math.isfinite(hi):
        f = np.concatenate([np.geomspace(1e-10, 0.5, n // 2), 1 - np.geomspace(0.5, 1e-10, n // 2)[1:]])
        return lo + (hi - lo) * f
    if math.isfinite(hi):
        return np.sort(hi - s * np.geomspace(1e-10, 1e8, n))
    return lo + s * np.geomspace(1e-12, 1e8, n)


def _static_window(pot: PotentialModel, theta: float) -> float:
    """Energy at which the static traversal time equals ``theta``."""
    probes = _energy_probes(pot)
    ts = []
    for e in probes:
        try:
            ts.append(static_traversal_time(pot, e) - theta)
        except (RootNotFoundError, QuadratureError, DomainError):
            ts.append(np.nan)
    ts = np.array(ts)
    for i in range(len(probes) - 1):
        if ts[i] * ts[i + 1] < 0:
            return optimize.brentq(lambda e: static_traversal_time(pot, e) - theta, probes[i], probes[i + 1],
                                   xtol=1e-15 * max(abs(probes[i]), 1e-300), rtol=ROOT_RTOL)
    raise RootNotFoundError(f"static traversal time never crosses theta={theta}", scan=(probes, ts))


def resonance_energy_smooth(pot: PotentialModel, theta: float, bracket: tuple[float, float] | None = None) -> float:
    """Energy at which the action vanishes for signal parameter ``theta``.

    Without a ``bracket`` the action is scanned over the levels of
    ``pot.energy_range`` and the first sign change is refined.
    """
    A = lambda e: action_smooth(pot, e, theta).A
    if bracket is None:
        for n in (24, 90):  # coarse pass first
            probes = _energy_probes(pot, n)
            vals = []
            for e in probes:
                try:
                    vals.append(A(e))
                except (RootNotFoundError, QuadratureError, DomainError):
                    vals.append(np.nan)
            vals = np.array(vals)
            idx = [i for i in range(len(probes) - 1) if vals[i] * vals[i + 1] < 0]
            if idx:
                break
        else:
            raise RootNotFoundError(f"action has no sign change for theta={theta}", scan=(probes, vals))
        bracket = (probes[idx[0]], probes[idx[0] + 1])
    lo, hi = bracket
    return optimize.brentq(A, lo, hi, xtol=1e-15 * max(abs(lo), abs(hi), 1e-300), rtol=ROOT_RTOL)


def extremal_field(pot: PotentialModel, E: float, theta: float, omega: float) -> float:
    """Pulse amplitude at which the energy gain is extremal."""
    dE = deltaE_of_theta(pot, E, theta)
    return math.sqrt(-2 * pot.mass * dE) / (math.pi * theta) * math.exp(-(omega * theta) ** 2)


def threshold_field(pot: PotentialModel, theta: float, omega: float, E_R: float | None = None) -> float:
    """Extremal field at the resonance energy (exponentially small in ``Omega^2 theta^2``)."""
    if E_R is None:
        E_R = resonance_energy_smooth(pot, theta)
    return extremal_field(pot, E_R, theta, omega)


def extremal_energy(pot: PotentialModel, theta: float, omega: float, eps: float,
                    E_R: float | None = None) -> float:
    """Energy ``E_ext`` where a fixed amplitude ``eps`` is extremal; ``E_R`` above threshold."""
    if E_R is None:
        E_R = resonance_energy_smooth(pot, theta)
    eT = extremal_field(pot, E_R, theta, omega)
    if eps >= eT:
        return E_R
    e_s = _static_window(pot, theta)
    if eps == 0:
        return e_s
    lo = e_s + 1e-12 * (E_R - e_s)
    f = lambda e: extremal_field(pot, e, theta, omega) - eps
    return optimize.brentq(f, lo, E_R, xtol=1e-15 * max(abs(E_R), 1e-300), rtol=ROOT_RTOL)


def kick_from_segment(pot: PotentialModel, E: float, theta: float) -> float:
    """``(m/2) (dx/dtau)^2`` at the end of the free segment.

    This equals ``-dE`` when the well-side matching point is a turning point of ``E``.
    """
    dE = deltaE_of_theta(pot, E, theta)
    x0, _ = matching_points(pot, E, dE)
    return float(_vr(pot, np.array([x0]))[0]) - (E + dE)


def energy_gain_of_field(pot: PotentialModel, E: float, theta: float, omega: float, eps: float,
                         velocity: float | None = None) -> float:
    """Energy gain for amplitude ``eps`` given the segment velocity ``dx/dtau`` at the kick."""
    kick = math.pi * theta * eps * math.exp((omega * theta) ** 2)
    if velocity is None:
        velocity = -math.sqrt(2 * kick_from_segment(pot, E, theta) / pot.mass)
    return kick * velocity + kick ** 2 / (2 * pot.mass)


# -- complex-time trajectories ---------------------------------------------------


@dataclass(frozen=True)
class EuclideanTrajectory:
    t: np.ndarray
    x: np.ndarray
    velocity: np.ndarray  # dx/dt
    energy: np.ndarray  # p^2/2m + V(x)
    work: np.ndarray
    segment: np.ndarray  # 1 free outer, 2 kick loop, 3 free inner
    path: str
    backend: str
    nfev: int


@dataclass(frozen=True)
class EuclideanResult:
    trajectory: EuclideanTrajectory
    start_energy: float
    delta_e: complex  # minus the total work, i.e. start energy minus final energy
    action: float
    kick: complex  # pulse impulse i * int field dt around the loop (momentum units, tau direction)
    momentum_jump: complex  # full change of m dx/dtau across the loop, potential force included
    dx_kick: complex
    x_start: float
    x_ref: float
    vertices: tuple


def _pulse_code(pulse: Pulse | None):
    if pulse is None or pulse.eps == 0:
        return kernels.PULSE_NONE, (0.0, 1.0, 1.0)
    code = {QUARTIC: kernels.PULSE_QUARTIC, LORENTZ: kernels.PULSE_LORENTZ}.get(pulse.shape, kernels.PULSE_ODD)
    return code, (pulse.eps, pulse.omega, pulse.theta)


def contour_vertices(theta: float, omega: float, path: str, tau_end: float | None = None):
    """Vertices of the time contour and the segment tag of each edge.

    ``imaginary`` runs straight up to ``i tau_end``. ``rectangle`` runs up to
    just below the pole at ``i theta``, circles it counterclockwise, then
    goes left at that height and up to the level of the pole far from it.
    """
    if path == "imaginary":
        return [0j, 1j * tau_end], [1]
    w2t = omega ** 2 * theta
    R = 5.0 / w2t
    if R >= theta:
        raise DomainError("Omega^2 theta^2 must exceed 5 for the kick loop to fit below the pole")
    a = rho = 1.0 / (2 * w2t)
    S = 2.0 * theta if tau_end is None else tau_end
    b = 1j * (theta - R)
    verts = [0j, b, a + b, a + 1j * (theta + rho), -a + 1j * (theta + rho), -a + b, b, -S + b, -S + 1j * theta]
    tags = [1, 2, 2, 2, 2, 2, 3, 3]
    return verts, tags


def integrate_euclidean(
    pot: PotentialModel,
    pulse: Pulse | None,
    E: float,
    theta: float | None = None,
    path: str = "auto",
    start_energy: float | None = None,
    tau_end: float | None = None,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    max_step: float = 0.02,
) -> EuclideanResult:
    """Integrate ``m x'' = -V'(x) + field(t)`` along the complex time contour.

    The path starts at ``t = 0`` at rest on the exit point of energy
    ``start_energy`` (default ``E + dE(E, theta)``, or ``E`` without a pulse).
    The action is ``-2 Im int (p^2/2m - V + (x - x0) field + E) dt``; measuring
    the coordinate in the field term from the matching point ``x0`` gives the
    well state its own phase under the pulse.
    """
    driven = pulse is not None and pulse.eps > 0
    if theta is None:
        theta = pulse.theta if pulse is not None else None
    if path == "auto":
        path = "rectangle" if driven and pulse.shape != QUARTIC else "imaginary"
    if start_energy is None:
        start_energy = E + deltaE_of_theta(pot, E, theta) if driven else E
    dE_guess = start_energy - E
    if dE_guess < 0:
        x_ref, x1 = matching_points(pot, E, dE_guess)
    else:
        x_ref, x1 = matching_points(pot, E, 0.0)
    if path == "imaginary":
        if tau_end is None:
            tau_end = static_traversal_time(pot, E) if not driven else theta + 10.0 / (pulse.omega ** 2 * theta)
        verts, tags = contour_vertices(theta or 1.0, 1.0, "imaginary", tau_end)
    else:
        verts, tags = contour_vertices(theta, pulse.omega, "rectangle", tau_end)
    fcode, fparams = _pulse_code(pulse)
    pcode = pot.code
    extra = {}
    if pcode == kernels.POT_CALLABLE:
        extra = {"fV": lambda z: pot.V(z), "fdV": lambda z: pot.dV(z)}
    times, states, segs, nfev = kernels.integrate_polyline(
        verts, [x1, 0j, 0j, 0j, 0j], pot.mass, x_ref, pcode, list(pot.params), fcode, list(fparams),
        rtol=rtol, atol=atol, max_step=max_step, **extra,
    )
    t = np.array(times)
    st = np.array(states)
    x, p, W, L, K = st.T
    with np.errstate(all="ignore"):
        Vx = np.array([complex(pot.V(complex(z))) for z in x]) if pcode == kernels.POT_CALLABLE else \
            np.array([_native_V(pcode, pot.params, z) for z in x])
    energy = p * p / (2 * pot.mass) + Vx
    seg_tag = np.array([tags[s] for s in segs])
    traj = EuclideanTrajectory(t, x, p / pot.mass, energy, W, seg_tag, path, kernels.BACKEND, nfev)
    dt_total = verts[-1] - verts[0]
    action = float(-2 * (L[-1] + E * dt_total).imag)
    if path == "rectangle":
        i_in = segs.index(1) - 1  # state at the loop entry
        i_out = len(segs) - 1 - segs[::-1].index(5)
        kick = 1j * (K[i_out] - K[i_in])
        jump = 1j * (p[i_out] - p[i_in])
        dx = x[i_out] - x[i_in]
    else:
        kick = 1j * (K[-1] - K[0])
        jump = 1j * (p[-1] - p[0])
        dx = 0j
    return EuclideanResult(traj, start_energy, complex(-W[-1]), action, complex(kick), complex(jump),
                           complex(dx), float(x1), float(x_ref), tuple(verts))


def _native_V(code, params, z):
    from ._kernels_py import potential

    return potential(code, params, complex(z))[0]


# -- cross-check against the exactly solvable model ----------------------------------


@dataclass(frozen=True)
class LimitReport:
    A_smooth: float
    A_triangular: float
    E_R_smooth: float
    E_R_triangular: float
    eps_T_smooth: float
    eps_T_triangular: float
    E_ext_smooth: float | None
    E_ext_triangular: float | None
    max_relative_deviation: float


def triangular_limit_check(spec: BarrierSpec, theta: float, omega: float, eps: float | None = None) -> LimitReport:
    """Compare the smooth engine on an exact triangular barrier with the closed forms."""
    from . import triangular as tri

    pot = PotentialModel.from_spec(spec)
    A_s = action_smooth(pot, spec.E, theta).A
    A_t = 2 * (tri.resonance_energy(spec, theta) - spec.E) * theta
    ER_s = resonance_energy_smooth(pot, theta)
    ER_t = tri.resonance_energy(spec, theta)
    eT_s = threshold_field(pot, theta, omega, ER_s)
    eT_t = tri.threshold_field(spec, theta, omega)
    Ee_s = Ee_t = None
    devs = [abs(A_s - A_t) / abs(A_t), abs(ER_s - ER_t) / spec.depth, abs(eT_s - eT_t) / eT_t]
    if eps is not None:
        Ee_s = extremal_energy(pot, theta, omega, eps, ER_s)
        Ee_t = tri.extremal_energy(spec, theta, omega, eps)
        devs.append(abs(Ee_s - Ee_t) / spec.depth)
    return LimitReport(A_s, A_t, ER_s, ER_t, eT_s, eT_t, Ee_s, Ee_t, max(devs))
