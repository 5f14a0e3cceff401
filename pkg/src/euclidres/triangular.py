"""Delta well plus triangular barrier driven by a symmetric pulse.

The static potential is ``V - E0 |x|`` with a delta well at the origin holding a
level ``E``. A symmetric pulse enters through its imaginary-time profile
``phi(tau)``; in the instant-signal limit that profile is the step
``tau - lam*theta*H(tau - theta)`` and every quantity here has a closed form.

Actions are the doubled imaginary part of the classical action, so the decay
probability goes as ``exp(-A)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from . import pulses
from .errors import DomainError, NoPhysicalBranchError, RootNotFoundError
from .pulses import Pulse, StepProfile
from .quantities import BarrierSpec

logger = logging.getLogger(__name__)

LAMBDA_T = 1.0 - 1.0 / math.sqrt(3.0)
QUAD_RTOL = 1e-10
SMALL_ACTION = 3.0  # below this exp(-A) is not small
MUCH_LESS = 0.1  # "a << b" is read as a / b <= MUCH_LESS

PRE_KICK = "pre-kick"
JUMP = "jump"
POST_KICK = "post-kick"
STATIC = "static"


def tau00(spec: BarrierSpec) -> float:
    return math.sqrt(2 * spec.m * spec.depth) / spec.E0


def static_action(spec: BarrierSpec) -> float:
    return 4.0 / 3.0 * spec.depth * tau00(spec)


def static_wkb_phase(spec: BarrierSpec, x: float) -> float:
    """``iS(x, 0)`` of the undriven problem (WKB form)."""
    q = 1.0 - x * spec.E0 / spec.depth
    return 2 * tau00(spec) / 3 * spec.depth * (q ** 1.5 - 1.0)


def _scale(spec: BarrierSpec) -> float:
    return spec.E0 ** 2 / spec.m


# -- profile integrals -------------------------------------------------------
# I(tau) = int_0^tau h,  M(tau) = int_0^tau xi h,  J(tau) = int_0^tau I


def _is_zero(profile) -> bool:
    if isinstance(profile, StepProfile):
        return profile.lam == 0
    return profile is None or profile.eps == 0


def _integrals(spec: BarrierSpec, profile, tau: float) -> tuple[float, float, float]:
    if _is_zero(profile):
        return 0.0, 0.0, 0.0
    if isinstance(profile, StepProfile):
        lt = profile.lam * profile.theta
        if tau > profile.theta:
            return -lt, -lt * profile.theta, -lt * (tau - profile.theta)
        return 0.0, 0.0, 0.0
    lam = pulses._lam_quiet(profile, spec.E0)
    I = -lam * profile.theta * pulses.kick_fraction(profile, tau)
    M, _ = integrate.quad(
        lambda xi: xi * pulses.h_imaginary(profile, spec.E0, xi, lam), 0.0, tau,
        points=[profile.theta] if tau > profile.theta else None,
        epsabs=0.0, epsrel=QUAD_RTOL * 1e-2, limit=400,
    )
    return I, M, tau * I - M


def h_at(spec: BarrierSpec, profile, tau: float) -> float:
    """Reduced field on the imaginary axis; undefined at a step's jump."""
    if _is_zero(profile):
        return 0.0
    if isinstance(profile, StepProfile):
        if tau == profile.theta:
            raise DomainError("h is a delta function at the step; use a smoothed pulse")
        return 0.0
    return float(pulses.h_imaginary(profile, spec.E0, tau))


# -- action derivatives -----------------------------------------------------


def map_tau_to_x(spec: BarrierSpec, profile, tau0: float, kick: float | None = None) -> float:
    """Coordinate reached from start time ``i tau0``.

    ``kick`` overrides the accumulated ``int_0^tau0 h`` at a step's jump, where
    an exit on the vertical segment picks up only part of the step.
    """
    if tau0 < 0:
        raise DomainError("tau0 must be non-negative")
    t00 = tau00(spec)
    I, M, _ = _integrals(spec, profile, tau0)
    if kick is not None:
        M = M - tau0 * I + tau0 * kick
    return spec.E0 / (2 * spec.m) * (2 * tau0 * t00 - tau0 ** 2 - 2 * M)


def action_gradient_at_tau(spec: BarrierSpec, profile, tau0: float) -> float:
    """``i dS/dx = E0 [phi(tau0) - tau00]``."""
    return spec.E0 * (pulses.phi(profile, tau0, spec.E0) - tau00(spec))


def tau_of_x(spec: BarrierSpec, profile, x: float, n_scan: int = 400) -> float:
    """Smallest non-negative start time whose coordinate is ``x``."""
    t00 = tau00(spec)
    hi = 2.0 * t00 + (2 * profile.theta if not _is_zero(profile) else 0.0)
    grid = np.linspace(0.0, hi, n_scan)
    vals = [map_tau_to_x(spec, profile, t) - x for t in grid]
    if vals[0] == 0:
        return 0.0
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0:
            return float(a)
        if fa * fb < 0:
            if isinstance(profile, StepProfile) and a <= profile.theta < b:
                # the step map is discontinuous at theta; a sign change there is not a root
                left = map_tau_to_x(spec, profile, profile.theta) - x
                if left * fa <= 0:
                    return optimize.brentq(lambda t: map_tau_to_x(spec, profile, t) - x, a, profile.theta, xtol=1e-14)
                continue
            return optimize.brentq(lambda t: map_tau_to_x(spec, profile, t) - x, a, b, xtol=1e-14, rtol=1e-14)
    raise RootNotFoundError(f"no real tau0 maps to x={x}", scan=(grid, vals))


def action_gradient(spec: BarrierSpec, profile, x: float) -> float:
    return action_gradient_at_tau(spec, profile, tau_of_x(spec, profile, x))


def action_curvature_at_tau(spec: BarrierSpec, profile, tau0: float, h: float | None = None) -> float:
    """``i d^2S/dx^2 = m (1 + h) / (tau00 - tau0 - tau0 h)``.

    ``h`` overrides the reduced field at ``tau0``; by default it is taken
    from ``profile``.
    """
    if h is None:
        h = h_at(spec, profile, tau0)
    den = tau00(spec) - tau0 - tau0 * h
    if den == 0 or abs(den) < 1e-14 * max(tau00(spec), tau0):
        raise DomainError(f"curvature diverges at tau0={tau0} (singular point)")
    return spec.m * (1 + h) / den


def action_curvature(spec: BarrierSpec, profile, x: float) -> float:
    return action_curvature_at_tau(spec, profile, tau_of_x(spec, profile, x))


# -- actions ---------------------------------------------------------------


def action_quadrature(spec: BarrierSpec, profile, tau1: float, phi_end: float | None = None) -> float:
    """Exit action ``(E0^2/m) [tau1 phi(tau1)^2 - int_0^tau1 phi^2]`` by adaptive quadrature.

    ``phi(tau1)`` equals ``tau00`` at every exit, which also fixes its value on
    the vertical segment of a step.
    """
    t00 = tau00(spec)
    end = t00 if phi_end is None else phi_end
    if isinstance(profile, StepProfile) or _is_zero(profile):
        f = lambda t: pulses.phi(profile, t, spec.E0) ** 2
        pts = [profile.theta] if isinstance(profile, StepProfile) and 0 < profile.theta < tau1 else None
    else:
        lam = pulses._lam_quiet(profile, spec.E0)
        f = lambda t: (t - lam * profile.theta * pulses.kick_fraction(profile, t)) ** 2
        pts = [profile.theta] if profile.theta < tau1 else None
    val, err = integrate.quad(f, 0.0, tau1, points=pts, epsabs=0.0, epsrel=QUAD_RTOL * 1e-3, limit=400)
    return _scale(spec) * (tau1 * end ** 2 - val)


def _cube_segment(a: float, b: float, shift: float, level: float) -> tuple[float, float]:
    """Positive and negative parts of ``int_a^b (level - (t - shift)^2) dt``."""
    if b <= a:
        return 0.0, 0.0
    root = shift + math.sqrt(level)
    F = lambda t: level * t - (t - shift) ** 3 / 3.0
    cuts = [a] + [c for c in (root,) if a < c < b] + [b]
    plus = minus = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        part = F(hi) - F(lo)
        mid = 0.5 * (lo + hi)
        if level - (mid - shift) ** 2 >= 0:
            plus += part
        else:
            minus -= part
    return plus, minus


@dataclass(frozen=True)
class Areas:
    q_plus: float
    q_minus: float
    action: float


def action_area(spec: BarrierSpec, step: StepProfile, tau1: float) -> Areas:
    """Exit action from the areas between ``phi^2`` and the line ``tau00^2``.

    ``Q+`` is where the line lies above the curve, ``Q-`` where it lies below;
    both are closed parabola-segment areas.
    """
    level = tau00(spec) ** 2
    th = step.theta
    p1, m1 = _cube_segment(0.0, min(tau1, th), 0.0, level)
    p2, m2 = _cube_segment(th, tau1, step.lam * th, level) if tau1 > th else (0.0, 0.0)
    qp, qm = p1 + p2, m1 + m2
    return Areas(qp, qm, _scale(spec) * (qp - qm))


def resonance_energy(spec: BarrierSpec, theta: float) -> float:
    return spec.V - theta ** 2 * spec.E0 ** 2 / (6 * spec.m)


@dataclass(frozen=True)
class ResonanceParams:
    E_R: float
    lambda_T: float
    E_ext: float
    E_1: float  # V - E_1 = (V - E_2)(1 - lam)^2, lower end of the jump segment
    E_2: float  # V - E_2 = theta^2 E0^2 / 2m, i.e. tau00 = theta


def resonance_params(spec: BarrierSpec, theta: float, lam: float = 0.0) -> ResonanceParams:
    if not theta > 0:
        raise DomainError("theta must be positive")
    E_R = resonance_energy(spec, theta)
    c = theta ** 2 * spec.E0 ** 2 / (6 * spec.m)
    E_ext = E_R - c * (1 + 1 / math.sqrt(3) - lam) * (LAMBDA_T - lam) * (1.0 if lam < LAMBDA_T else 0.0)
    d2 = theta ** 2 * spec.E0 ** 2 / (2 * spec.m)
    return ResonanceParams(E_R, LAMBDA_T, E_ext, spec.V - d2 * (1 - lam) ** 2, spec.V - d2)


def extremal_field(spec: BarrierSpec, theta: float, omega: float) -> float:
    """Pulse amplitude extremizing the energy gain at level ``spec.E``."""
    q = 1.0 - 2 * spec.m * spec.depth / (theta * spec.E0) ** 2
    if q < 0:
        raise DomainError("theta below the static under-barrier time: no extremal field")
    return spec.E0 / math.pi * math.sqrt(q) * math.exp(-(omega * theta) ** 2)


def threshold_field(spec: BarrierSpec, theta: float, omega: float) -> float:
    """Extremal field at the resonance energy."""
    return spec.E0 * math.sqrt(2.0 / 3.0) / math.pi * math.exp(-(omega * theta) ** 2)


def extremal_energy(spec: BarrierSpec, theta: float, omega: float, eps: float) -> float:
    """Energy where a smooth-barrier pulse of amplitude ``eps`` is extremal."""
    E_R = resonance_energy(spec, theta)
    if eps >= threshold_field(spec, theta, omega):
        return E_R
    k = math.pi * eps / spec.E0 * math.exp((omega * theta) ** 2)
    return E_R - theta ** 2 * spec.E0 ** 2 / (2 * spec.m) * (2.0 / 3.0 - k * k)


def resonance_theta(spec: BarrierSpec) -> float:
    return math.sqrt(6 * spec.m * spec.depth) / spec.E0


def action_closed(spec: BarrierSpec, step: StepProfile) -> float:
    """Jump-branch action ``2 (E_R - E) theta``."""
    t00, th = tau00(spec), step.theta
    if not (1 - step.lam) * th <= t00 <= th:
        raise DomainError("no jump branch: need (1 - lam) theta <= tau00 <= theta")
    rp = resonance_params(spec, th, step.lam)
    if spec.E > rp.E_ext and not math.isclose(spec.E, rp.E_ext, rel_tol=1e-12, abs_tol=1e-15):
        raise DomainError(f"E={spec.E} above E_ext={rp.E_ext}: the particle does not exit")
    return 2 * (rp.E_R - spec.E) * th


# -- branches ----------------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    tau1: float
    kind: str
    action: float
    delta_e: float
    x1: float
    stable: bool
    physical: bool


@dataclass(frozen=True)
class BranchSet:
    branches: tuple[Branch, ...]
    tau2: float | None
    selected: int | None

    @property
    def best(self) -> Branch:
        if self.selected is None:
            raise NoPhysicalBranchError("no physical exit branch; decay is static", self.branches)
        return self.branches[self.selected]


def _step_double_integral(step: StepProfile, tau1: float) -> float:
    return -step.lam * step.theta * max(tau1 - step.theta, 0.0)


def _branch(spec: BarrierSpec, step: StepProfile, tau1: float, kind: str) -> Branch:
    t00 = tau00(spec)
    A = action_quadrature(spec, step, tau1) if kind != STATIC else static_action(spec)
    J = _step_double_integral(step, tau1)
    dE = spec.depth / t00 ** 2 * (t00 ** 2 - tau1 ** 2 - 2 * J)
    x1 = (spec.depth - dE) / spec.E0
    # sign of the curvature in the instant limit: growing |h| before the jump
    # makes it positive, the steep jump and the decaying tail make it negative
    stable = kind != PRE_KICK
    # round-off allowance so that the resonance itself (A = 0, E = E_R) counts
    tol = 1e-12
    physical = stable and A >= -tol * static_action(spec)
    if kind == JUMP:
        E_ext = resonance_params(spec, step.theta, step.lam).E_ext
        physical = physical and spec.E <= E_ext + tol * spec.depth
    elif kind == POST_KICK:
        # beside a jump segment this root sits past the singular point and is not reached
        physical = physical and t00 >= step.theta
    return Branch(tau1, kind, A, dE, x1, stable, physical)


def solve_branches(spec: BarrierSpec, step: StepProfile) -> BranchSet:
    """Enumerate the exit times of the step profile and pick the physical one."""
    t00, th, lam = tau00(spec), step.theta, step.lam
    found: list[Branch] = []
    if lam == 0:
        found.append(_branch(spec, step, t00, STATIC))
    else:
        if t00 <= th:
            found.append(_branch(spec, step, t00, PRE_KICK))
        if (1 - lam) * th <= t00 <= th:
            found.append(_branch(spec, step, th, JUMP))
        if t00 >= (1 - lam) * th:
            found.append(_branch(spec, step, t00 + lam * th, POST_KICK))
    phys = [i for i, b in enumerate(found) if b.physical]
    sel = min(phys, key=lambda i: found[i].action) if phys else None
    tau2 = th if any(b.kind == JUMP for b in found) else None
    return BranchSet(tuple(found), tau2, sel)


def classify_smoothed(spec: BarrierSpec, pulse: Pulse, n_scan: int = 4000) -> list[tuple[float, str, float]]:
    """Exit times of a smooth quartic-Gaussian pulse with the curvature at each.

    Returns ``(tau1, kind, curvature)``; negative curvature marks a stable exit.
    """
    t00 = tau00(spec)
    lam = pulses._lam_quiet(pulse, spec.E0)
    th = pulse.theta
    hi = t00 + lam * th + 10.0 / (pulse.omega ** 2 * th) + th
    grid = np.linspace(0.0, hi, n_scan)
    # cumulative trapezoid is only for bracketing; roots are polished with quad-based phi
    g = pulses._quartic_shape(pulse, grid)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(grid))])
    f = grid - lam * th * cum - t00
    out = []
    for i in np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]:
        a, b = grid[i], grid[i + 1]
        fun = lambda t: pulses.phi(pulse, t, spec.E0) - t00
        fa, fb = fun(a), fun(b)
        if fa * fb > 0:
            continue
        r = optimize.brentq(fun, a, b, xtol=1e-12 * th, rtol=1e-15)
        h = float(pulses.h_imaginary(pulse, spec.E0, r, lam))
        kind = JUMP if 1 + h < 0 else (PRE_KICK if r < th else POST_KICK)
        curv = spec.m * (1 + h) / (t00 - r - r * h)
        out.append((r, kind, curv))
    return out


def singular_time(spec: BarrierSpec, pulse: Pulse) -> float | None:
    """First root past the peak of ``tau00 - tau - tau h(tau) = 0`` for a smooth pulse."""
    t00 = tau00(spec)
    lam = pulses._lam_quiet(pulse, spec.E0)
    g = lambda t: t00 - t - t * float(pulses.h_imaginary(pulse, spec.E0, t, lam))
    th = pulse.theta
    grid = np.linspace(th, th + 10.0 / (pulse.omega ** 2 * th), 2000)
    vals = np.array([g(t) for t in grid])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if not len(idx):
        return None
    i = idx[0]
    return optimize.brentq(g, grid[i], grid[i + 1], xtol=1e-13)


def energy_gain(spec: BarrierSpec, step: StepProfile, branch: Branch) -> tuple[float, float]:
    """Energy gain on ``branch`` and the exit energy ``E + dE``."""
    t00 = tau00(spec)
    J = _step_double_integral(step, branch.tau1)
    dE = spec.depth / t00 ** 2 * (t00 ** 2 - branch.tau1 ** 2 - 2 * J)
    return dE, spec.E + dE


def exit_point(spec: BarrierSpec, step: StepProfile, branch: Branch) -> float:
    """Exit coordinate from the start-time map, with a partial step on the jump."""
    kick = tau00(spec) - branch.tau1 if branch.kind == JUMP else None
    return map_tau_to_x(spec, step, branch.tau1, kick=kick)


def action_decomposition_check(spec: BarrierSpec, step: StepProfile, branch: Branch) -> float:
    """Residual of ``A = A0(E + dE) + 2 theta dE`` on an instant-signal branch."""
    dE, _ = energy_gain(spec, step, branch)
    if branch.kind == STATIC:
        return branch.action - static_action(spec)
    shifted = spec.with_energy(spec.E + dE)
    return branch.action - (static_action(shifted) + 2 * step.theta * dE)


def exit_packet_duration(spec: BarrierSpec, theta: float) -> float:
    """Duration of the exit wave packet at the resonance branch."""
    v_er = spec.V - resonance_energy(spec, theta)
    return theta * (4.0 / (3.0 * v_er * theta)) ** 0.25


def exit_packet_duration_from_curvature(spec: BarrierSpec, curvature: float) -> float:
    return (spec.E0 ** 2 / (8 * spec.m ** 2) * abs(curvature)) ** -0.25


def sigma1(spec: BarrierSpec, h1: float, tau1: float) -> float:
    """First non-semiclassical correction ``i sigma_1`` at the exit point."""
    arg = 1.0 - tau1 / tau00(spec) * (1.0 + h1)
    if arg <= 0:
        raise DomainError("sigma_1 diverges: exit at a Stokes point")
    return -math.log(math.sqrt(arg)) - 0.5


def probability_vs_theta(spec: BarrierSpec, theta: float) -> float:
    """Exponent ``-ln W`` as a function of the signal parameter (exponential accuracy)."""
    A0 = static_action(spec)
    tR = resonance_theta(spec)
    if theta > tR:
        return A0
    return 3 * math.sqrt(3) * A0 * (tR - theta) / tR


def exponent_vs_energy(spec: BarrierSpec, theta: float, lam: float) -> float:
    """``-ln W`` from ``min{A0, 2(E_R - E) theta H(E_ext - E)}``."""
    A0 = static_action(spec)
    rp = resonance_params(spec, theta, lam)
    if spec.E <= rp.E_ext:
        return min(A0, 2 * (rp.E_R - spec.E) * theta)
    return A0


@dataclass(frozen=True)
class ValidityCheck:
    ok: bool
    triangular_ratio: float
    smooth_ratio: float


def semiclassical_check(spec: BarrierSpec, omega: float, theta: float) -> ValidityCheck:
    """Semiclassical margins for the instant signal; ``<<`` read as ratio <= 0.1."""
    w2t2 = (omega * theta) ** 2
    scale = spec.depth * theta
    smooth = w2t2 / scale
    t00 = tau00(spec)
    if w2t2 > 1 and theta != t00:
        tri = abs(t00 / (theta - t00)) * w2t2 ** 2 * math.log(w2t2) / scale
    else:
        tri = 0.0 if w2t2 <= 1 else math.inf
    return ValidityCheck(smooth <= MUCH_LESS, tri, smooth)


def trajectory_triangular(spec: BarrierSpec, step: StepProfile, tau, branch: Branch):
    """Euclidean path ``x(tau)`` from the exit point (tau = 0) to the well (tau = tau1)."""
    tau = np.asarray(tau, dtype=float)
    t1 = branch.tau1
    th = step.theta
    lt = step.lam * th
    if branch.kind in (POST_KICK,):
        tail = -lt * (t1 - np.maximum(tau, th))
    else:
        tail = np.zeros_like(tau)
    x = spec.E0 / (2 * spec.m) * (t1 ** 2 - tau ** 2 + 2 * tail)
    return x[()] if x.ndim == 0 else x


def trajectory_velocity(spec: BarrierSpec, step: StepProfile, tau, branch: Branch):
    """``dx/dtau``; at ``tau = tau1`` the exit value of the partial kick is used."""
    tau = np.asarray(tau, dtype=float)
    t00 = tau00(spec)
    I = np.where(tau > step.theta, -step.lam * step.theta, 0.0)
    I = np.where(np.isclose(tau, branch.tau1, rtol=0, atol=1e-15), t00 - branch.tau1, I)
    v = -spec.E0 / spec.m * (tau + I)
    return v[()] if v.ndim == 0 else v


@dataclass(frozen=True)
class DecayResult:
    A: float
    A0: float
    delta_e: float
    exit_energy: float
    delta_t: float
    sigma1: float | None
    W_exponent: float
    prefactor: float | None
    branches: BranchSet
    flags: tuple[str, ...] = field(default=())


def decay(spec: BarrierSpec, step: StepProfile) -> DecayResult:
    """Selected-branch summary; falls back to the static decay when nothing exits."""
    A0 = static_action(spec)
    bs = solve_branches(spec, step)
    flags = []
    if bs.selected is None:
        flags.append("no physical branch: static decay only")
        return DecayResult(A0, A0, 0.0, spec.E, math.nan, None, -A0, None, bs, tuple(flags))
    b = bs.best
    dE, e_exit = energy_gain(spec, step, b)
    A = b.action
    if min(A, A0) < SMALL_ACTION:
        flags.append("semiclassical exponent not small")
    dt = exit_packet_duration(spec, step.theta) if b.kind != STATIC else math.nan
    return DecayResult(A, A0, dE, e_exit, dt, None, -min(A0, A), None, bs, tuple(flags))


@dataclass(frozen=True)
class EscapeProbability:
    W: float
    static_term: float
    resonant_term: float
    A: float
    A0: float
    tau1_smooth: float | None
    h1: float | None
    sigma1: float | None
    exponent_energy: float
    exponent_theta: float
    flags: tuple[str, ...]


def escape_probability(spec: BarrierSpec, pulse: Pulse, t: float, x_det: float) -> EscapeProbability:
    """Probability to find the particle outside the barrier at time ``t``.

    The exponent comes from the step limit of ``pulse``; the prefactor uses
    ``h`` of the smooth pulse at the matching exit root.
    """
    A0 = static_action(spec)
    static = t * spec.depth * math.exp(-A0)
    flags: list[str] = []
    lam = pulses._lam_quiet(pulse, spec.E0) if pulse.eps > 0 else 0.0
    step = StepProfile(lam, pulse.theta)
    e_theta = probability_vs_theta(spec, pulse.theta)
    e_energy = exponent_vs_energy(spec, pulse.theta, lam)
    bs = solve_branches(spec, step)
    if lam == 0 or bs.selected is None or bs.best.kind == STATIC:
        return EscapeProbability(static, static, 0.0, A0, A0, None, None, None, e_energy, e_theta, ("static only",))
    b = bs.best
    A = b.action
    if A < SMALL_ACTION:
        flags.append("semiclassical exponent not small")
    roots = [r for r in classify_smoothed(spec, pulse) if r[1] == b.kind]
    if not roots:
        flags.append("smoothed pulse has no matching exit root; prefactor unavailable")
        return EscapeProbability(math.nan, static, math.nan, A, A0, None, None, None, e_energy, e_theta, tuple(flags))
    tau1 = min(roots, key=lambda r: abs(r[0] - b.tau1))[0]
    h1 = h_at(spec, pulse, tau1)
    t00 = tau00(spec)
    arrival = math.sqrt(max(2 * spec.m / spec.E0 * (x_det - b.x1), 0.0))
    gate = 1.0 if t > arrival else 0.0
    prod = (tau1 * h1 + tau1 - t00) * (1 + h1)
    if prod <= 0:
        flags.append("unstable exit at the smoothed root")
        res = math.nan
    else:
        res = 4 / math.e * spec.depth * math.sqrt(2 * math.pi * spec.m) / spec.E0 * math.exp(-A) / math.sqrt(prod) * gate
    try:
        s1 = sigma1(spec, h1, tau1)
    except DomainError:
        s1 = None
    return EscapeProbability(static + res, static, res, A, A0, tau1, h1, s1, e_energy, e_theta, tuple(flags))
