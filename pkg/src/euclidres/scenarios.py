"""Application calculators: alpha decay, hydrogen ionization, field emission
from a metal, the over-barrier competitor and the friction bound.

Every report carries lab-unit values next to the convention used to obtain
them. Where a published estimate and a recomputed value differ, both are kept
as a :class:`Dual` so that neither is adopted silently.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from scipy import optimize

from .errors import InvalidSpecError
from .quantities import (
    ALPHA,
    ALPHA_PARTICLE_MASS_MEV,
    BOHR_CM,
    ELEMENTARY_CHARGE_C,
    ELECTRON_MASS_EV,
    HBAR_EV_S,
    SPEED_OF_LIGHT_CM_S,
    BarrierSpec,
    LabBarrier,
    ev_per_cm,
    seconds,
    to_natural,
)
from . import triangular as tri

MUCH_LESS = tri.MUCH_LESS
SMALL_ACTION = tri.SMALL_ACTION

# Published figures quoted next to recomputed ones.
PUBLISHED = {
    "hydrogen": {"A0": 76.0, "theta_R_s": 1e-14, "delta_t_over_theta": 0.28, "eps_T_ev_cm": 1.5},
    "nd144": {"A0": 177.0, "theta_R_s": 0.8e-19, "eps_T_ev_cm": 1e9},
    "soft-alpha": {"A0": 1.3e4, "theta_R_s": 1e-14, "eps_T_ev_cm": 20.0},
    "metal": {"current_A_cm2": 1e8},
}

CHARGE_PER_UNIT = "per unit charge"
CHARGE_ALPHA = "alpha charge 2e"


@dataclass(frozen=True)
class Dual:
    """A published estimate next to the value recomputed here."""

    paper_value: float | None
    computed_value: float

    @property
    def ratio(self) -> float | None:
        if self.paper_value in (None, 0):
            return None
        return self.computed_value / self.paper_value


@dataclass
class ScenarioReport:
    """Resonance parameters of one physical setting, in lab units.

    Times are in seconds, energies in eV and fields in eV/cm. ``conventions``
    records how each lab value was obtained.
    """

    name: str
    theta_R_s: Dual
    A0: Dual
    A: float
    exit_energy_ev: float
    exit_ratio: float
    delta_t_s: Dual | None
    eps_T_ev_cm: Dual
    W_exponent: float
    flags: dict = field(default_factory=dict)
    conventions: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# alpha decay in a Coulomb tail beta / x


@dataclass(frozen=True)
class AlphaSpec:
    """Alpha particle of energy ``E`` (MeV) and mass ``m`` (MeV) in ``beta / x``.

    ``beta`` is dimensionless (hbar = c = 1), e.g. ``2 Z_daughter alpha``.
    ``charge`` is the particle charge in units of e, used only when a field is
    quoted for the physical particle instead of per unit charge.
    """

    beta: float
    E: float
    m: float = ALPHA_PARTICLE_MASS_MEV
    omega2theta2: float = 15.0
    charge: float = 2.0

    def __post_init__(self):
        for name in ("beta", "E", "m"):
            if not getattr(self, name) > 0:
                raise InvalidSpecError(f"{name} must be positive, got {getattr(self, name)}")
        if self.omega2theta2 < 0:
            raise InvalidSpecError("omega2theta2 must be non-negative")


def nd144() -> AlphaSpec:
    """Nd-144 to Ce-140: daughter charge 58, E = 1.9 MeV."""
    return AlphaSpec(beta=2 * 58 * ALPHA, E=1.9, omega2theta2=15.0)


def soft_alpha(E_mev: float = 1e-3, omega2theta2: float = 18.0) -> AlphaSpec:
    """Hypothetical keV-scale emitter with the Nd-144 Coulomb strength."""
    return AlphaSpec(beta=2 * 58 * ALPHA, E=E_mev, omega2theta2=omega2theta2)


def alpha_static_action(s: AlphaSpec) -> float:
    """Gamow exponent ``pi beta sqrt(2m/E)`` for a point nucleus."""
    return math.pi * s.beta * math.sqrt(2 * s.m / s.E)


def alpha_theta(s: AlphaSpec, exit_energy: float) -> float:
    """Pulse time that lets the particle leave at ``exit_energy`` (inner point at 0)."""
    return 0.25 * math.pi * s.beta * math.sqrt(2 * s.m) / exit_energy ** 1.5


def alpha_exit_energy(s: AlphaSpec, theta: float) -> float:
    """Inverse of :func:`alpha_theta`."""
    return (0.25 * math.pi * s.beta * math.sqrt(2 * s.m) / theta) ** (2.0 / 3.0)


def alpha_action(s: AlphaSpec, theta: float) -> float:
    """Action at pulse time ``theta`` in closed form."""
    return (3 * math.pi * s.beta * math.sqrt(3 * s.m * theta)) ** (2.0 / 3.0) - 2 * theta * s.E


@dataclass(frozen=True)
class AlphaResonance:
    theta_R: float  # MeV^-1
    exit_energy: float  # MeV
    exit_ratio: float


def alpha_resonance(s: AlphaSpec) -> AlphaResonance:
    """Resonant pulse time and the exit energy it implies."""
    theta_R = math.pi * s.beta * math.sqrt(27 * s.m / (8 * s.E ** 3))
    e_exit = alpha_exit_energy(s, theta_R)
    return AlphaResonance(theta_R, e_exit, e_exit / s.E)


def alpha_rate(s: AlphaSpec, theta: float) -> float:
    """Exponent ``-ln W``; linear in the detuning below ``theta_R``, static above."""
    A0 = alpha_static_action(s)
    tR = alpha_resonance(s).theta_R
    if theta > tR:
        return A0
    return math.sqrt(3) * A0 * (tR - theta) / tR


@dataclass(frozen=True)
class AlphaThreshold:
    natural: float  # MeV^2, per unit charge
    per_unit_charge: float  # eV/cm
    physical_charge: float  # eV/cm, field acting on a particle of charge ``charge`` e


def alpha_threshold(s: AlphaSpec, omega2theta2: float | None = None) -> AlphaThreshold:
    """Threshold signal amplitude, reported in both charge conventions.

    The closed form gives the force per unit charge. Dividing by the particle
    charge gives the electric field that exerts the same force on the alpha.
    """
    w2t2 = s.omega2theta2 if omega2theta2 is None else omega2theta2
    nat = 4 * math.sqrt(2) / (9 * math.pi ** 2) * s.E ** 2 / s.beta * math.exp(-w2t2)
    lab = ev_per_cm(nat, "nuclear")
    return AlphaThreshold(nat, lab, lab / s.charge)


def alpha_report(s: AlphaSpec, theta: float | None = None, name: str = "alpha",
                 published: dict | None = None) -> ScenarioReport:
    pub = published if published is not None else PUBLISHED.get(name, {})
    res = alpha_resonance(s)
    th = res.theta_R if theta is None else theta
    A0 = alpha_static_action(s)
    A = alpha_action(s, th) if th <= res.theta_R else A0
    thr = alpha_threshold(s)
    return ScenarioReport(
        name=name,
        theta_R_s=Dual(pub.get("theta_R_s"), seconds(res.theta_R, "nuclear")),
        A0=Dual(pub.get("A0"), A0),
        A=A,
        exit_energy_ev=res.exit_energy * 1e6,
        exit_ratio=res.exit_ratio,
        delta_t_s=None,
        eps_T_ev_cm=Dual(pub.get("eps_T_ev_cm"), thr.per_unit_charge),
        W_exponent=alpha_rate(s, th),
        flags={
            "static_action_large": A0 >= SMALL_ACTION,
            "below_resonance": th <= res.theta_R,
        },
        conventions={
            "units": "nuclear (hbar = c = 1, MeV)",
            "eps_T": CHARGE_PER_UNIT,
            "inner_matching_point": "x0 = 0",
        },
        extras={
            "beta": s.beta,
            "E_mev": s.E,
            "m_mev": s.m,
            "omega2theta2": s.omega2theta2,
            "theta_s": seconds(th, "nuclear"),
            "eps_T_alpha_charge_ev_cm": thr.physical_charge,
            "eps_T_conventions": {CHARGE_PER_UNIT: thr.per_unit_charge, CHARGE_ALPHA: thr.physical_charge},
            "theta_accuracy": 1.0 / (math.sqrt(3) * A0),
        },
    )


# ---------------------------------------------------------------------------
# hydrogen ionization in a static field


HYDROGEN_DEPTH_EV = 13.6


def hydrogen_spec(field_ev_cm: float, depth_ev: float = HYDROGEN_DEPTH_EV) -> BarrierSpec:
    return to_natural(LabBarrier(depth=depth_ev, field=field_ev_cm, mass_ev=ELECTRON_MASS_EV, system="atomic"))


def _triangular_resonance(spec: BarrierSpec, theta: float):
    """Jump branch of a step pulse strong enough to reach ``E_R``."""
    lam = 0.5 * (1.0 + tri.LAMBDA_T)
    step = tri.StepProfile(lam, theta)
    return step, tri.decay(spec, step)


def hydrogen_report(field_ev_cm: float, omega2theta2: float = 15.0, theta: float | None = None,
                    depth_ev: float = HYDROGEN_DEPTH_EV, gamma: float | None = None) -> ScenarioReport:
    """Ionization of a level ``depth_ev`` below the barrier top in a field ``field_ev_cm``.

    ``theta`` (atomic units) defaults to the resonant value. ``gamma`` is an
    optional friction rate (atomic units) for the dissipation flag.
    """
    if not field_ev_cm > 0:
        raise InvalidSpecError("field must be positive")
    spec = hydrogen_spec(field_ev_cm, depth_ev)
    tR = tri.resonance_theta(spec)
    th = tR if theta is None else theta
    A0 = tri.static_action(spec)
    omega = math.sqrt(omega2theta2) / th
    eps_T = tri.threshold_field(spec, th, omega)
    dt = tri.exit_packet_duration(spec, th)
    step, res = _triangular_resonance(spec, th)
    x1 = tri.exit_point(spec, step, res.branches.best)
    pub = PUBLISHED["hydrogen"]
    valid = tri.semiclassical_check(spec, omega, th)
    flags = {
        "semiclassical": valid.ok,
        "semiclassical_ratio": valid.smooth_ratio,
        "static_action_large": A0 >= SMALL_ACTION,
    }
    if gamma is not None:
        d = dissipation_bound(th, gamma, omega2theta2, spec.depth)
        flags["dissipation"] = d.ok
        flags["dissipation_margin"] = d.margin
    return ScenarioReport(
        name="hydrogen",
        theta_R_s=Dual(pub["theta_R_s"], spec.time_to_seconds(tR)),
        A0=Dual(pub["A0"], A0),
        A=res.A,
        exit_energy_ev=spec.energy_to_ev(res.exit_energy - spec.V),
        exit_ratio=(spec.V - res.exit_energy) / spec.depth,
        delta_t_s=Dual(pub["delta_t_over_theta"] * spec.time_to_seconds(th), spec.time_to_seconds(dt)),
        eps_T_ev_cm=Dual(pub["eps_T_ev_cm"], spec.field_to_lab(eps_T)),
        W_exponent=tri.probability_vs_theta(spec, th),
        flags=flags,
        conventions={
            "units": "atomic",
            "eps_T": CHARGE_PER_UNIT,
            "energies": "relative to the barrier top",
            "inner_matching_point": "x0 = 0",
        },
        extras={
            "field_ev_cm": field_ev_cm,
            "depth_ev": depth_ev,
            "omega2theta2": omega2theta2,
            "theta_s": spec.time_to_seconds(th),
            "delta_t_over_theta": dt / th,
            "omega_inv_s": spec.time_to_seconds(1.0 / omega),
            "exit_point_cm": x1 * BOHR_CM,
            "branch": res.branches.best.kind,
            "theta_accuracy": 1.0 / A0,
            "decay_time_s": spec.time_to_seconds(math.exp(A0) / spec.depth) if A0 < 700 else math.inf,
        },
    )


# ---------------------------------------------------------------------------
# field emission from a metal surface


COPPER_DENSITY_CM3 = 8.47e22
COPPER_FERMI_VELOCITY_CM_S = 1.57e8


@dataclass(frozen=True)
class MetalEmission:
    """Order-of-magnitude current estimate; not a rate calculation."""

    current_A_cm2: Dual
    current_conductivity_form_A_cm2: float
    conductivity_S_cm: float
    A0: float
    theta_R_s: float
    period_ok: bool
    label: str = "estimate"

    def to_dict(self) -> dict:
        return asdict(self)


def metal_emission_report(work_function_ev: float, field_ev_cm: float, period_s: float,
                          density_cm3: float = COPPER_DENSITY_CM3,
                          fermi_velocity_cm_s: float = COPPER_FERMI_VELOCITY_CM_S) -> MetalEmission:
    """Steady current from a surface driven by a pulse train of period ``period_s``.

    The level sits ``work_function_ev`` below the barrier top. The electron
    density and Fermi velocity default to copper.
    """
    spec = hydrogen_spec(field_ev_cm, work_function_ev)
    A0 = tri.static_action(spec)
    j = ELEMENTARY_CHARGE_C * density_cm3 * fermi_velocity_cm_s / A0
    # sigma ~ e^2 n / (m (V - E)) carries one hbar when written in lab units
    m_lab = ELECTRON_MASS_EV / SPEED_OF_LIGHT_CM_S ** 2  # eV s^2 / cm^2
    sigma_over_e = density_cm3 * HBAR_EV_S / (m_lab * work_function_ev)  # 1 / (cm s (V/cm))
    j_sigma = ELEMENTARY_CHARGE_C * sigma_over_e * field_ev_cm
    tR = spec.time_to_seconds(tri.resonance_theta(spec))
    return MetalEmission(
        current_A_cm2=Dual(PUBLISHED["metal"]["current_A_cm2"], j),
        current_conductivity_form_A_cm2=j_sigma,
        conductivity_S_cm=ELEMENTARY_CHARGE_C * sigma_over_e,
        A0=A0,
        theta_R_s=tR,
        period_ok=period_s >= tR,
    )


# ---------------------------------------------------------------------------
# over-barrier escape and friction


@dataclass(frozen=True)
class OverBarrier:
    pole_exponent: float
    saddle_exponent: float
    omega_opt: float
    minimum: float
    resonance_action: float
    tunneling_wins: bool


def saddle_exponent(depth: float, omega2: float, theta: float, omega: float) -> float:
    """Second exponent: ``2 (V - E) (w / 4 Omega^2 + Omega^2 theta^2 / w)``."""
    if not omega > 0:
        raise InvalidSpecError("frequency must be positive")
    return 2 * depth * (omega / (4 * omega2) + omega2 * theta ** 2 / omega)


def overbarrier_exponent(spec: BarrierSpec, theta: float, Omega: float, omega: float) -> OverBarrier:
    """Exponents of multi-quantum escape to the barrier top with amplitude ``~ exp(-Omega^2 theta^2)``.

    Returns both terms at frequency ``omega``, the optimal frequency, the
    minimum over frequency and the resonant tunneling action it competes with.
    """
    depth = spec.depth
    omega2 = Omega ** 2
    pole = 2 * theta * depth
    saddle = saddle_exponent(depth, omega2, theta, omega)
    w_opt = 2 * omega2 * theta
    minimum = min(pole, saddle_exponent(depth, omega2, theta, w_opt))
    E_R = tri.resonance_energy(spec, theta)
    # the resonance itself (E_R = E up to round-off) still counts as reached
    reached = E_R >= spec.E - 1e-12 * spec.depth
    A_res = max(2 * (E_R - spec.E) * theta, 0.0) if reached else tri.static_action(spec)
    return OverBarrier(pole, saddle, w_opt, minimum, A_res, A_res < minimum)


def overbarrier_optimum_search(spec: BarrierSpec, theta: float, Omega: float) -> float:
    """Locate the optimal frequency numerically by golden-section search."""
    omega2 = Omega ** 2
    guess = 2 * omega2 * theta
    res = optimize.minimize_scalar(
        lambda w: saddle_exponent(spec.depth, omega2, theta, w) / spec.depth,
        bracket=(0.1 * guess, guess * 0.9, 10 * guess),
        method="golden",
        tol=1e-12,
    )
    return float(res.x)


@dataclass(frozen=True)
class DissipationCheck:
    ok: bool
    margin: float  # gamma_c / gamma
    gamma_c: float
    signal_ratio: float | None  # Omega^2 theta^2 / ((V - E) theta)
    friction_ratio: float  # ((V - E) theta) / ((V - E) / gamma) = gamma theta
    chain_ok: bool | None
    note: str = "critical friction ~ 1/theta taken as equal to 1/theta"

    def to_dict(self) -> dict:
        return asdict(self)


def dissipation_bound(theta: float, gamma: float, omega2theta2: float | None = None,
                      depth: float | None = None) -> DissipationCheck:
    """Friction bound on the resonance; ``ok`` iff ``gamma < 1/theta``.

    With ``omega2theta2`` and ``depth`` given, the chain
    ``Omega^2 theta^2 << (V - E) theta <~ (V - E) / gamma`` is also checked,
    reading ``<<`` as a ratio of at most 0.1.
    """
    if gamma < 0:
        raise InvalidSpecError("friction must be non-negative")
    if not theta > 0:
        raise InvalidSpecError("theta must be positive")
    gc = 1.0 / theta
    ok = gamma < gc
    margin = math.inf if gamma == 0 else gc / gamma
    friction_ratio = gamma * theta
    signal_ratio = None
    chain = None
    if omega2theta2 is not None and depth is not None:
        signal_ratio = omega2theta2 / (depth * theta)
        chain = signal_ratio <= MUCH_LESS and friction_ratio <= 1.0
    return DissipationCheck(ok, margin, gc, signal_ratio, friction_ratio, chain)
