"""Unit systems and conversions between lab units and the internal hbar = 1 systems.

Three systems are known:

``lab``
    eV, cm, s and the elementary charge e. Electric fields are quoted in eV/cm,
    i.e. the force on a unit charge, which is numerically the field in V/cm.
``atomic``
    Hartree atomic units (hbar = m_e = e = 1). Masses are multiples of m_e.
``nuclear``
    MeV-based natural units (hbar = c = 1). Time and length are both MeV^-1,
    masses are rest energies in MeV and a field (energy / length) is MeV^2.
    Charge has no independent dimension there (e^2 = alpha).

Electric fields always carry the dimension energy / length with the particle
charge absorbed, so ``E0 * x`` is an energy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DimensionError, InvalidSpecError

# CODATA 2018, exact or to the published digits.
HBAR_EV_S = 6.582119569e-16
ALPHA = 7.2973525693e-3
ELECTRON_MASS_EV = 0.51099895000e6
ALPHA_PARTICLE_MASS_MEV = 3727.3794066
HARTREE_EV = 27.211386245988
BOHR_CM = 5.29177210903e-9
ATOMIC_TIME_S = 2.4188843265857e-17
ATOMIC_FIELD_V_PER_CM = 5.14220674763e9
HBARC_MEV_CM = 197.3269804e-13
ELEMENTARY_CHARGE_C = 1.602176634e-19
SPEED_OF_LIGHT_CM_S = 2.99792458e10

MEV_INV_TO_S = HBAR_EV_S / 1e6
MEV_INV_TO_CM = HBARC_MEV_CM


class Dimension(NamedTuple):
    """Integer exponents of (energy, length, time, charge)."""

    energy: int = 0
    length: int = 0
    time: int = 0
    charge: int = 0

    def __mul__(self, other):  # type: ignore[override]
        return Dimension(*(a + b for a, b in zip(self, other)))

    def __truediv__(self, other):
        return Dimension(*(a - b for a, b in zip(self, other)))

    def __pow__(self, n: int):
        return Dimension(*(a * n for a in self))


DIMENSIONLESS = Dimension()
ENERGY = Dimension(energy=1)
LENGTH = Dimension(length=1)
TIME = Dimension(time=1)
CHARGE = Dimension(charge=1)
FIELD = Dimension(energy=1, length=-1)
MASS = Dimension(energy=1, length=-2, time=2)
VELOCITY = Dimension(length=1, time=-1)
RATE = Dimension(time=-1)


@dataclass(frozen=True)
class UnitSystem:
    name: str
    # lab value (eV, cm, s, e) of one unit of each base dimension
    energy: float
    length: float
    time: float
    charge: float | None

    def scale(self, dim: Dimension) -> float:
        if dim.charge and self.charge is None:
            raise DimensionError(f"system {self.name!r} cannot express charge dimension {dim}")
        out = self.energy ** dim.energy * self.length ** dim.length * self.time ** dim.time
        if dim.charge:
            out *= self.charge ** dim.charge
        return out


LAB = UnitSystem("lab", 1.0, 1.0, 1.0, 1.0)
ATOMIC = UnitSystem("atomic", HARTREE_EV, BOHR_CM, ATOMIC_TIME_S, 1.0)
NUCLEAR = UnitSystem("nuclear", 1e6, MEV_INV_TO_CM, MEV_INV_TO_S, None)
SYSTEMS = {s.name: s for s in (LAB, ATOMIC, NUCLEAR)}


def _system(name_or_system) -> UnitSystem:
    if isinstance(name_or_system, UnitSystem):
        return name_or_system
    try:
        return SYSTEMS[name_or_system]
    except KeyError:
        raise DimensionError(f"unknown unit system {name_or_system!r}") from None


@dataclass(frozen=True)
class Quantity:
    value: float
    dim: Dimension = DIMENSIONLESS
    system: str = "lab"

    def __mul__(self, other):
        if not isinstance(other, Quantity):
            return Quantity(self.value * other, self.dim, self.system)
        other = convert(other, self.system)
        return Quantity(self.value * other.value, self.dim * other.dim, self.system)

    def to(self, system) -> "Quantity":
        return convert(self, system)


def convert(q: Quantity, target) -> Quantity:
    """Re-express ``q`` in the ``target`` unit system, keeping its dimension."""
    src = _system(q.system)
    dst = _system(target)
    if q.value == 0:
        # still validate representability
        dst.scale(q.dim)
        return Quantity(0.0, q.dim, dst.name)
    value = q.value * src.scale(q.dim) / dst.scale(q.dim)
    return Quantity(value, q.dim, dst.name)


def mass_in(system: str, rest_energy_ev: float) -> float:
    """Mass given by its rest energy (eV), expressed in ``system`` units."""
    if system == "atomic":
        return rest_energy_ev / ELECTRON_MASS_EV
    if system == "nuclear":
        return rest_energy_ev / 1e6
    if system == "lab":
        return rest_energy_ev / SPEED_OF_LIGHT_CM_S ** 2
    raise DimensionError(f"unknown unit system {system!r}")


@dataclass(frozen=True)
class LabBarrier:
    """Triangular-barrier problem in lab units.

    ``depth`` is V - E in eV, ``field`` the static field E0 in eV/cm and
    ``mass_ev`` the particle rest energy in eV. ``top`` places the barrier
    top V (eV); only energy differences enter the physics.
    """

    depth: float
    field: float
    mass_ev: float = ELECTRON_MASS_EV
    top: float = 0.0
    system: str | None = None


@dataclass(frozen=True)
class BarrierSpec:
    """Static problem definition in one hbar = 1 system.

    Barrier top ``V`` at x = 0, level ``E``, static field ``E0`` (energy per
    length) and mass ``m``.
    """

    V: float
    E: float
    E0: float
    m: float
    system: str = "atomic"
    extras: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.V > self.E:
            raise InvalidSpecError(f"no barrier: V={self.V} must exceed E={self.E}")
        if not self.E0 > 0:
            raise InvalidSpecError(f"static field must be positive, got {self.E0}")
        if not self.m > 0:
            raise InvalidSpecError(f"mass must be positive, got {self.m}")

    @property
    def depth(self) -> float:
        return self.V - self.E

    def with_energy(self, E: float) -> "BarrierSpec":
        return BarrierSpec(self.V, E, self.E0, self.m, self.system)

    def time_to_seconds(self, t: float) -> float:
        return convert(Quantity(t, TIME, self.system), "lab").value

    def field_to_lab(self, f: float) -> float:
        return convert(Quantity(f, FIELD, self.system), "lab").value

    def energy_to_ev(self, e: float) -> float:
        return convert(Quantity(e, ENERGY, self.system), "lab").value


def choose_system(mass_ev: float) -> str:
    """Atomic units for electron-scale masses, MeV natural units otherwise."""
    return "atomic" if mass_ev < 1e3 * ELECTRON_MASS_EV else "nuclear"


def to_natural(lab: LabBarrier) -> BarrierSpec:
    """Convert a lab-unit triangular barrier to an internal :class:`BarrierSpec`."""
    if not lab.mass_ev > 0:
        raise InvalidSpecError("mass must be positive")
    if not lab.depth > 0:
        raise InvalidSpecError("no barrier: V - E must be positive")
    if not lab.field > 0:
        raise InvalidSpecError("static field must be positive")
    system = lab.system or choose_system(lab.mass_ev)
    depth = convert(Quantity(lab.depth, ENERGY), system).value
    top = convert(Quantity(lab.top, ENERGY), system).value
    E0 = convert(Quantity(lab.field, FIELD), system).value
    return BarrierSpec(V=top, E=top - depth, E0=E0, m=mass_in(system, lab.mass_ev), system=system)


def seconds(t: float, system: str) -> float:
    return convert(Quantity(t, TIME, system), "lab").value


def ev_per_cm(f: float, system: str) -> float:
    return convert(Quantity(f, FIELD, system), "lab").value


def fine_structure_multiple(n: float) -> float:
    """Coulomb strength ``n * alpha`` (e^2 = alpha when hbar = c = 1)."""
    return n * ALPHA

