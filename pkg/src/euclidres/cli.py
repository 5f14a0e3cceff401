"""Command-line front end.

Inputs come from a ``key = value`` config file (``--config``), scenario
presets and command-line flags, in increasing order of precedence. Numbers may
carry a unit suffix (``13.6 eV``, ``2e7 eV/cm``, ``10 fs``); bare numbers are
read in the internal unit system (``system = atomic`` or ``nuclear``).

Exit codes: 0 success, 2 invalid configuration, 3 solver failure, 4 a
validity check failed under ``--strict``. Errors are also written to stderr as
one line of JSON.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, is_dataclass

import numpy as np

from . import __version__, pulses, scenarios, smooth
from . import triangular as tri
from .errors import (
    DomainError,
    EuclidresError,
    IntegrationError,
    InvalidSpecError,
    NoPhysicalBranchError,
    QuadratureError,
    RootNotFoundError,
)
from .quantities import (
    ALPHA,
    ENERGY,
    FIELD,
    LENGTH,
    RATE,
    TIME,
    BarrierSpec,
    Quantity,
    convert,
    mass_in,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_STRICT = 4

COMMANDS = ("resonance", "sweep", "trajectory", "pulse", "scenario", "check")
SCENARIOS = ("hydrogen", "metal", "alpha", "soft-alpha", "custom-smooth")
MODELS = ("triangular", "coulomb", "cubic", "tabulated")
SWEEP_VARIABLES = ("E", "theta", "lam", "eps")
MAX_POINTS = 10 ** 6
FLOAT_FMT = ".17g"

# unit suffix -> (dimension, factor to lab units eV / cm / s)
UNITS = {
    "ev": (ENERGY, 1.0),
    "kev": (ENERGY, 1e3),
    "mev": (ENERGY, 1e6),
    "ev/cm": (FIELD, 1.0),
    "v/cm": (FIELD, 1.0),
    "kv/cm": (FIELD, 1e3),
    "mv/cm": (FIELD, 1e6),
    "ev/nm": (FIELD, 1e7),
    "s": (TIME, 1.0),
    "ps": (TIME, 1e-12),
    "fs": (TIME, 1e-15),
    "as": (TIME, 1e-18),
    "cm": (LENGTH, 1.0),
    "nm": (LENGTH, 1e-7),
    "1/s": (RATE, 1.0),
    "1/fs": (RATE, 1e15),
}

# the expected dimension of each physical key; None marks a plain number
KEY_DIMS = {
    "V": ENERGY,
    "E": ENERGY,
    "depth": ENERGY,
    "field": FIELD,
    "mass": "mass",
    "theta": TIME,
    "lam": None,
    "eps": FIELD,
    "omega2theta2": None,
    "beta": None,
    "a": None,
    "b": None,
    "gamma": RATE,
    "start": "sweep",
    "stop": "sweep",
    "work_function": ENERGY,
    "period": TIME,
    "density": None,
    "fermi_velocity": None,
    "charge": None,
    "span": None,
    "x_inner": LENGTH,
}
STRING_KEYS = ("system", "model", "table", "shape", "shapes", "sweep", "path", "scenario")
INT_KEYS = ("points", "workers")
ALIASES = {"energy": "E", "E0": "field", "m": "mass", "lambda": "lam", "Omega2theta2": "omega2theta2"}

PRESETS = {
    "hydrogen": {"system": "atomic", "model": "triangular", "depth": "13.6 eV", "field": "2e7 eV/cm",
                 "mass": "1", "omega2theta2": "15"},
    "nd144": {"system": "nuclear", "model": "coulomb", "beta": repr(116 * ALPHA), "E": "1.9 MeV",
              "mass": "3727.3794066 MeV", "omega2theta2": "15"},
    "soft-alpha": {"system": "nuclear", "model": "coulomb", "beta": repr(116 * ALPHA), "E": "1 keV",
                   "mass": "3727.3794066 MeV", "omega2theta2": "18"},
}


class ConfigError(EuclidresError, ValueError):
    """Invalid or incomplete run configuration."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class StrictFailure(EuclidresError):
    def __init__(self, message, flags):
        super().__init__(message)
        self.flags = flags


# ---------------------------------------------------------------------------
# configuration


_NUM = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*?)\s*$")


def parse_value(text: str) -> tuple[float, str | None]:
    """Split ``"2e7 eV/cm"`` into ``(2e7, "ev/cm")``; the unit is None when absent."""
    m = _NUM.match(text)
    if not m:
        raise ConfigError(f"not a number: {text!r}")
    unit = m.group(2).strip().lower() or None
    if unit is not None and unit.startswith("/"):
        unit = "1" + unit
    if unit is not None and unit not in UNITS:
        raise ConfigError(f"unknown unit {m.group(2)!r} in {text!r}")
    return float(m.group(1)), unit


def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    raw: dict[str, str] = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}", "config") from None
    with fh:
        for n, line in enumerate(fh, 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            key, sep, val = body.partition("=")
            if not sep or not key.strip():
                raise ConfigError(f"{path}:{n}: expected 'key = value'", key.strip() or None)
            raw[key.strip()] = val.strip()
    return raw


def _canonical(key: str) -> str:
    key = ALIASES.get(key, key)
    if key not in KEY_DIMS and key not in STRING_KEYS and key not in INT_KEYS:
        raise ConfigError(f"unknown parameter {key!r}", key)
    return key


@dataclass
class RunConfig:
    """Fully resolved inputs of one invocation."""

    command: str
    system: str
    params: dict
    strings: dict
    ints: dict
    fmt: str
    out: str | None
    strict: bool
    preset: str | None
    scenario: str | None
    echo: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.params.get(key, default)

    def require(self, key):
        if key not in self.params:
            raise ConfigError(f"missing required parameter {key!r}", key)
        return self.params[key]


def _to_internal(key: str, text: str, system: str, sweep_var: str | None) -> float:
    value, unit = parse_value(text)
    dim = KEY_DIMS[key]
    if dim == "sweep":
        dim = KEY_DIMS.get(sweep_var) if sweep_var else None
    if unit is None:
        return value
    udim, factor = UNITS[unit]
    if dim == "mass":
        if udim != ENERGY:
            raise ConfigError(f"{key}: give a rest energy (eV, keV, MeV) or a bare number", key)
        return mass_in(system, value * factor)
    if dim is None or udim != dim:
        raise ConfigError(f"{key}: unit {unit!r} does not fit this parameter", key)
    return convert(Quantity(value * factor, udim, "lab"), system).value


def resolve(command: str, raw: dict[str, str], fmt: str | None, out: str | None, strict: bool,
            preset: str | None, scenario: str | None = None) -> RunConfig:
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    merged: dict[str, str] = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; expected one of {sorted(PRESETS)}", "preset")
        merged.update(PRESETS[preset])
    for k, v in raw.items():
        merged[_canonical(k)] = v
    system = merged.get("system", "nuclear" if scenario in ("alpha", "soft-alpha") else "atomic")
    if system not in ("atomic", "nuclear"):
        raise ConfigError(f"system must be 'atomic' or 'nuclear', got {system!r}", "system")
    strings = {k: merged[k] for k in STRING_KEYS if k in merged}
    ints = {}
    for k in INT_KEYS:
        if k in merged:
            try:
                ints[k] = int(merged[k])
            except ValueError:
                raise ConfigError(f"{k} must be an integer, got {merged[k]!r}", k) from None
    params = {}
    for k, v in merged.items():
        if k in KEY_DIMS:
            params[k] = _to_internal(k, v, system, strings.get("sweep"))
    model = strings.get("model", "triangular")
    if model not in MODELS:
        raise ConfigError(f"unknown model {model!r}; expected one of {MODELS}", "model")
    fmt = fmt or ("csv" if command in ("sweep", "trajectory", "pulse") else "json")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}", "format")
    return RunConfig(command, system, params, strings, ints, fmt, out, strict, preset, scenario,
                     echo=dict(sorted(merged.items())))


# ---------------------------------------------------------------------------
# model construction


def barrier_spec(cfg: RunConfig) -> BarrierSpec:
    """Triangular barrier from ``V`` (default 0) and ``E`` or ``depth``."""
    mass = cfg.require("mass")
    E0 = cfg.require("field")
    V = cfg.get("V", 0.0)
    if "E" in cfg.params:
        E = cfg.params["E"]
    elif "depth" in cfg.params:
        E = V - cfg.params["depth"]
    else:
        raise ConfigError("missing required parameter 'depth' (or 'E')", "depth")
    try:
        return BarrierSpec(V, E, E0, mass, cfg.system)
    except InvalidSpecError as exc:
        raise ConfigError(str(exc)) from None


def potential_model(cfg: RunConfig) -> smooth.PotentialModel:
    model = cfg.strings.get("model", "triangular")
    if model == "triangular":
        return smooth.PotentialModel.from_spec(barrier_spec(cfg))
    if model == "coulomb":
        return smooth.PotentialModel.coulomb(cfg.require("beta"), cfg.require("mass"))
    if model == "cubic":
        return smooth.PotentialModel.cubic(cfg.require("a"), cfg.require("b"), cfg.require("mass"))
    path = cfg.strings.get("table")
    if not path:
        raise ConfigError("missing required parameter 'table'", "table")
    try:
        pot, units = smooth.load_tabulated(path, cfg.get("mass"))
    except OSError as exc:
        raise ConfigError(f"cannot read table {path!r}: {exc}", "table") from None
    except InvalidSpecError as exc:
        raise ConfigError(str(exc), "table") from None
    if units != cfg.system:
        raise ConfigError(f"table declares units {units!r} but system is {cfg.system!r}", "system")
    if "x_inner" in cfg.params:
        pot = smooth.PotentialModel.tabulated(pot.meta["real"].x, pot.meta["real"](pot.meta["real"].x),
                                              pot.mass, cfg.params["x_inner"])
    return pot


def _time_s(cfg: RunConfig, t: float) -> float:
    return convert(Quantity(t, TIME, cfg.system), "lab").value


def _field_lab(cfg: RunConfig, f: float) -> float:
    return convert(Quantity(f, FIELD, cfg.system), "lab").value


def _step_for(cfg: RunConfig, spec: BarrierSpec, theta: float) -> tri.StepProfile:
    """Step height from ``lam`` or the quartic-Gaussian amplitude ``eps``."""
    if "lam" in cfg.params:
        return tri.StepProfile(cfg.params["lam"], theta)
    if "eps" in cfg.params:
        p = pulses.Pulse.from_omega2theta2(pulses.QUARTIC, cfg.params["eps"], theta,
                                           cfg.get("omega2theta2", 2.0))
        return tri.StepProfile(pulses.effective_amplitude(p, spec.E0), theta)
    return tri.StepProfile(0.5 * (1 + tri.LAMBDA_T), theta)


# ---------------------------------------------------------------------------
# serialization


def _plain(obj):
    """Dataclasses, numpy and non-finite floats to JSON-ready values."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return _plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, complex):
        return {"re": _plain(obj.real), "im": _plain(obj.imag)}
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def dump_json(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


@dataclass
class CurveTable:
    """Numeric table with a metadata header; rows share one column count."""

    columns: list[str]
    rows: list[tuple[float, ...]]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.columns)
        for r in self.rows:
            if len(r) != n:
                raise ValueError(f"row has {len(r)} values, expected {n}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k in sorted(self.metadata):
            buf.write(f"# {k} = {json.dumps(_plain(self.metadata[k]), sort_keys=True)}\n")
        buf.write(",".join(self.columns) + "\n")
        for r in self.rows:
            buf.write(",".join(format(float(v), FLOAT_FMT) for v in r) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CurveTable":
        meta = {}
        columns = None
        rows = []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                meta[key.strip()] = json.loads(val)
            elif columns is None:
                columns = line.split(",")
            elif line:
                rows.append(tuple(float(v) for v in line.split(",")))
        return cls(columns or [], rows, meta)

    def to_json(self) -> str:
        return dump_json({"columns": self.columns, "rows": [list(r) for r in self.rows],
                          "metadata": self.metadata})

    def equals(self, other: "CurveTable") -> bool:
        """Exact equality with NaN matching NaN."""
        if self.columns != other.columns or _plain(self.metadata) != _plain(other.metadata):
            return False
        a = np.array(self.rows, dtype=float)
        b = np.array(other.rows, dtype=float)
        return a.shape == b.shape and bool(np.array_equal(a, b, equal_nan=True))


def _metadata(cfg: RunConfig, **extra) -> dict:
    meta = {
        "command": cfg.command,
        "inputs": cfg.echo,
        "unit_system": cfg.system,
        "tool_version": __version__,
    }
    if cfg.preset:
        meta["preset"] = cfg.preset
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# commands


def cmd_resonance(cfg: RunConfig) -> dict:
    """Resonance parameters and the selected decay branch."""
    model = cfg.strings.get("model", "triangular")
    if model != "triangular":
        return _smooth_resonance(cfg)
    spec = barrier_spec(cfg)
    tR = tri.resonance_theta(spec)
    theta = cfg.get("theta", tR)
    w2t2 = cfg.get("omega2theta2", 15.0)
    omega = math.sqrt(w2t2) / theta
    if cfg.get("eps", None) == 0 or cfg.get("lam", None) == 0:
        step = tri.StepProfile(0.0, theta)
    else:
        step = _step_for(cfg, spec, theta)
    res = tri.decay(spec, step)
    rp = tri.resonance_params(spec, theta, step.lam)
    dt = tri.exit_packet_duration(spec, theta)
    valid = tri.semiclassical_check(spec, omega, theta)
    eps_T = tri.threshold_field(spec, theta, omega)
    flags = {
        "semiclassical": valid.ok,
        "static_action_large": res.A0 >= tri.SMALL_ACTION,
        "physical_branch": res.branches.selected is not None,
    }
    return {
        "model": "triangular",
        "metadata": _metadata(cfg),
        "theta": theta,
        "theta_s": _time_s(cfg, theta),
        "theta_R": tR,
        "theta_R_s": _time_s(cfg, tR),
        "lam": step.lam,
        "resonance": rp,
        "delta_t": dt,
        "delta_t_s": _time_s(cfg, dt),
        "delta_t_over_theta": dt / theta,
        "eps_T": eps_T,
        "eps_T_ev_cm": _field_lab(cfg, eps_T),
        "decay": {
            "A": res.A,
            "A0": res.A0,
            "delta_e": res.delta_e,
            "exit_energy": res.exit_energy,
            "log_W": res.W_exponent,
            "branches": [asdict(b) for b in res.branches.branches],
            "selected": res.branches.selected,
            "notes": list(res.flags),
        },
        "validity": {"semiclassical": asdict(valid)},
        "flags": flags,
    }


def _default_theta(cfg: RunConfig, pot: smooth.PotentialModel) -> float:
    if "theta" in cfg.params:
        return cfg.params["theta"]
    if pot.kind == "coulomb" and "E" in cfg.params:
        a = scenarios.AlphaSpec(cfg.params["beta"], cfg.params["E"], pot.mass)
        return scenarios.alpha_resonance(a).theta_R
    raise ConfigError("missing required parameter 'theta'", "theta")


def _smooth_resonance(cfg: RunConfig) -> dict:
    pot = potential_model(cfg)
    theta = _default_theta(cfg, pot)
    w2t2 = cfg.get("omega2theta2", 15.0)
    omega = math.sqrt(w2t2) / theta
    E_R = smooth.resonance_energy_smooth(pot, theta)
    eps_T = smooth.threshold_field(pot, theta, omega, E_R)
    out = {
        "model": pot.kind,
        "metadata": _metadata(cfg, quadrature_rtol=smooth.QUAD_RTOL, root_rtol=smooth.ROOT_RTOL),
        "theta": theta,
        "theta_s": _time_s(cfg, theta),
        "E_R": E_R,
        "eps_T": eps_T,
        "eps_T_ev_cm": _field_lab(cfg, eps_T),
        "flags": {},
    }
    if "E" in cfg.params:
        E = cfg.params["E"]
        A0 = smooth.static_action_smooth(pot, E)
        sol = smooth.action_smooth(pot, E, theta)
        out.update({
            "E": E,
            "A0": A0,
            "A": sol.A,
            "delta_e": sol.delta_e,
            "exit_energy": E + sol.delta_e,
            "x0": sol.x0,
            "x1": sol.x1,
            "W_exponent": min(A0, sol.A) if sol.A >= 0 else A0,
        })
        out["flags"]["static_action_large"] = A0 >= tri.SMALL_ACTION
        # barrier height above E over the under-barrier span, sampled away from a singular inner end
        xs = np.linspace(sol.x0, sol.x1, 2001)[1:]
        height = float(np.max(np.real(pot.V(xs)))) - E
        ratio = w2t2 / (height * theta) if height > 0 else math.inf
        out["semiclassical_ratio"] = ratio
        out["flags"]["semiclassical"] = ratio <= tri.MUCH_LESS
    if "interpolation_error" in pot.meta:
        out["metadata"]["interpolation_error"] = pot.meta["interpolation_error"]
    return out


BRANCH_CODES = {None: -1, tri.STATIC: 0, tri.PRE_KICK: 1, tri.JUMP: 2, tri.POST_KICK: 3}
SWEEP_COLUMNS = ["A0", "A_pre_kick", "A_jump", "A_post_kick", "A_static", "selected_branch", "A",
                 "delta_e", "E_R", "E_ext", "W_exponent", "ok"]


def _sweep_row_triangular(cfg: RunConfig, base: BarrierSpec, var: str, value: float) -> tuple:
    try:
        spec = base.with_energy(value) if var == "E" else base
        theta = value if var == "theta" else cfg.get("theta", tri.resonance_theta(base))
        if var == "lam":
            step = tri.StepProfile(value, theta)
        elif var == "eps":
            p = pulses.Pulse.from_omega2theta2(pulses.QUARTIC, value, theta, cfg.get("omega2theta2", 2.0))
            step = tri.StepProfile(pulses.effective_amplitude(p, spec.E0), theta)
        else:
            step = _step_for(cfg, spec, theta)
        res = tri.decay(spec, step)
        acts = {b.kind: b.action for b in res.branches.branches}
        sel = res.branches.branches[res.branches.selected].kind if res.branches.selected is not None else None
        rp = tri.resonance_params(spec, theta, step.lam)
        return (value, res.A0, acts.get(tri.PRE_KICK, math.nan), acts.get(tri.JUMP, math.nan),
                acts.get(tri.POST_KICK, math.nan), acts.get(tri.STATIC, math.nan), BRANCH_CODES[sel],
                res.A, res.delta_e, rp.E_R, rp.E_ext, -res.W_exponent, 1.0)
    except (EuclidresError, ValueError, ArithmeticError) as exc:
        logger.info("sweep point %s=%r failed: %s", var, value, exc)
        return (value,) + (math.nan,) * (len(SWEEP_COLUMNS) - 1) + (0.0,)


SMOOTH_SWEEP_COLUMNS = ["A0", "A", "delta_e", "x0", "x1", "W_exponent", "ok"]


def _sweep_row_smooth(cfg: RunConfig, pot: smooth.PotentialModel, var: str, value: float) -> tuple:
    try:
        E = value if var == "E" else cfg.require("E")
        theta = value if var == "theta" else cfg.require("theta")
        A0 = smooth.static_action_smooth(pot, E)
        sol = smooth.action_smooth(pot, E, theta)
        w = min(A0, sol.A) if sol.A >= 0 else A0
        return (value, A0, sol.A, sol.delta_e, sol.x0, sol.x1, w, 1.0)
    except (EuclidresError, ValueError, ArithmeticError) as exc:
        logger.info("sweep point %s=%r failed: %s", var, value, exc)
        return (value,) + (math.nan,) * (len(SMOOTH_SWEEP_COLUMNS) - 1) + (0.0,)


def cmd_sweep(cfg: RunConfig) -> CurveTable:
    """One row per sweep point; failed points are NaN rows with ``ok = 0``."""
    var = cfg.strings.get("sweep")
    if var not in SWEEP_VARIABLES:
        raise ConfigError(f"sweep variable must be one of {SWEEP_VARIABLES}", "sweep")
    start, stop = cfg.require("start"), cfg.require("stop")
    if not start != stop:
        raise ConfigError("sweep range has zero width", "stop")
    n = cfg.ints.get("points", 101)
    if not 2 <= n <= MAX_POINTS:
        raise ConfigError(f"points must lie in [2, {MAX_POINTS}]", "points")
    values = np.linspace(start, stop, n)
    model = cfg.strings.get("model", "triangular")
    if model == "triangular":
        base = barrier_spec(cfg)
        cols = SWEEP_COLUMNS

        def work(v):
            return _sweep_row_triangular(cfg, base, var, float(v))
    else:
        if var not in ("E", "theta"):
            raise ConfigError("smooth models sweep E or theta only", "sweep")
        pot = potential_model(cfg)
        cols = SMOOTH_SWEEP_COLUMNS

        def work(v):
            return _sweep_row_smooth(cfg, pot, var, float(v))

    workers = cfg.ints.get("workers", min(4, os.cpu_count() or 1))
    if workers < 1:
        raise ConfigError("workers must be positive", "workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(work, values))
    failed = sum(1 for r in rows if r[-1] == 0.0)
    meta = _metadata(cfg, sweep=var, model=model, failed_points=failed,
                     branch_codes={str(k): v for k, v in BRANCH_CODES.items()} if model == "triangular" else None,
                     W_exponent="-ln W at exponential accuracy")
    return CurveTable([var] + cols, rows, meta)


def cmd_trajectory(cfg: RunConfig) -> CurveTable:
    """Complex-time trajectory sampled at the integrator steps."""
    pot = potential_model(cfg)
    if "E" in cfg.params:
        E = cfg.params["E"]
    elif pot.kind == "triangular":
        E = barrier_spec(cfg).E
    else:
        raise ConfigError("missing required parameter 'E'", "E")
    eps = cfg.get("eps", 0.0)
    pulse = None
    theta = cfg.get("theta")
    if eps > 0:
        if theta is None:
            raise ConfigError("missing required parameter 'theta' for a driven trajectory", "theta")
        shape = cfg.strings.get("shape", pulses.LORENTZ)
        pulse = pulses.Pulse.from_omega2theta2(shape, eps, theta, cfg.get("omega2theta2", 15.0))
    res = smooth.integrate_euclidean(pot, pulse, E, theta=theta, path=cfg.strings.get("path", "auto"))
    tr = res.trajectory
    rows = [
        (float(s), t.real, t.imag, x.real, x.imag, v.real, v.imag, e.real, e.imag)
        for s, t, x, v, e in zip(tr.segment, tr.t, tr.x, tr.velocity, tr.energy)
    ]
    cols = ["segment", "t_re", "t_im", "x_re", "x_im", "velocity_re", "velocity_im", "energy_re", "energy_im"]
    meta = _metadata(
        cfg, model=pot.kind, path=tr.path, backend=tr.backend, action=res.action, start_energy=res.start_energy,
        delta_e=res.delta_e, kick=res.kick, momentum_jump=res.momentum_jump, x_start=res.x_start,
        x_ref=res.x_ref, rtol=1e-9, atol=1e-12,
    )
    if pulse is not None:
        meta["contour_kick"] = pulses.contour_kick(pulse)
    return CurveTable(cols, rows, meta)


def cmd_pulse(cfg: RunConfig) -> CurveTable:
    """Pulse shapes ``field / eps`` against ``t / theta``."""
    shapes = [s.strip() for s in cfg.strings.get("shapes", cfg.strings.get(
        "shape", f"{pulses.LORENTZ},{pulses.ODD}")).split(",") if s.strip()]
    for s in shapes:
        if s not in pulses.SHAPES:
            raise ConfigError(f"unknown pulse shape {s!r}", "shapes")
    n = cfg.ints.get("points", 400)
    if not 2 <= n <= MAX_POINTS:
        raise ConfigError(f"points must lie in [2, {MAX_POINTS}]", "points")
    theta = cfg.get("theta", 1.0)
    w2t2 = cfg.get("omega2theta2", 15.0)
    span = cfg.get("span", 3.0)
    cols = ["t_over_theta"]
    data = []
    t = None
    for s in shapes:
        p = pulses.Pulse.from_omega2theta2(s, 1.0, theta, w2t2)
        t, y = pulses.sample(p, n, span)
        cols.append(s.replace("-", "_"))
        data.append(y)
    rows = [tuple([float(t[i])] + [float(y[i]) for y in data]) for i in range(n)]
    meta = _metadata(cfg, omega2theta2=w2t2, span=span)
    if pulses.LORENTZ in shapes and pulses.ODD in shapes:
        yl = data[shapes.index(pulses.LORENTZ)]
        yo = data[shapes.index(pulses.ODD)]
        meta["max_deviation_over_peak"] = float(np.max(np.abs(yl - yo)) / np.max(np.abs(yl)))
    return CurveTable(cols, rows, meta)


def cmd_scenario(cfg: RunConfig) -> dict:
    name = cfg.scenario
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; expected one of {SCENARIOS}", "scenario")
    if name in ("alpha", "soft-alpha"):
        base = scenarios.nd144() if name == "alpha" else scenarios.soft_alpha()
        if cfg.system != "nuclear":
            raise ConfigError("alpha scenarios need 'system = nuclear'", "system")
        spec = scenarios.AlphaSpec(
            beta=cfg.get("beta", base.beta), E=cfg.get("E", base.E), m=cfg.get("mass", base.m),
            omega2theta2=cfg.get("omega2theta2", base.omega2theta2), charge=cfg.get("charge", base.charge),
        )
        label = "soft-alpha" if name == "soft-alpha" else "nd144"
        # published figures belong to the preset inputs only
        pub = scenarios.PUBLISHED[label] if spec == base else {}
        if spec != base and name == "alpha":
            label = "alpha"
        report = scenarios.alpha_report(spec, cfg.get("theta"), name=label, published=pub)
        return {"scenario": name, "metadata": _metadata(cfg), "report": report}
    if name == "hydrogen":
        report = scenarios.hydrogen_report(
            _lab(cfg, "field", 2e7, FIELD), cfg.get("omega2theta2", 15.0), cfg.get("theta"),
            _lab(cfg, "depth", scenarios.HYDROGEN_DEPTH_EV, ENERGY), cfg.get("gamma"),
        )
        return {"scenario": name, "metadata": _metadata(cfg), "report": report}
    if name == "metal":
        wf = _lab(cfg, "work_function", scenarios.HYDROGEN_DEPTH_EV, ENERGY)
        fld = _lab(cfg, "field", 2e7, FIELD)
        period = _lab(cfg, "period", None, TIME)
        if period is None:
            period = scenarios.metal_emission_report(wf, fld, math.inf).theta_R_s
        report = scenarios.metal_emission_report(
            wf, fld, period, cfg.get("density", scenarios.COPPER_DENSITY_CM3),
            cfg.get("fermi_velocity", scenarios.COPPER_FERMI_VELOCITY_CM_S),
        )
        return {"scenario": name, "metadata": _metadata(cfg, units="A/cm^2, S/cm, s"), "report": report}
    out = _smooth_resonance(cfg)
    out["scenario"] = name
    return out


def _lab(cfg: RunConfig, key: str, default, dim):
    """Parameter in lab units (eV, eV/cm, s) or ``default`` when absent."""
    if key not in cfg.params:
        return default
    return convert(Quantity(cfg.params[key], dim, cfg.system), "lab").value


def cmd_check(cfg: RunConfig) -> dict:
    """Semiclassical and friction validity checks only."""
    out: dict = {"metadata": _metadata(cfg), "checks": {}, "flags": {}}
    theta = cfg.get("theta")
    w2t2 = cfg.get("omega2theta2", 15.0)
    depth = None
    if cfg.strings.get("model", "triangular") == "triangular" and "field" in cfg.params:
        spec = barrier_spec(cfg)
        depth = spec.depth
        theta = tri.resonance_theta(spec) if theta is None else theta
        v = tri.semiclassical_check(spec, math.sqrt(w2t2) / theta, theta)
        out["checks"]["semiclassical"] = v
        out["flags"]["semiclassical"] = v.ok
    elif "depth" in cfg.params:
        depth = cfg.params["depth"]
    if theta is None:
        raise ConfigError("missing required parameter 'theta'", "theta")
    out["theta"] = theta
    if "gamma" in cfg.params:
        d = scenarios.dissipation_bound(theta, cfg.params["gamma"], w2t2, depth)
        out["checks"]["dissipation"] = d
        out["flags"]["dissipation"] = d.ok
        if d.chain_ok is not None:
            out["flags"]["dissipation_chain"] = d.chain_ok
    if not out["checks"]:
        raise ConfigError("nothing to check: give a barrier ('field', 'depth', 'mass') or 'gamma'", "gamma")
    return out


# ---------------------------------------------------------------------------
# entry point


PHYSICS_FLAGS = ("V", "E", "depth", "field", "mass", "theta", "lam", "eps", "omega2theta2", "beta", "a", "b",
                 "gamma", "start", "stop", "work_function", "period", "density", "fermi_velocity", "charge",
                 "span", "x_inner", "system", "model", "table", "shape", "shapes", "sweep", "path", "workers")
FLAG_NAMES = {"E": "energy"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--format", choices=None, help="csv or json")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--points", type=str, help="sample or sweep point count")
    common.add_argument("--strict", action="store_true", help="exit 4 when a validity flag fails")
    common.add_argument("--preset", help="hydrogen, nd144 or soft-alpha")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="any config key; repeatable")
    common.add_argument("-v", "--verbose", action="count", default=0)
    for key in PHYSICS_FLAGS:
        name = FLAG_NAMES.get(key, key).replace("_", "-")
        common.add_argument(f"--{name}", dest=f"p_{key}", metavar="VALUE")
    parser = argparse.ArgumentParser(prog="euclidres", description="Tunneling under adapted pulses.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("resonance", parents=[common], help="resonance parameters and decay branches")
    sub.add_parser("sweep", parents=[common], help="branch actions over a parameter range")
    sub.add_parser("trajectory", parents=[common], help="complex-time trajectory")
    sub.add_parser("pulse", parents=[common], help="pulse shapes")
    sc = sub.add_parser("scenario", parents=[common], help="application reports")
    sc.add_argument("name", help=", ".join(SCENARIOS))
    sub.add_parser("check", parents=[common], help="validity checks only")
    return parser


def _collect(args) -> dict[str, str]:
    raw = read_config(args.config) if args.config else {}
    for item in args.set:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        raw[key.strip()] = val.strip()
    for key in PHYSICS_FLAGS:
        val = getattr(args, f"p_{key}")
        if val is not None:
            raw[key] = val
    if args.points is not None:
        raw["points"] = args.points
    return raw


def _flags_of(result) -> dict:
    if isinstance(result, CurveTable):
        return {}
    flags = dict(result.get("flags", {}))
    rep = result.get("report")
    if isinstance(rep, scenarios.ScenarioReport):
        flags.update(rep.flags)
    elif rep is not None and hasattr(rep, "period_ok"):
        flags["period_ok"] = rep.period_ok
    return {k: v for k, v in flags.items() if isinstance(v, bool)}


def _report_table(result: dict) -> CurveTable:
    flat: dict = {}

    def walk(prefix, obj):
        obj = _plain(obj)
        if isinstance(obj, dict):
            for k, v in obj.items():
                if k != "metadata":
                    walk(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(obj, bool):
            flat[prefix] = float(obj)
        elif isinstance(obj, (int, float)):
            flat[prefix] = float(obj)

    walk("", result)
    cols = sorted(flat)
    return CurveTable(cols, [tuple(flat[c] for c in cols)], _plain(result.get("metadata", {})))


def render(result, fmt: str) -> str:
    if isinstance(result, CurveTable):
        return result.to_csv() if fmt == "csv" else result.to_json()
    if fmt == "csv":
        return _report_table(result).to_csv()
    return dump_json(result)


HANDLERS = {
    "resonance": cmd_resonance,
    "sweep": cmd_sweep,
    "trajectory": cmd_trajectory,
    "pulse": cmd_pulse,
    "scenario": cmd_scenario,
    "check": cmd_check,
}


def _fail(code: int, exc: BaseException) -> int:
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    key = getattr(exc, "key", None)
    if key is not None:
        err["field"] = key
    flags = getattr(exc, "flags", None)
    if flags is not None:
        err["flags"] = flags
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        raw = _collect(args)
        cfg = resolve(args.command, raw, args.format, args.out, args.strict, args.preset,
                      getattr(args, "name", None))
        result = HANDLERS[args.command](cfg)
        text = render(result, cfg.fmt)
        if cfg.out:
            with open(cfg.out, "w", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        failed = {k: v for k, v in _flags_of(result).items() if not v}
        if cfg.strict and failed:
            raise StrictFailure("validity check failed", failed)
    except StrictFailure as exc:
        return _fail(EXIT_STRICT, exc)
    except (ConfigError, InvalidSpecError) as exc:
        return _fail(EXIT_CONFIG, exc)
    except (RootNotFoundError, QuadratureError, IntegrationError, NoPhysicalBranchError, DomainError) as exc:
        return _fail(EXIT_SOLVER, exc)
    except EuclidresError as exc:
        return _fail(EXIT_SOLVER, exc)
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
