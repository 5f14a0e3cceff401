import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from euclidres import scenarios as sc
from euclidres import smooth as S
from euclidres import triangular as tri
from euclidres.errors import DomainError, InvalidSpecError, RootNotFoundError
from euclidres.pulses import LORENTZ, Pulse
from euclidres.quantities import BarrierSpec

SPEC = BarrierSpec(V=1.0, E=0.0, E0=0.05, m=1.0)


def coulomb_closed_theta(beta, m, level):
    return math.pi / 4 * beta * math.sqrt(2 * m) / level ** 1.5


def coulomb_closed_action(beta, m, E, theta):
    return (3 * math.pi * beta * math.sqrt(3 * m * theta)) ** (2 / 3) - 2 * theta * E


def test_turning_points():
    pot = S.PotentialModel.from_spec(SPEC)
    assert S.turning_points(pot, 0.3) == pytest.approx([(1.0 - 0.3) / 0.05], rel=1e-13)
    c = S.PotentialModel.coulomb(2.0, 1.0)
    assert S.turning_points(c, 0.5) == pytest.approx([4.0], rel=1e-13)


def test_tabulated_turning_point_matches_algebra():
    x = np.linspace(0.5, 30.0, 300)
    pot = S.PotentialModel.tabulated(x, 2.0 / x, 1.0, x_inner=0.5)
    root = S.turning_points(pot, 0.5)[0]
    assert root == pytest.approx(4.0, abs=10 * pot.meta["interpolation_error"] + 1e-6)


def test_tabulated_rejects_bad_tables(tmp_path):
    with pytest.raises(InvalidSpecError):
        S.PotentialModel.tabulated([0, 1, 1, 2], [1, 2, 3, 4], 1.0)
    with pytest.raises(InvalidSpecError):
        S.PotentialModel.tabulated([0, 1], [1, 2], 1.0)
    f = tmp_path / "v.dat"
    f.write_text("0 1\n1 2\n2 3\n3 4\n")
    with pytest.raises(InvalidSpecError):
        S.load_tabulated(f, 1.0)
    f.write_text("# units: atomic\n# mass: 2.5\n0 1\n1 2\n2 3\n3 4\n")
    pot, units = S.load_tabulated(f)
    assert units == "atomic" and pot.mass == 2.5


def test_theta_of_deltaE_triangular_closed_form():
    pot = S.PotentialModel.from_spec(SPEC)
    for dE in (-0.01, -0.3, -2.0):
        # free fall from the exit point at E + dE to the well edge x0 = 0
        ref = math.sqrt(2 * SPEC.m * (SPEC.depth - dE)) / SPEC.E0
        assert S.theta_of_deltaE(pot, SPEC.E, dE) == pytest.approx(ref, rel=1e-10)
    with pytest.raises(DomainError):
        S.theta_of_deltaE(pot, SPEC.E, 0.1)


def test_theta_finite_static_limit():
    pot = S.PotentialModel.from_spec(SPEC)
    assert S.static_traversal_time(pot, SPEC.E) == pytest.approx(tri.tau00(SPEC), rel=1e-12)
    assert S.theta_of_deltaE(pot, SPEC.E, -1e-12) == pytest.approx(tri.tau00(SPEC), rel=1e-5)


def test_coulomb_theta_closed_form():
    s = sc.nd144()
    pot = S.PotentialModel.coulomb(s.beta, s.m)
    level = s.E / 3
    assert S.theta_of_deltaE(pot, s.E, level - s.E) == pytest.approx(coulomb_closed_theta(s.beta, s.m, level), rel=1e-9)


@pytest.mark.parametrize("frac", [0.3, 0.6, 0.9])
def test_round_trip_deltaE(frac):
    pot = S.PotentialModel.from_spec(SPEC)
    t = tri.tau00(SPEC) * (1 + frac)
    dE = S.deltaE_of_theta(pot, SPEC.E, t)
    assert S.theta_of_deltaE(pot, SPEC.E, dE) == pytest.approx(t, rel=1e-11)
    with pytest.raises(DomainError):
        S.deltaE_of_theta(pot, SPEC.E, 0.5 * tri.tau00(SPEC))


def test_action_smooth_triangular_form():
    pot = S.PotentialModel.from_spec(SPEC)
    th = 1.4 * tri.tau00(SPEC)
    sol = S.action_smooth(pot, SPEC.E, th)
    ref = tri.static_action(SPEC.with_energy(SPEC.E + sol.delta_e)) + 2 * th * sol.delta_e
    assert sol.A == pytest.approx(ref, rel=1e-9)


def test_coulomb_action_closed_form():
    s = sc.nd144()
    pot = S.PotentialModel.coulomb(s.beta, s.m)
    th = 0.7 * sc.alpha_resonance(s).theta_R
    assert S.action_smooth(pot, s.E, th).A == pytest.approx(coulomb_closed_action(s.beta, s.m, s.E, th), rel=1e-8)
    assert S.static_action_smooth(pot, s.E) == pytest.approx(sc.alpha_static_action(s), rel=1e-10)


def test_resonance_energy_triangular():
    pot = S.PotentialModel.from_spec(SPEC)
    th = 30.0
    ER = S.resonance_energy_smooth(pot, th)
    assert ER == pytest.approx(tri.resonance_energy(SPEC, th), rel=1e-9)
    assert abs(S.action_smooth(pot, ER, th).A) <= 1e-9 * S.static_action_smooth(pot, ER)


def test_resonance_energy_coulomb():
    s = sc.nd144()
    pot = S.PotentialModel.coulomb(s.beta, s.m)
    th = sc.alpha_resonance(s).theta_R
    assert S.resonance_energy_smooth(pot, th, bracket=(0.5 * s.E, 2 * s.E)) == pytest.approx(s.E, rel=1e-9)


def test_extremal_field_forms():
    pot = S.PotentialModel.from_spec(SPEC)
    th, om = 30.0, math.sqrt(15.0) / 30.0
    eps = S.extremal_field(pot, SPEC.E, th, om)
    lhs = math.pi / SPEC.E0 * eps * math.exp((om * th) ** 2)
    assert lhs == pytest.approx(math.sqrt(1 - 2 * SPEC.m * SPEC.depth / (th * SPEC.E0) ** 2), rel=1e-9)
    assert eps == pytest.approx(tri.extremal_field(SPEC, th, om), rel=1e-9)


def test_threshold_field_coulomb_closed_form():
    s = sc.nd144()
    pot = S.PotentialModel.coulomb(s.beta, s.m)
    th = sc.alpha_resonance(s).theta_R
    om = math.sqrt(15.0) / th
    ref = 4 * math.sqrt(2) / (9 * math.pi ** 2) * s.E ** 2 / s.beta * math.exp(-15.0)
    assert S.threshold_field(pot, th, om, E_R=s.E) == pytest.approx(ref, rel=1e-9)
    # the Gaussian factor only suppresses
    assert S.threshold_field(pot, th, 0.0, E_R=s.E) > S.threshold_field(pot, th, om, E_R=s.E)


def test_extremal_energy_limits():
    pot = S.PotentialModel.from_spec(SPEC)
    th, om = 30.0, math.sqrt(15.0) / 30.0
    ER = tri.resonance_energy(SPEC, th)
    eT = S.threshold_field(pot, th, om, ER)
    assert S.extremal_energy(pot, th, om, eT, ER) == ER
    e0 = S.extremal_energy(pot, th, om, 0.0, ER)
    assert e0 == pytest.approx(ER - th ** 2 * SPEC.E0 ** 2 / (3 * SPEC.m), rel=1e-9)
    half = S.extremal_energy(pot, th, om, 0.5 * eT, ER)
    assert half == pytest.approx(tri.extremal_energy(SPEC, th, om, 0.5 * eT), rel=1e-9)


def test_energy_gain_identity():
    # on a well with a genuine turning point the extremal kick returns exactly dE
    pot = S.PotentialModel.cubic(1.0, 0.02, 1.0)
    E = 60.0
    th = 0.8 * S.static_traversal_time(pot, E)
    om = math.sqrt(15.0) / th
    eps = S.extremal_field(pot, E, th, om)
    dE = S.deltaE_of_theta(pot, E, th)
    assert S.energy_gain_of_field(pot, E, th, om, eps) == pytest.approx(dE, rel=1e-9)
    assert S.kick_from_segment(pot, E, th) == pytest.approx(-dE, rel=1e-12)


def test_kick_from_segment_triangular_edge():
    pot = S.PotentialModel.from_spec(SPEC)
    th = 30.0
    dE = S.deltaE_of_theta(pot, SPEC.E, th)
    assert S.kick_from_segment(pot, SPEC.E, th) == pytest.approx(SPEC.depth - dE, rel=1e-12)


def test_ode_static_triangular_trajectory():
    pot = S.PotentialModel.from_spec(SPEC)
    r = S.integrate_euclidean(pot, None, SPEC.E)
    tau = r.trajectory.t.imag
    xa = SPEC.E0 / (2 * SPEC.m) * (tri.tau00(SPEC) ** 2 - tau ** 2)
    assert np.max(np.abs(r.trajectory.x - xa)) <= 1e-8 * (SPEC.depth / SPEC.E0)
    assert r.action == pytest.approx(tri.static_action(SPEC), rel=1e-9)


@pytest.fixture(scope="module")
def cubic_run():
    pot = S.PotentialModel.cubic(1.0, 0.02, 1.0)
    E = 60.0
    th = 0.8 * S.static_traversal_time(pot, E)
    om = math.sqrt(15.0) / th
    eps = S.extremal_field(pot, E, th, om)
    p = Pulse(LORENTZ, eps, om, th)
    return pot, E, th, p, S.integrate_euclidean(pot, p, E, th)


def test_ode_kick_matches_pole(cubic_run):
    pot, E, th, p, r = cubic_run
    ref = math.pi * th * p.eps * math.exp(15.0)
    assert abs(r.kick) == pytest.approx(ref, rel=1e-4)


def test_ode_action_matches_instant_solution(cubic_run):
    pot, E, th, p, r = cubic_run
    assert r.action == pytest.approx(S.action_smooth(pot, E, th).A, rel=1e-2)


def test_ode_energy_returns_to_level(cubic_run):
    pot, E, th, p, r = cubic_run
    en = r.trajectory.energy
    assert en[0] == pytest.approx(r.start_energy, rel=1e-9)
    assert abs(en[-1] - E) <= 1e-4 * abs(r.start_energy - E)


def test_ode_loop_displacement_shrinks_with_sharper_signal():
    pot = S.PotentialModel.cubic(1.0, 0.02, 1.0)
    E = 60.0
    th = 0.8 * S.static_traversal_time(pot, E)
    dx = []
    for w2t2 in (15.0, 30.0, 60.0):
        om = math.sqrt(w2t2) / th
        p = Pulse(LORENTZ, S.extremal_field(pot, E, th, om), om, th)
        dx.append(abs(S.integrate_euclidean(pot, p, E, th).dx_kick))
    assert dx[0] > dx[1] > dx[2]
    assert dx[0] / dx[2] == pytest.approx(4.0, rel=0.1)


def test_contour_vertices_guard():
    with pytest.raises(DomainError):
        S.contour_vertices(1.0, 1.0, "rectangle")
    v, tags = S.contour_vertices(1.0, 4.0, "rectangle")
    assert v[0] == 0 and len(tags) == len(v) - 1


def test_triangular_limit_check():
    rep = S.triangular_limit_check(SPEC, 30.0, math.sqrt(15.0) / 30.0)
    assert rep.max_relative_deviation < 1e-3


def test_matching_points_missing_exit():
    pot = S.PotentialModel.cubic(1.0, 0.02, 1.0)
    with pytest.raises(RootNotFoundError):
        S.matching_points(pot, 400.0, 0.0)


@settings(max_examples=15, deadline=None)
@given(beta=st.floats(0.2, 2.0), m=st.floats(100.0, 5000.0), E=st.floats(0.5, 5.0), frac=st.floats(0.2, 0.95))
def test_coulomb_action_random(beta, m, E, frac):
    s = sc.AlphaSpec(beta=beta, E=E, m=m)
    pot = S.PotentialModel.coulomb(beta, m)
    th = frac * sc.alpha_resonance(s).theta_R
    assert S.action_smooth(pot, E, th).A == pytest.approx(coulomb_closed_action(beta, m, E, th), rel=1e-8)
