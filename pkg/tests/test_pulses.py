import cmath
import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from euclidres import pulses
from euclidres.errors import DomainError, InvalidSpecError
from euclidres.pulses import LORENTZ, ODD, QUARTIC, Pulse, StepProfile


def lorentz(eps=1.0, theta=1.0, w2t2=15.0):
    return Pulse.from_omega2theta2(LORENTZ, eps, theta, w2t2)


def test_evaluate_at_origin():
    assert pulses.evaluate(Pulse(QUARTIC, 2.0, 1.0, 1.0), 0.0) == pytest.approx(-2.0)
    assert pulses.evaluate(lorentz(), 0.0) == 0.0


def test_lorentz_at_theta():
    p = lorentz(eps=3.0, theta=2.0, w2t2=4.0)
    assert pulses.evaluate(p, 2.0) == pytest.approx(-1.5 * math.exp(-4.0), rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(t=st.floats(-5, 5), w2t2=st.floats(0.5, 30), theta=st.floats(0.1, 5))
def test_parity(t, w2t2, theta):
    q = Pulse.from_omega2theta2(QUARTIC, 1.0, theta, w2t2)
    lo = Pulse.from_omega2theta2(LORENTZ, 1.0, theta, w2t2)
    assert pulses.evaluate(q, -t) == pulses.evaluate(q, t)
    assert pulses.evaluate(lo, -t) == -pulses.evaluate(lo, t)


def test_pulse_invariants():
    with pytest.raises(InvalidSpecError):
        Pulse(QUARTIC, -1.0, 1.0, 1.0)
    with pytest.raises(InvalidSpecError):
        Pulse(QUARTIC, 1.0, 0.0, 1.0)
    with pytest.raises(InvalidSpecError):
        Pulse("square", 1.0, 1.0, 1.0)
    with pytest.raises(InvalidSpecError):
        StepProfile(-0.1, 1.0)


def test_reduced_profile():
    zero = pulses.reduced_profile(Pulse(QUARTIC, 0.0, 1.0, 1.0), 2.0)
    assert zero(0.3) == 0.0
    assert pulses.reduced_profile(Pulse(QUARTIC, 2.0, 1.0, 1.0), 2.0)(0.0) == pytest.approx(-1.0)
    p = lorentz(eps=4.0, theta=1.0, w2t2=3.0)
    assert pulses.reduced_profile(p, 2.0)(1.0) == pytest.approx(-math.exp(-3.0), rel=1e-14)
    with pytest.raises(InvalidSpecError):
        pulses.reduced_profile(p, 0.0)


def test_phi_zero_pulse_and_step():
    assert pulses.phi(Pulse(QUARTIC, 0.0, 2.0, 1.0), 0.7) == 0.7
    assert pulses.phi(StepProfile(0.5, 1.0), 2.0) == 1.5
    assert pulses.phi(StepProfile(0.5, 1.0), 0.5) == 0.5
    with pytest.raises(DomainError):
        pulses.phi(StepProfile(0.5, 1.0), -1.0)


def test_phi_smooth_approaches_step():
    theta = 1.0
    w2t2 = 4.0  # Omega^4 theta^4 = 16
    eps = pulses.amplitude_for_lambda(1.0, 1.0, theta, w2t2)
    p = Pulse.from_omega2theta2(QUARTIC, eps, theta, w2t2)
    assert pulses.phi(p, 0.0, 1.0) == 0.0
    assert pulses.phi(p, 2 * theta, 1.0) == pytest.approx(theta, rel=0.02)
    # the smoothed kick overshoots the step by about 3 / (16 Omega^4 theta^4)
    assert pulses.phi(p, 2 * theta, 1.0) == pytest.approx(theta * (1 - 3 / 256), rel=2e-3)


def test_phi_is_continuous_and_tends_to_step():
    theta = 1.0
    for w2t2, tol in ((2.0, 0.05), (6.0, 0.01)):
        eps = pulses.amplitude_for_lambda(0.5, 1.0, theta, w2t2)
        p = Pulse.from_omega2theta2(QUARTIC, eps, theta, w2t2)
        width = 1.0 / (p.omega ** 2 * theta)
        for tau in (0.3, 0.6, 1.5, 2.0):
            if abs(tau - theta) > 4 * width:
                assert pulses.phi(p, tau, 1.0) == pytest.approx(pulses.phi(StepProfile(0.5, theta), tau), abs=tol)
        taus = np.linspace(0.9, 1.1, 41)
        vals = np.array([pulses.phi(p, t, 1.0) for t in taus])
        assert np.max(np.abs(np.diff(vals))) < 0.5 * 0.5  # no jump larger than half the step


def test_effective_amplitude_examples():
    p = Pulse.from_omega2theta2(QUARTIC, 1e-6, 1.0, 4.0)
    assert pulses.effective_amplitude(p, 1.0) == pytest.approx(math.sqrt(math.pi) / 8 * 1e-6 * math.exp(16))
    assert pulses.effective_amplitude(p, 1.0) == pytest.approx(1.969, rel=1e-3)
    assert pulses.effective_amplitude(Pulse.from_omega2theta2(QUARTIC, 0.0, 1.0, 4.0), 1.0) == 0.0
    lam_t = 1 - 1 / math.sqrt(3)
    assert pulses.amplitude_for_lambda(lam_t, 1.0, 1.0, 4.0) == pytest.approx(2.146e-7, rel=1e-3)


def test_effective_amplitude_warns_outside_regime():
    p = Pulse.from_omega2theta2(QUARTIC, 1e-3, 1.0, 1.0)
    with pytest.warns(RuntimeWarning):
        pulses.effective_amplitude(p, 1.0)
    with pytest.raises(DomainError):
        pulses.effective_amplitude(lorentz(), 1.0)


def test_amplitude_underflow_is_reported():
    with pytest.raises(DomainError):
        pulses.amplitude_for_lambda(0.5, 1.0, 1.0, 32.0)


def test_contour_kick_value():
    assert pulses.contour_kick(lorentz(eps=0.0)) == 0.0
    assert pulses.contour_kick(lorentz()) == pytest.approx(math.pi * math.exp(15), rel=1e-14)
    assert pulses.contour_kick(lorentz()) == pytest.approx(1.027e7, rel=1e-3)


def test_contour_kick_against_residue_oracle():
    p = lorentz(eps=0.7, theta=1.3, w2t2=15.0)
    r = 0.2 * p.theta
    n = 4000
    s = np.arange(n) * 2 * math.pi / n
    z = 1j * p.theta + r * np.exp(1j * s)
    vals = np.array([complex(pulses.evaluate(p, complex(zz))) for zz in z])
    loop = np.sum(vals * 1j * r * np.exp(1j * s)) * 2 * math.pi / n
    assert abs(loop) == pytest.approx(pulses.contour_kick(p), rel=1e-6)


def test_contour_kick_is_pole_prefactor():
    p = lorentz(eps=0.5, theta=1.0, w2t2=15.0)
    w = 1e-9
    pole = pulses.fourier_pole_term(p, w, ignore_step=True)
    assert abs(pole) == pytest.approx(pulses.contour_kick(p), rel=1e-8)


def test_fourier_pole_term():
    p = Pulse(LORENTZ, 1.0, 2.0, 1.0)  # Omega^2 = 4
    assert pulses.fourier_pole_term(p, 4.0) == 0  # theta > w / 2 Omega^2
    assert abs(pulses.fourier_pole_term(p, 16.0)) == pytest.approx(math.pi * math.exp(-12), rel=1e-14)


def _mp_fourier(p, w):
    mpmath.mp.dps = 30
    th, W = mpmath.mpf(p.theta), mpmath.mpf(p.omega)

    def f(t):
        return -p.eps * t * th / (t * t + th * th) * mpmath.exp(-W * W * t * t) * mpmath.sin(w * t)

    return 2j * complex(mpmath.quad(f, [0, th, 4 * th, 20 / W + 4 * th]))


def test_fourier_component_against_mpmath():
    p = lorentz(eps=1.0, theta=1.0, w2t2=15.0)
    w = 3 * p.omega ** 2 * p.theta
    fc = pulses.fourier_component(p, w)
    ref = _mp_fourier(p, w)
    assert fc.method == "asymptotic"
    assert abs(fc.value - ref) <= 0.01 * abs(ref)


def test_fourier_component_inside_window_is_numerical():
    p = lorentz(eps=1.0, theta=1.0, w2t2=15.0)
    w = 2 * p.omega ** 2 * p.theta * 1.01
    fc = pulses.fourier_component(p, w)
    assert fc.method == "numerical"
    ref = _mp_fourier(p, w)
    assert abs(fc.value - ref) <= 1e-6 * abs(ref)
    with pytest.raises(DomainError):
        pulses.fourier_saddle_term(p, 2 * p.omega ** 2 * p.theta)


def test_signal_shapes_within_ten_percent():
    t, yl = pulses.sample(lorentz(), 4001, 3.0)
    _, yo = pulses.sample(Pulse.from_omega2theta2(ODD, 1.0, 1.0, 15.0), 4001, 3.0)
    assert np.max(np.abs(yl - yo)) <= 0.1 * np.max(np.abs(yl))
    assert t[0] == -3.0 and t[-1] == 3.0


def test_contour_kick_warns_outside_regime():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        pulses.contour_kick(lorentz(w2t2=2.0))
    assert any(issubclass(r.category, RuntimeWarning) for r in rec)


def test_kick_fraction_limits():
    eps = pulses.amplitude_for_lambda(1.0, 1.0, 1.0, 5.0)
    p = Pulse.from_omega2theta2(QUARTIC, eps, 1.0, 5.0)
    assert pulses.kick_fraction(p, 0.0) == 0.0
    # expanding 1 / xi about theta gives a total area of 1 + 3 / (16 Omega^4 theta^4)
    assert pulses.kick_fraction(p, 3.0) == pytest.approx(1 + 3 / (16 * 25.0), abs=1e-3)
    assert cmath.isclose(pulses.kick_fraction(p, 1.0), 0.5, abs_tol=0.05)
