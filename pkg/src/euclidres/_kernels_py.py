"""Pure-Python complex-time integrator (reference implementation and fallback).

The compiled twin in ``_kernels.pyx`` follows this file line by line; keep the
two in step.

State vector ``y = [x, p, W, L, K]`` along a polyline in the complex time plane:

* ``x`` coordinate and ``p = m dx/dt`` momentum
* ``W = int field * dx/dt dt`` work done by the field
* ``L = int (p^2/2m - V(x) + (x - x_ref) field) dt`` action integral
* ``K = int field dt`` accumulated field integral
"""
from __future__ import annotations

import cmath
import math

from .errors import IntegrationError

# potential codes
POT_CALLABLE = 0
POT_TRIANGULAR = 1  # params: V, E0           V - E0 x
POT_COULOMB = 2  # params: beta                beta / x
POT_CUBIC = 3  # params: a, b                  a x^2 - b x^3
POT_PCHIP = 4  # params: n, breaks[n+1], coefficients c[4][n] (scipy PPoly layout)

# pulse codes
PULSE_NONE = 0
PULSE_QUARTIC = 1  # params: eps, omega, theta
PULSE_LORENTZ = 2
PULSE_ODD = 3

# Dormand-Prince 5(4) tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40

NSTATE = 5


def _pchip_index(params, xr):
    n = int(params[0])
    lo, hi = 0, n - 1
    # breaks are params[1 : n + 2]; clamp outside the table
    if xr <= params[1]:
        return 0
    if xr >= params[n + 1]:
        return n - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if params[1 + mid] <= xr:
            lo = mid
        else:
            hi = mid - 1
    return lo


def potential(code, params, x, fV=None, fdV=None):
    """Return ``(V(x), V'(x))`` for complex ``x``."""
    if code == POT_TRIANGULAR:
        return params[0] - params[1] * x, -params[1] + 0j
    if code == POT_COULOMB:
        return params[0] / x, -params[0] / (x * x)
    if code == POT_CUBIC:
        a, b = params[0], params[1]
        return a * x * x - b * x * x * x, 2 * a * x - 3 * b * x * x
    if code == POT_PCHIP:
        n = int(params[0])
        i = _pchip_index(params, x.real)
        d = x - params[1 + i]
        base = n + 2
        c0 = params[base + i]
        c1 = params[base + n + i]
        c2 = params[base + 2 * n + i]
        c3 = params[base + 3 * n + i]
        return ((c0 * d + c1) * d + c2) * d + c3, (3 * c0 * d + 2 * c1) * d + c2
    if code == POT_CALLABLE:
        return complex(fV(x)), complex(fdV(x))
    raise ValueError(f"unknown potential code {code}")


def field(code, params, t):
    """Pulse field at complex time ``t``."""
    if code == PULSE_NONE:
        return 0j
    eps, w, th = params[0], params[1], params[2]
    if code == PULSE_QUARTIC:
        t2 = t * t
        w4 = w ** 4
        return -eps * cmath.exp(-w4 * t2 * t2 - 2 * w4 * th * th * t2)
    if code == PULSE_LORENTZ:
        return -eps * t * th / (t * t + th * th) * cmath.exp(-w * w * t * t)
    if code == PULSE_ODD:
        return -eps * (t / th) * cmath.exp(-w * w * t * t)
    raise ValueError(f"unknown pulse code {code}")


def _rhs(t, y, delta, m, x_ref, pcode, pparams, fcode, fparams, fV, fdV):
    x, p = y[0], y[1]
    V, dV = potential(pcode, pparams, x, fV, fdV)
    f = field(fcode, fparams, t)
    v = p / m
    return [
        delta * v,
        delta * (f - dV),
        delta * f * v,
        delta * (0.5 * p * v - V + (x - x_ref) * f),
        delta * f,
    ]


def integrate_polyline(
    vertices,
    y0,
    m,
    x_ref,
    pcode,
    pparams,
    fcode,
    fparams,
    rtol=1e-9,
    atol=1e-12,
    max_step=0.05,
    max_steps=200000,
    fV=None,
    fdV=None,
):
    """Integrate the state along the straight segments joining ``vertices``.

    Returns ``(times, states, segment_index, n_rhs)`` with one entry per
    accepted step plus the initial point. ``max_step`` is a fraction of each
    segment.
    """
    y = [complex(v) for v in y0]
    times = [complex(vertices[0])]
    states = [list(y)]
    segs = [0]
    nfev = 0
    h_min = 1e-13
    args = (m, x_ref, pcode, pparams, fcode, fparams, fV, fdV)
    for k in range(len(vertices) - 1):
        a = complex(vertices[k])
        delta = complex(vertices[k + 1]) - a
        s = 0.0
        h = min(max_step, 0.01)
        k1 = _rhs(a, y, delta, *args)
        nfev += 1
        steps = 0
        while s < 1.0:
            if steps > max_steps:
                raise IntegrationError("step budget exhausted", a + s * delta, y[0])
            if s + h > 1.0:
                h = 1.0 - s
            t = a + s * delta
            yt = [y[i] + h * A21 * k1[i] for i in range(NSTATE)]
            k2 = _rhs(a + (s + C2 * h) * delta, yt, delta, *args)
            yt = [y[i] + h * (A31 * k1[i] + A32 * k2[i]) for i in range(NSTATE)]
            k3 = _rhs(a + (s + C3 * h) * delta, yt, delta, *args)
            yt = [y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]) for i in range(NSTATE)]
            k4 = _rhs(a + (s + C4 * h) * delta, yt, delta, *args)
            yt = [y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]) for i in range(NSTATE)]
            k5 = _rhs(a + (s + C5 * h) * delta, yt, delta, *args)
            yt = [
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i])
                for i in range(NSTATE)
            ]
            k6 = _rhs(a + (s + h) * delta, yt, delta, *args)
            ynew = [
                y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i])
                for i in range(NSTATE)
            ]
            k7 = _rhs(a + (s + h) * delta, ynew, delta, *args)
            nfev += 6
            err = 0.0
            for i in range(NSTATE):
                e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
                sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
                r = abs(e) / sc
                if r > err:
                    err = r
            if not math.isfinite(err):
                err = 1e10
            if err <= 1.0:
                s += h
                y = ynew
                k1 = k7
                steps += 1
                times.append(a + s * delta if s < 1.0 else complex(vertices[k + 1]))
                states.append(list(y))
                segs.append(k)
                fac = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
            else:
                fac = max(0.2, 0.9 * err ** -0.2)
            h = min(h * fac, max_step)
            if h < h_min and s < 1.0:
                raise IntegrationError("step size underflow", t, y[0])
    return times, states, segs, nfev
