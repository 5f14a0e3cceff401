# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled complex-time integrator; mirrors ``_kernels_py`` step for step."""
import numpy as np

from .errors import IntegrationError

cdef extern from "<complex.h>" nogil:
    double complex cexp(double complex z)
    double cabs(double complex z)
    double creal(double complex z)

cdef extern from "<math.h>" nogil:
    double pow(double x, double y)
    int isfinite(double x)

DEF NSTATE = 5

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40


cdef class _Model:
    cdef int pcode, fcode
    cdef double[::1] pp
    cdef double[::1] fp
    cdef double m
    cdef double complex x_ref
    cdef object fV, fdV

    cdef int pchip_index(self, double xr):
        cdef int n = <int> self.pp[0]
        cdef int lo = 0, hi = n - 1, mid
        if xr <= self.pp[1]:
            return 0
        if xr >= self.pp[n + 1]:
            return n - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.pp[1 + mid] <= xr:
                lo = mid
            else:
                hi = mid - 1
        return lo

    cdef int potential(self, double complex x, double complex* V, double complex* dV) except -1:
        cdef double a, b
        cdef int n, i, base
        cdef double complex d
        if self.pcode == 1:
            V[0] = self.pp[0] - self.pp[1] * x
            dV[0] = -self.pp[1]
        elif self.pcode == 2:
            V[0] = self.pp[0] / x
            dV[0] = -self.pp[0] / (x * x)
        elif self.pcode == 3:
            a = self.pp[0]
            b = self.pp[1]
            V[0] = a * x * x - b * x * x * x
            dV[0] = 2 * a * x - 3 * b * x * x
        elif self.pcode == 4:
            n = <int> self.pp[0]
            i = self.pchip_index(creal(x))
            d = x - self.pp[1 + i]
            base = n + 2
            V[0] = ((self.pp[base + i] * d + self.pp[base + n + i]) * d + self.pp[base + 2 * n + i]) * d + self.pp[base + 3 * n + i]
            dV[0] = (3 * self.pp[base + i] * d + 2 * self.pp[base + n + i]) * d + self.pp[base + 2 * n + i]
        elif self.pcode == 0:
            V[0] = complex(self.fV(x))
            dV[0] = complex(self.fdV(x))
        else:
            raise ValueError(f"unknown potential code {self.pcode}")
        return 0

    cdef double complex field(self, double complex t):
        cdef double eps, w, th, w4
        cdef double complex t2
        if self.fcode == 0:
            return 0
        eps = self.fp[0]
        w = self.fp[1]
        th = self.fp[2]
        if self.fcode == 1:
            t2 = t * t
            w4 = w * w * w * w
            return -eps * cexp(-w4 * t2 * t2 - 2 * w4 * th * th * t2)
        if self.fcode == 2:
            return -eps * t * th / (t * t + th * th) * cexp(-w * w * t * t)
        return -eps * (t / th) * cexp(-w * w * t * t)

    cdef int rhs(self, double complex t, double complex* y, double complex delta, double complex* out) except -1:
        cdef double complex V, dV, f, v
        self.potential(y[0], &V, &dV)
        f = self.field(t)
        v = y[1] / self.m
        out[0] = delta * v
        out[1] = delta * (f - dV)
        out[2] = delta * f * v
        out[3] = delta * (0.5 * y[1] * v - V + (y[0] - self.x_ref) * f)
        out[4] = delta * f
        return 0


def integrate_polyline(
    vertices,
    y0,
    double m,
    x_ref,
    int pcode,
    pparams,
    int fcode,
    fparams,
    double rtol=1e-9,
    double atol=1e-12,
    double max_step=0.05,
    long max_steps=200000,
    fV=None,
    fdV=None,
):
    """Integrate the state along the straight segments joining ``vertices``."""
    if fcode not in (0, 1, 2, 3):
        raise ValueError(f"unknown pulse code {fcode}")
    cdef _Model mod = _Model()
    mod.pcode = pcode
    mod.fcode = fcode
    mod.pp = np.ascontiguousarray(pparams if len(pparams) else [0.0], dtype=np.float64)
    mod.fp = np.ascontiguousarray(fparams if len(fparams) else [0.0, 0.0, 0.0], dtype=np.float64)
    mod.m = m
    mod.x_ref = x_ref
    mod.fV = fV
    mod.fdV = fdV

    cdef double complex y[NSTATE]
    cdef double complex yt[NSTATE]
    cdef double complex ynew[NSTATE]
    cdef double complex k1[NSTATE]
    cdef double complex k2[NSTATE]
    cdef double complex k3[NSTATE]
    cdef double complex k4[NSTATE]
    cdef double complex k5[NSTATE]
    cdef double complex k6[NSTATE]
    cdef double complex k7[NSTATE]
    cdef int i, k
    cdef long steps, nfev = 0
    cdef double s, h, err, r, sc, fac, h_min = 1e-13
    cdef double complex a, delta, t, e
    cdef list verts = [complex(v) for v in vertices]

    for i in range(NSTATE):
        y[i] = y0[i]
    times = [verts[0]]
    states = [[y[i] for i in range(NSTATE)]]
    segs = [0]
    for k in range(len(verts) - 1):
        a = verts[k]
        delta = verts[k + 1] - a
        s = 0.0
        h = min(max_step, 0.01)
        mod.rhs(a, y, delta, k1)
        nfev += 1
        steps = 0
        while s < 1.0:
            if steps > max_steps:
                raise IntegrationError("step budget exhausted", a + s * delta, y[0])
            if s + h > 1.0:
                h = 1.0 - s
            t = a + s * delta
            for i in range(NSTATE):
                yt[i] = y[i] + h * A21 * k1[i]
            mod.rhs(a + (s + C2 * h) * delta, yt, delta, k2)
            for i in range(NSTATE):
                yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
            mod.rhs(a + (s + C3 * h) * delta, yt, delta, k3)
            for i in range(NSTATE):
                yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
            mod.rhs(a + (s + C4 * h) * delta, yt, delta, k4)
            for i in range(NSTATE):
                yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
            mod.rhs(a + (s + C5 * h) * delta, yt, delta, k5)
            for i in range(NSTATE):
                yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i])
            mod.rhs(a + (s + h) * delta, yt, delta, k6)
            for i in range(NSTATE):
                ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i])
            mod.rhs(a + (s + h) * delta, ynew, delta, k7)
            nfev += 6
            err = 0.0
            for i in range(NSTATE):
                e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
                sc = atol + rtol * max(cabs(y[i]), cabs(ynew[i]))
                r = cabs(e) / sc
                if r > err:
                    err = r
            if not isfinite(err):
                err = 1e10
            if err <= 1.0:
                s += h
                for i in range(NSTATE):
                    y[i] = ynew[i]
                    k1[i] = k7[i]
                steps += 1
                times.append(a + s * delta if s < 1.0 else verts[k + 1])
                states.append([y[i] for i in range(NSTATE)])
                segs.append(k)
                fac = 5.0 if err == 0 else min(5.0, 0.9 * pow(err, -0.2))
            else:
                fac = max(0.2, 0.9 * pow(err, -0.2))
            h = min(h * fac, max_step)
            if h < h_min and s < 1.0:
                raise IntegrationError("step size underflow", t, y[0])
    return times, states, segs, nfev
