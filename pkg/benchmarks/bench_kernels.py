"""Time the compiled and pure-Python contour integrators on the same problems.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one line per case with the best wall time of each backend, the speed-up
and the largest state difference between the two.
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from euclidres import _kernels_py, kernels, smooth
from euclidres.pulses import LORENTZ, Pulse


def _cases():
    cubic = smooth.PotentialModel.cubic(1.0, 0.02, 1.0)
    E = 60.0
    theta = 0.8 * smooth.static_traversal_time(cubic, E)
    pulse = Pulse.from_omega2theta2(LORENTZ, 1e-4, theta, 15.0)
    dE = smooth.deltaE_of_theta(cubic, E, theta)
    x0, x1 = smooth.matching_points(cubic, E, dE)
    verts, _ = smooth.contour_vertices(theta, pulse.omega, "rectangle")
    yield "cubic well, lorentz loop", verts, [x1, 0, 0, 0, 0], 1.0, x0, kernels.POT_CUBIC, (1.0, 0.02), \
        kernels.PULSE_LORENTZ, (pulse.eps, pulse.omega, pulse.theta)
    t00 = math.sqrt(2.0)
    yield "triangular, static", [0j, 1j * t00], [1.0, 0, 0, 0, 0], 1.0, 0.0, kernels.POT_TRIANGULAR, \
        (1.0, 1.0), kernels.PULSE_NONE, (0.0, 1.0, 1.0)


def _best(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.BACKEND != "cython":
        print("compiled kernels unavailable; only the pure-Python backend can be timed")
    for name, verts, y0, m, x_ref, pc, pp, fc, fp in _cases():
        def run(impl):
            return impl(verts, y0, m, x_ref, pc, list(pp), fc, list(fp), max_step=0.02)

        t_py, r_py = _best(lambda: run(_kernels_py.integrate_polyline), args.repeat)
        line = f"{name:28s} python {t_py * 1e3:9.2f} ms  ({r_py[3]} rhs calls)"
        if kernels.BACKEND == "cython":
            t_c, r_c = _best(lambda: run(kernels.integrate_polyline), args.repeat)
            diff = float(np.max(np.abs(np.array(r_py[1]) - np.array(r_c[1]))))
            line += f"  cython {t_c * 1e3:9.2f} ms  speed-up {t_py / t_c:6.1f}x  max |state diff| {diff:.1e}"
        print(line)


if __name__ == "__main__":
    main()
