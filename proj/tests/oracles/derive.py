"""Independent reference values for the unit tests (scipy / mpmath).

Run: python3 tests/oracles/derive.py
The printed numbers are frozen into the C++ tests.
"""
import math

import numpy as np
from scipy.integrate import solve_ivp


def rhs(geom, a, gamma):
    def f(x, u):
        z, dz, v = u
        forcing = gamma * x**a * z ** (-1.0 - a)
        if geom == "planar":
            return [dz, v, forcing]
        return [dz, v - dz / x, forcing]
    return f


def start(geom, a, gamma, x0):
    if geom == "planar":
        c = gamma / ((1 + a) * (2 + a) * (3 + a))
        return [1 - x0**2 / 2 + c * x0 ** (3 + a), -x0 + (3 + a) * c * x0 ** (2 + a),
                -1 + (3 + a) * (2 + a) * c * x0 ** (1 + a)]
    c = gamma / ((1 + a) * (3 + a) ** 2)
    return [1 - x0**2 / 4 + c * x0 ** (3 + a), -x0 / 2 + (3 + a) * c * x0 ** (2 + a),
            -1 + (3 + a) ** 2 * c * x0 ** (1 + a)]


def shot(geom, lam, gamma, delta, x0=1e-4):
    a = 1.0 / lam
    hit = lambda x, u: u[0] - delta
    hit.terminal, hit.direction = True, -1
    turn = lambda x, u: u[1]
    turn.terminal, turn.direction = True, 1
    sol = solve_ivp(rhs(geom, a, gamma), (x0, 20.0), start(geom, a, gamma, x0), method="DOP853",
                    rtol=1e-12, atol=1e-13 * delta, events=[hit, turn])
    if sol.t_events[0].size:
        return "hit", sol.t_events[0][0], sol.y_events[0][0][1]
    return "turn", None, None


def reaches(geom, lam, gamma, delta, x0=1e-4):
    """True when z gets down to delta: either it crosses delta / 10 or its
    minimum (located as the upward zero of z') lies at or below delta. A
    brief dip below delta inside one step is invisible to sign-change event
    detection on z - delta, hence the minimum test."""
    a = 1.0 / lam
    deep = lambda x, u: u[0] - 0.1 * delta
    deep.terminal, deep.direction = True, -1
    turn = lambda x, u: u[1]
    turn.terminal, turn.direction = True, 1
    sol = solve_ivp(rhs(geom, a, gamma), (x0, 20.0), start(geom, a, gamma, x0), method="DOP853",
                    rtol=1e-12, atol=1e-13 * delta, events=[deep, turn])
    if sol.t_events[0].size:
        return True, None
    return sol.y_events[1][0][0] <= delta, sol.t_events[1][0]


def gamma0(geom, lam, delta):
    lo, hi = 0.0, 4.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if reaches(geom, lam, mid, delta)[0]:
            lo = mid
        else:
            hi = mid
    # at the boundary z touches delta at its minimum; y is that touch point
    return lo, reaches(geom, lam, hi, delta)[1]


def gamma_theta(geom, lam, delta, theta):
    free = math.sqrt(2 * (1 - delta)) if geom == "planar" else math.sqrt(1 - delta)
    target = -theta * free
    lo, hi = 0.0, gamma0(geom, lam, delta)[0]
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        kind, y, s = shot(geom, lam, mid, delta)
        if kind == "hit" and s < target:
            lo = mid
        else:
            hi = mid
    return lo, shot(geom, lam, lo, delta)[1]


if __name__ == "__main__":
    for geom in ("planar", "radial"):
        for d in (1e-2, 1e-4):
            g, y = gamma0(geom, 2.0, d)
            print(f"{geom} lambda=2 delta={d:g}: gamma0={g:.10f} y={y:.10f}")
        g, y = gamma_theta(geom, 2.0, 1e-4, 0.5)
        print(f"{geom} lambda=2 delta=1e-4 theta=0.5: gamma={g:.10f} y={y:.10f}")
    for lam in (1.0, 0.8):
        g, y = gamma0("planar", lam, 1e-4)
        print(f"planar lambda={lam} delta=1e-4: gamma0={g:.10f}")
    # gamma = -1 dewetting shot
    print("planar lambda=2 gamma=-1 delta=1e-10:", shot("planar", 2.0, -1.0, 1e-10))

    # delta -> 0 limits by Aitken extrapolation over delta = 1e-8, 1e-9, 1e-10
    for geom in ("planar", "radial"):
        gs, ys = zip(*(gamma0(geom, 2.0, d) for d in (1e-8, 1e-9, 1e-10)))
        aitken = lambda v: (v[0] * v[2] - v[1] ** 2) / (v[0] + v[2] - 2 * v[1])
        print(f"{geom} lambda=2 limit: gamma0={aitken(gs):.10f} y0={aitken(ys):.10f} "
              f"(levels {', '.join(f'{g:.10f}' for g in gs)})")
