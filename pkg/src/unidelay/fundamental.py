"""Fundamental solution of the deterministic delay equation.

Solves ``x'(t) = a * integral of x over [t-1, t]`` with initial data 0 on
``[-1, 0)`` and 1 at 0, via the equivalent system

    x'(t) = a * z(t),      z'(t) = x(t) - x(t-1),      z(0) = 0,

stepped by classical Runge-Kutta with linear interpolation of the history
term at half-steps.  The jump of the initial function at 0 is a single grid
point: the delay-window quadrature treats ``[-1, 0)`` as exactly zero, and
the trapezoid weight at the left endpoint of ``[0, t]`` carries the jump
consistently.  Because the grid step divides the unit delay, no step ever
straddles the breaking point t = 1.

Also provides the delay average ``y(t)`` of the fundamental solution, the
information limit ``integral of y**2 over [0, inf)`` for the ergodic drift
range, and the leading-term expansion used as a large-time oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .errors import InvalidGrid, NoConvergence, UnsupportedRegime
from .roots import Regime, classify_regime, residue_constants


def grid_steps(value: float, dt: float, what: str = "value") -> int:
    """Number of steps of size dt in ``value``; InvalidGrid if not exact."""
    if not dt > 0:
        raise InvalidGrid("dt must be positive")
    n = int(round(value / dt))
    if n <= 0 or abs(n * dt - value) > 1e-9:
        raise InvalidGrid(f"dt={dt!r} does not divide {what}={value!r} exactly")
    return n


@dataclass
class FundamentalSolution:
    """Grid values of the fundamental solution and its delay average.

    ``x`` lives on the uniform grid over ``[-1, t_max]``; ``y`` on
    ``[0, t_max]``.  ``decay_estimate`` is the empirical exponential rate
    fitted to the tail envelope, handy for truncation bounds.
    """

    a: float
    dt: float
    t_max: float
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    decay_estimate: float

    @property
    def t_x(self) -> np.ndarray:
        return -1.0 + self.dt * np.arange(len(self.x))

    @property
    def t_y(self) -> np.ndarray:
        return self.dt * np.arange(len(self.y))

    def x_at(self, t: float) -> float:
        i = grid_steps(t + 1.0, self.dt, "t+1")
        return float(self.x[i])

    def y_at(self, t: float) -> float:
        if t == 0.0:
            return float(self.y[0])
        i = grid_steps(t, self.dt, "t")
        return float(self.y[i])


def _delay_average_from_values(x: np.ndarray, dt: float) -> np.ndarray:
    m = grid_steps(1.0, dt, "the unit delay")
    n_pos = len(x) - 1 - m
    xp = x[m:]
    cum = np.empty(n_pos + 1)
    cum[0] = 0.0
    np.cumsum((xp[1:] + xp[:-1]) * (dt / 2.0), out=cum[1:])
    y = np.empty(n_pos + 1)
    k = min(m, n_pos)
    y[: k + 1] = cum[: k + 1]
    if n_pos > m:
        y[m + 1 :] = cum[m + 1 :] - cum[1 : n_pos - m + 1]
    return y


def delay_average(fs: FundamentalSolution) -> np.ndarray:
    """Trapezoid quadrature of x over the trailing unit window at each node.

    Idempotent with ``fs.y``; the part of the window before time 0 counts
    as exactly zero.
    """
    return _delay_average_from_values(fs.x, fs.dt)


def _fit_decay(x: np.ndarray, dt: float, t_max: float) -> float:
    m = grid_steps(1.0, dt, "the unit delay")
    n_windows = min(6, int(t_max))
    if n_windows < 2:
        return 0.0
    sups, centers = [], []
    n = len(x) - 1
    for j in range(n_windows):
        hi = n - j * m
        lo = hi - m
        s = float(np.abs(x[lo : hi + 1]).max())
        if s <= 0.0:
            continue
        sups.append(math.log(s))
        centers.append(t_max - j - 0.5)
    if len(sups) < 2:
        return 0.0
    slope = np.polyfit(centers, sups, 1)[0]
    return float(slope)


def fundamental_solution(a: float, t_max: float, dt: float) -> FundamentalSolution:
    """Fundamental solution on ``[-1, t_max]`` at grid step ``dt``.

    Requires dt to divide both the unit delay and ``t_max`` exactly and
    ``t_max >= 1``.
    """
    if t_max < 1.0:
        raise InvalidGrid("t_max must be at least 1")
    m = grid_steps(1.0, dt, "the unit delay")
    n_pos = grid_steps(t_max, dt, "t_max")
    n_total = m + n_pos

    x = [0.0] * (n_total + 1)
    x[m] = 1.0
    z = 0.0
    two_m = 2 * m
    half_dt = 0.5 * dt
    for i in range(m, n_total):
        xi = x[i]
        if i + 1 <= two_m:
            d1 = 0.0
            dmid = 0.0
            d2 = 0.0
        else:
            jm = i - m
            d1 = x[jm]
            d2 = x[jm + 1]
            dmid = 0.5 * (d1 + d2)
        k1x = a * z
        k1z = xi - d1
        k2x = a * (z + half_dt * k1z)
        k2z = (xi + half_dt * k1x) - dmid
        k3x = a * (z + half_dt * k2z)
        k3z = (xi + half_dt * k2x) - dmid
        k4x = a * (z + dt * k3z)
        k4z = (xi + dt * k3x) - d2
        x[i + 1] = xi + dt * (k1x + 2.0 * (k2x + k3x) + k4x) / 6.0
        z += dt * (k1z + 2.0 * (k2z + k3z) + k4z) / 6.0

    xa = np.asarray(x)
    y = _delay_average_from_values(xa, dt)
    decay = _fit_decay(xa, dt, t_max)
    return FundamentalSolution(a=a, dt=dt, t_max=t_max, x=xa, y=y, decay_estimate=decay)


def _information_at_dt(a: float, dt: float, rel_tol: float) -> float:
    t_max = 20.0
    prev = None
    while t_max <= 640.0:
        fs = fundamental_solution(a, t_max, dt)
        val = float(trapezoid(fs.y * fs.y, dx=dt))
        if prev is not None and abs(val - prev) <= rel_tol * abs(val):
            return val
        prev = val
        t_max *= 2.0
    raise NoConvergence("horizon exceeded 640 before the tail integral stabilized")


def fisher_limit(a: float, rel_tol: float = 1e-6) -> float:
    """Limit information ``integral of y(t)**2 over [0, inf)``.

    Defined (finite) only in the ergodic drift range ``(-pi**2/2, 0)``.
    The horizon doubles from 20 and the grid step halves from 1e-2 until
    both ladders stabilize to ``rel_tol`` relatively.
    """
    if classify_regime(a) is not Regime.LAN:
        raise UnsupportedRegime("the information integral diverges outside (-pi**2/2, 0)")
    dt = 1e-2
    prev = None
    for _ in range(8):
        val = _information_at_dt(a, dt, rel_tol)
        if prev is not None and abs(val - prev) <= rel_tol * abs(val):
            if not val > 0.0:
                raise NoConvergence("information integral must be strictly positive")
            return val
        prev = val
        dt *= 0.5
    raise NoConvergence("grid refinement did not stabilize the information integral")


def asymptotic_form(a: float, t: float) -> float:
    """Leading term ``psi(t) * exp(v0*t)`` of the fundamental solution.

    Intended as a large-time oracle against :func:`fundamental_solution`;
    supported in the same drift ranges as the residue constants.
    """
    rd = residue_constants(a)
    if rd.kind == "real_root":
        return rd.psi_real * math.exp(rd.v0 * t)
    return (rd.a0 * math.cos(rd.kappa0 * t) + rd.b0 * math.sin(rd.kappa0 * t)) * math.exp(
        rd.v0 * t
    )
