"""Drift MLE and local likelihood quantities of an observed path.

All stochastic time integrals use left-point (Ito) sums and the delay
average ``Q`` is the trapezoid window quadrature shared bit for bit with
the simulation drift.  With that single convention the discrete path obeys
the same algebra as the continuous model with zero remainder:

    a_hat - a           = (sum Q dw) / (sum Q**2 dt)
    loglik ratio (dX)   = loglik ratio (dW)
    r**-1 (a_hat - a)   = Delta / J
    log LR(a -> a+r*h)  = h*Delta - h**2*J/2

so the quadratic structure of the likelihood is exact at the discrete
level, not asymptotic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, MissingIncrements
from .paths import SamplePath, trailing_averages
from .roots import scaling


@dataclass(frozen=True)
class EstimateResult:
    """Drift estimate with its defining integrals."""

    a_hat: float
    numerator: float
    denominator: float
    T: float
    dt: float


@dataclass(frozen=True)
class LocalQuadratic:
    """Scaled score, observed information, and the quadratic log-ratio."""

    a_ref: float
    r: float
    delta: float
    j: float
    h: float
    loglik: float


def delay_integral(path: SamplePath) -> np.ndarray:
    """Delay average ``Q(t_k)`` of the path on [0, T].

    Identical to the quadrature used inside the simulation drift.
    """
    return trailing_averages(path.x, path.m, path.dt)


def _sums(path: SamplePath):
    q = delay_integral(path)
    qn = q[:-1]
    dx = np.diff(path.x_obs())
    num = float(np.dot(qn, dx))
    den = float(np.dot(qn, qn)) * path.dt
    return q, num, den


def mle(path: SamplePath) -> EstimateResult:
    """Maximum likelihood estimate of the drift coefficient.

    Ratio of the Ito integral of Q against dX to the time integral of
    Q**2; raises :class:`DegenerateDenominator` when the latter is not
    strictly positive.
    """
    _, num, den = _sums(path)
    if not den > 0.0:
        raise DegenerateDenominator("the observed information integral is not positive")
    return EstimateResult(a_hat=num / den, numerator=num, denominator=den, T=path.T, dt=path.dt)


def local_quadratic(path: SamplePath, a_ref: float, h: float) -> LocalQuadratic:
    """Score/information pair of the local experiment at ``a_ref``.

    The path must have been simulated under drift ``a_ref`` with retained
    increments; ``delta`` uses the true increments, so this is the
    oracle-side object (the observable side is :func:`loglik_ratio`).
    """
    if path.dw is None:
        raise MissingIncrements("local_quadratic needs the retained Brownian increments")
    q, _, den = _sums(path)
    r = scaling(a_ref, path.T)
    delta = r * float(np.dot(q[:-1], path.dw))
    j = r * r * den
    return LocalQuadratic(a_ref=a_ref, r=r, delta=delta, j=j, h=h, loglik=quad_loglik(h, delta, j))


def quad_loglik(h: float, delta: float, j: float) -> float:
    """The quadratic form ``h*delta - h**2*j/2`` (single canonical spelling)."""
    return h * delta - 0.5 * h * h * j


def loglik_ratio(path: SamplePath, a: float, a_tilde: float) -> float:
    """Log likelihood ratio of drift ``a_tilde`` against ``a`` on the path.

    The observable (dX) form: computable without knowing the true drift or
    the increments.
    """
    _, num, den = _sums(path)
    g = a_tilde - a
    return g * num - 0.5 * (a_tilde * a_tilde - a * a) * den


def loglik_ratio_dw(path: SamplePath, a: float, a_tilde: float) -> float:
    """Diagnostic dW form of the log likelihood ratio.

    Valid when the path was simulated under drift ``a`` and the increments
    were retained; equals :func:`loglik_ratio` up to float rounding.
    """
    if path.dw is None:
        raise MissingIncrements("the dW form needs the retained Brownian increments")
    q, _, den = _sums(path)
    g = a_tilde - a
    return g * float(np.dot(q[:-1], path.dw)) - 0.5 * g * g * den
