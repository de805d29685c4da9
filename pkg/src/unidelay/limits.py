"""Samplers for the five limit laws of the scaled estimation error.

* ergodic drift: centered Gaussian with variance ``1/J_a``;
* zero drift: the unit-root ratio ``int W dW / int W**2 dt`` on [0, 1];
* critical drift: a two-dimensional Wiener functional mixing a Levy area
  with the radial Ito integral;
* positive drift: ``Z/sqrt(J)`` with ``J`` proportional to the square of a
  Gaussian functional ``U`` of the initial segment and a discounted Wiener
  integral;
* strongly negative drift: ``Z/sqrt(J(d))`` where ``J(d)`` integrates the
  squared phase-shifted stationary Gaussian sinusoid process.

Every sampler is deterministic under a fixed seed.  Wiener integrals over
``[0, inf)`` are truncated where the exponential weight has decayed below
1e-8 of its initial value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .errors import InvalidPhase, NonpositiveInformation, UnsupportedRegime
from .paths import InitialSegment, segment_kernel_coeffs
from .roots import Regime, classify_regime, leading_root, residue_constants

#: Relative weight below which the discounted Wiener integrals are cut off.
TAIL_CUTOFF = 1e-8


@dataclass(eq=False)
class LimitSample:
    """A batch of limit-law draws plus the knobs that produced it."""

    regime: Regime
    values: np.ndarray = field(repr=False)
    n: int
    meta: dict


def sample_lan_limit(j_a: float, n: int, seed) -> LimitSample:
    """n draws of N(0, 1/j_a)."""
    if not j_a > 0.0:
        raise NonpositiveInformation("the information value must be strictly positive")
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(n) / math.sqrt(j_a)
    return LimitSample(Regime.LAN, vals, n, {"j": j_a, "seed": seed})


def df_functional(increments: np.ndarray) -> np.ndarray:
    """Unit-root ratio of a discretized Wiener path from its increments.

    Left-point numerator ``sum W dW``; trapezoid denominator of ``W**2``.
    Accepts one path (1-D) or a batch (2-D, one path per row).
    """
    arr = np.asarray(increments, dtype=float)
    g = np.atleast_2d(arr)
    m = g.shape[1]
    w = np.zeros((g.shape[0], m + 1))
    np.cumsum(g, axis=1, out=w[:, 1:])
    num = np.einsum("ij,ij->i", w[:, :-1], g)
    den = trapezoid(w * w, dx=1.0 / m, axis=1)
    out = num / den
    return out if arr.ndim > 1 else float(out[0])


def sample_df_limit(n: int, m: int, seed) -> LimitSample:
    """n draws of the unit-root limit ratio on an m-step grid."""
    if m < 1000:
        raise ValueError("m must be at least 1000")
    rng = np.random.default_rng(seed)
    out = np.empty(n)
    chunk = max(1, 2_000_000 // m)
    filled = 0
    scale = math.sqrt(1.0 / m)
    while filled < n:
        b = min(chunk, n - filled)
        g = rng.standard_normal((b, m)) * scale
        out[filled : filled + b] = df_functional(g)
        filled += b
    return LimitSample(Regime.LAQ_ZERO, out, n, {"m": m, "seed": seed})


def critical_functional(g1: np.ndarray, g2: np.ndarray):
    """Pieces of the critical-point functional from two increment batches.

    Returns ``(levy, radial, denom)``: the Levy-area sum
    ``sum (W1 dW2 - W2 dW1)``, the radial Ito sum
    ``sum (W1 dW1 + W2 dW2)``, and the trapezoid integral of
    ``W1**2 + W2**2``.
    """
    g1 = np.atleast_2d(np.asarray(g1, dtype=float))
    g2 = np.atleast_2d(np.asarray(g2, dtype=float))
    m = g1.shape[1]
    w1 = np.zeros((g1.shape[0], m + 1))
    w2 = np.zeros((g2.shape[0], m + 1))
    np.cumsum(g1, axis=1, out=w1[:, 1:])
    np.cumsum(g2, axis=1, out=w2[:, 1:])
    levy = np.einsum("ij,ij->i", w1[:, :-1], g2) - np.einsum("ij,ij->i", w2[:, :-1], g1)
    radial = np.einsum("ij,ij->i", w1[:, :-1], g1) + np.einsum("ij,ij->i", w2[:, :-1], g2)
    den = trapezoid(w1 * w1 + w2 * w2, dx=1.0 / m, axis=1)
    return levy, radial, den


def sample_critical_limit(n: int, m: int, seed) -> LimitSample:
    """n draws of the critical-point limit ratio on an m-step grid.

    ``(16*pi*levy - 4*pi**2*radial) / (16 * int (W1**2 + W2**2))``.
    """
    if m < 1000:
        raise ValueError("m must be at least 1000")
    rng = np.random.default_rng(seed)
    out = np.empty(n)
    chunk = max(1, 1_000_000 // m)
    filled = 0
    scale = math.sqrt(1.0 / m)
    pi = math.pi
    while filled < n:
        b = min(chunk, n - filled)
        g1 = rng.standard_normal((b, m)) * scale
        g2 = rng.standard_normal((b, m)) * scale
        levy, radial, den = critical_functional(g1, g2)
        out[filled : filled + b] = (16.0 * pi * levy - 4.0 * pi * pi * radial) / (16.0 * den)
        filled += b
    return LimitSample(Regime.LAQ_CRITICAL, out, n, {"m": m, "seed": seed})


def _segment_grid(x0: InitialSegment):
    if x0.kind == "sampled":
        mm = len(x0.samples) - 1
        return x0.samples, 1.0 / mm
    h = 1.0 / 256
    return np.full(257, x0.value), h


def lamn_information_factor(a: float, v0: float) -> float:
    """Constant multiplying ``U**2`` in the mixed-normal information."""
    return (1.0 - math.exp(-v0)) ** 2 / (2.0 * v0 * (v0 * v0 + 2.0 * v0 - a) ** 2)


def lamn_deterministic_part(a: float, x0: InitialSegment, v0: float) -> float:
    """``X0(0) + a * double integral of exp(-v0*(s-u)) * X0(s)``."""
    seg, h = _segment_grid(x0)
    coeffs = segment_kernel_coeffs(seg, h)
    lags = h * np.arange(len(coeffs))
    return x0.at_zero() + a * float(np.dot(coeffs, np.exp(-v0 * lags)))


def _lamn_draws(a: float, x0: InitialSegment, n: int, m_tail: int, seed):
    """Draws of ``Z/sqrt(J)`` plus the information values themselves."""
    v0 = leading_root(a).v0
    det = lamn_deterministic_part(a, x0, v0)
    factor = lamn_information_factor(a, v0)
    s_max = math.log(1.0 / TAIL_CUTOFF) / v0
    ds = s_max / m_tail
    weights = np.exp(-v0 * ds * np.arange(m_tail))
    rng = np.random.default_rng(seed)
    out = np.empty(n)
    j_out = np.empty(n)
    chunk = max(1, 4_000_000 // m_tail)
    filled = 0
    sq = math.sqrt(ds)
    while filled < n:
        b = min(chunk, n - filled)
        u = det + (rng.standard_normal((b, m_tail)) * sq) @ weights
        z = rng.standard_normal(b)
        j = factor * u * u
        out[filled : filled + b] = z / np.sqrt(j)
        j_out[filled : filled + b] = j
        filled += b
    return out, j_out


def sample_lamn_limit(a: float, x0: InitialSegment, n: int, m_tail: int = 2000, seed=None) -> LimitSample:
    """n draws of ``Z/sqrt(J)`` for positive drift.

    ``U`` is built from the initial segment plus the discounted Wiener
    integral on a left-point grid truncated at relative weight 1e-8;
    ``J = c(a) * U**2``; ``Z`` is an independent standard normal.
    """
    if not a > 0.0:
        raise UnsupportedRegime("the mixed-normal limit needs a positive drift")
    vals, _ = _lamn_draws(a, x0, n, m_tail, seed)
    v0 = leading_root(a).v0
    meta = {"a": a, "x0": x0.describe(), "m_tail": m_tail, "seed": seed, "v0": v0}
    return LimitSample(Regime.LAMN, vals, n, meta)


def plamn_phase_period(a: float) -> float:
    """Period of the phase parameter: pi / kappa0(a)."""
    return math.pi / leading_root(a).kappa0


def plamn_window_sinusoid(a: float):
    """Sinusoid coefficients of the delay-average kernel's leading term.

    The estimator functionals are driven by the trailing-window average of
    the path, so the relevant large-time sinusoid is the window integral
    of the fundamental solution's sinusoid:
    ``integral over u in [-1, 0] of phi(t+u) * exp(v0*u) du``.  At a
    characteristic root the window transform equals ``lam0/a``, so the
    complex amplitude is ``2*lam0**2 / (a*(lam0**2 + 2*lam0 - a))``.
    Returns ``(v0, kappa0, ay, by)``.
    """
    rd = residue_constants(a)
    lam = complex(rd.v0, rd.kappa0)
    res_y = lam * lam / (a * (lam * lam + 2.0 * lam - a))
    return rd.v0, rd.kappa0, 2.0 * res_y.real, -2.0 * res_y.imag


def _plamn_draws(a: float, x0: InitialSegment, d: float, n: int, m_tail: int, seed):
    """Draws of ``Z/sqrt(J(d))`` without the phase-range check.

    The sinusoid formula extends verbatim to negative time arguments,
    which ``J(d)`` needs for ``V(d - s)``.
    """
    v0, k0, ay, by = plamn_window_sinusoid(a)

    def phi(t):
        return ay * np.cos(k0 * t) + by * np.sin(k0 * t)

    s_max = math.log(1.0 / TAIL_CUTOFF) / v0
    s_nodes = np.linspace(0.0, s_max, m_tail + 1)
    ds = s_nodes[1] - s_nodes[0]
    sig = s_nodes[:-1]
    tt = d - s_nodes

    det = x0.at_zero() * phi(tt)
    if not x0.is_zero():
        seg, h = _segment_grid(x0)
        coeffs = segment_kernel_coeffs(seg, h)
        lags = h * np.arange(len(coeffs))
        ker = coeffs * np.exp(-v0 * lags)
        det = det + a * (phi(tt[:, None] - lags[None, :]) @ ker)

    mat = phi(tt[:, None] - sig[None, :]) * np.exp(-v0 * sig)[None, :]
    jw = np.exp(-2.0 * v0 * s_nodes)
    wtrap = np.full(m_tail + 1, ds)
    wtrap[0] = wtrap[-1] = 0.5 * ds
    jweights = jw * wtrap

    rng = np.random.default_rng(seed)
    out = np.empty(n)
    j_out = np.empty(n)
    chunk = max(1, 2_000_000 // max(m_tail, 1))
    filled = 0
    sq = math.sqrt(ds)
    while filled < n:
        b = min(chunk, n - filled)
        g = rng.standard_normal((m_tail, b)) * sq
        v = det[:, None] + mat @ g
        j = jweights @ (v * v)
        z = rng.standard_normal(b)
        out[filled : filled + b] = z / np.sqrt(j)
        j_out[filled : filled + b] = j
        filled += b
    return out, j_out


def sample_plamn_limit(
    a: float, x0: InitialSegment, d: float, n: int, m_tail: int = 2000, seed=None
) -> LimitSample:
    """n draws of ``Z/sqrt(J(d))`` for drift below the critical point.

    The phase ``d`` must lie in ``[0, pi/kappa0(a))``.
    """
    if classify_regime(a) is not Regime.PLAMN:
        raise UnsupportedRegime("the periodic mixed-normal limit needs a < -pi**2/2")
    period = plamn_phase_period(a)
    if not (0.0 <= d < period):
        raise InvalidPhase(f"phase d={d!r} outside [0, {period!r})")
    vals, _ = _plamn_draws(a, x0, d, n, m_tail, seed)
    meta = {
        "a": a,
        "d": d,
        "x0": x0.describe(),
        "m_tail": m_tail,
        "seed": seed,
        "period": period,
    }
    return LimitSample(Regime.PLAMN, vals, n, meta)
