"""Characteristic roots, regime classification, and scaling rates.

The drift of the model averages the path over the trailing unit window, so
growth and decay of solutions are governed by the complex roots of

    h_a(lambda) = lambda - a * (1 - exp(-lambda)) / lambda = 0 .

This module evaluates ``h_a``, locates the root with the largest real part,
classifies the asymptotic regime of the drift coefficient ``a``, computes the
constants of the leading-term expansion of the fundamental solution, and
returns the local-experiment scaling rate ``r(a, T)``.

Root geometry used by the search:

* ``a > 0``: the leading root is real, simple, and lies in ``(0, sqrt(a))``
  (multiply the equation by ``lambda``: ``lambda**2 = a*(1 - exp(-lambda))``
  is bounded by ``a`` on the positive axis).  A bisection bracket plus a
  Newton polish is enough.
* ``a < 0``: the leading root is generally one of a complex-conjugate pair.
  We count roots of ``h_a`` inside rectangles of the strip
  ``Im in [-0.05, 4*pi]`` with the argument principle, subdivide until each
  root is isolated, polish with Newton, and keep the representative with
  nonnegative imaginary part.  Real roots (they exist for small ``|a|``) sit
  inside the strip and are found by the same sweep.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NoConvergence, UnsupportedRegime

#: Drift value separating the periodically mixed-normal regime, -pi**2/2.
CRITICAL_A = -math.pi ** 2 / 2.0

#: Contract point for the series/quotient continuity of the characteristic
#: function: below this magnitude the quotient (1-exp(-lambda))/lambda
#: must never be formed directly (cancellation).  The implementation
#: actually switches further out, at _SERIES_ZONE, where a 12-term series
#: and the quotient are both accurate to well under 1e-13, so values are
#: continuous across this ring to better than 1e-12.
EPS_SERIES = 1e-4

_SERIES_ZONE = 0.25
#: (-1)**n / (n+1)! for n = 0..12, the kernel's Taylor coefficients.
_KERNEL_COEFF = [(-1.0) ** n / math.factorial(n + 1) for n in range(13)]
#: d/dlambda coefficients: (-1)**n * n / (n+1)! for n = 1..12.
_KERNEL_DERIV_COEFF = [(-1.0) ** n * n / math.factorial(n + 1) for n in range(1, 13)]

#: Absolute tolerance for equality tests against the special points 0 and
#: -pi**2/2.  Callers wanting exact boundary behaviour pass the exact
#: constant.
BOUNDARY_ATOL = 1e-12

_STRIP_BOTTOM = -0.05
_STRIP_TOP = 4.0 * math.pi + 0.123
_MAX_DEPTH = 48
_MERGE_TOL = 1e-7


class Regime(str, Enum):
    """Asymptotic regime of the local likelihood-ratio experiment."""

    LAN = "LAN"
    LAQ_ZERO = "LAQ_ZERO"
    LAQ_CRITICAL = "LAQ_CRITICAL"
    LAMN = "LAMN"
    PLAMN = "PLAMN"


@dataclass(frozen=True)
class LeadingRoot:
    """Root of the characteristic equation with maximal real part."""

    v0: float
    kappa0: float
    is_real: bool
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class ResidueData:
    """Constants of the leading term ``psi(t) * exp(v0*t)``.

    ``kind == "real_root"`` carries the constant ``psi_real``;
    ``kind == "complex_pair"`` carries the sinusoid coefficients
    ``a0, b0`` of ``a0*cos(kappa0*t) + b0*sin(kappa0*t)``.
    """

    kind: str
    v0: float
    kappa0: float
    psi_real: float | None = None
    a0: float | None = None
    b0: float | None = None


def _kernel(lam: complex) -> complex:
    if abs(lam) < _SERIES_ZONE:
        acc = _KERNEL_COEFF[-1]
        for c in reversed(_KERNEL_COEFF[:-1]):
            acc = c + lam * acc
        return acc
    return (1.0 - cmath.exp(-lam)) / lam


def _kernel_deriv(lam: complex) -> complex:
    if abs(lam) < _SERIES_ZONE:
        acc = _KERNEL_DERIV_COEFF[-1]
        for c in reversed(_KERNEL_DERIV_COEFF[:-1]):
            acc = c + lam * acc
        return acc
    e = cmath.exp(-lam)
    return (e * lam - (1.0 - e)) / (lam * lam)


def eval_char(a: float, lam: complex) -> complex:
    """Characteristic function ``lambda - a*(1 - exp(-lambda))/lambda``.

    Total and continuous on all of the complex plane; the removable
    singularity at 0 is filled by the power series, so ``eval_char(a, 0)``
    returns ``-a``.
    """
    lam = complex(lam)
    return lam - a * _kernel(lam)


def char_deriv(a: float, lam: complex) -> complex:
    """Derivative of ``eval_char`` in lambda."""
    lam = complex(lam)
    return 1.0 - a * _kernel_deriv(lam)


def _eval_char_vec(a: float, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    small = np.abs(z) < _SERIES_ZONE
    if np.any(small):
        s = z[small]
        acc = np.full_like(s, _KERNEL_COEFF[-1])
        for c in reversed(_KERNEL_COEFF[:-1]):
            acc = c + s * acc
        out[small] = s - a * acc
    big = ~small
    if np.any(big):
        b = z[big]
        out[big] = b - a * (1.0 - np.exp(-b)) / b
    return out


class _ContourHit(Exception):
    """A contour sample landed (nearly) on a root; nudge and retry."""


def _winding(a: float, points_of: "callable", n0: int = 256, max_n: int = 1 << 17) -> int:
    """Winding number of ``h_a`` along a closed contour.

    ``points_of(n)`` must return ``n`` points tracing the contour once.
    Trapezoid-style phase tracking is refined until the total turns within
    0.25 of an integer and that integer repeats across a refinement.
    """
    prev = None
    n = n0
    while n <= max_n:
        z = points_of(n)
        w = _eval_char_vec(a, z)
        mag = np.abs(w)
        if mag.min() <= 1e-12 * max(1.0, mag.max()):
            raise _ContourHit
        ph = np.angle(w)
        d = np.diff(np.append(ph, ph[0]))
        d = (d + np.pi) % (2.0 * np.pi) - np.pi
        total = float(d.sum()) / (2.0 * np.pi)
        k = round(total)
        ok = abs(total - k) < 0.25 and float(np.abs(d).max()) < 2.8
        if ok and prev == k:
            return k
        prev = k if ok else None
        n *= 2
    raise NoConvergence("winding number did not stabilize on the contour")


def _rect_points(x0: float, x1: float, y0: float, y1: float):
    corners = [
        complex(x0, y0),
        complex(x1, y0),
        complex(x1, y1),
        complex(x0, y1),
    ]

    def points_of(n: int) -> np.ndarray:
        lengths = [abs(corners[(i + 1) % 4] - corners[i]) for i in range(4)]
        per = sum(lengths)
        pts = []
        for i in range(4):
            k = max(8, int(round(n * lengths[i] / per)))
            t = np.arange(k) / k
            pts.append(corners[i] + (corners[(i + 1) % 4] - corners[i]) * t)
        return np.concatenate(pts)

    return points_of


def _circle_points(center: complex, radius: float):
    def points_of(n: int) -> np.ndarray:
        t = 2.0 * np.pi * np.arange(n) / n
        return center + radius * np.exp(1j * t)

    return points_of


def _newton(a: float, z0: complex, maxit: int = 80) -> complex:
    z = z0
    for _ in range(maxit):
        f = eval_char(a, z)
        fp = char_deriv(a, z)
        if fp == 0:
            break
        step = f / fp
        z = z - step
        if abs(step) <= 1e-16 * (1.0 + abs(z)):
            break
    return z


def _rect_count(a: float, x0: float, x1: float, y0: float, y1: float) -> int:
    for bump in (0.0, 3.1e-3, -2.3e-3):
        try:
            return _winding(a, _rect_points(x0 - bump, x1 + bump, y0 - bump, y1 + bump))
        except _ContourHit:
            continue
    raise NoConvergence("could not place a root-free contour; widen the search rectangle")


def _collect_roots(a, x0, x1, y0, y1, out, depth=0):
    cnt = _rect_count(a, x0, x1, y0, y1)
    if cnt == 0:
        return
    if depth > _MAX_DEPTH:
        raise NoConvergence("root isolation exceeded the subdivision budget")
    tiny = math.hypot(x1 - x0, y1 - y0) < 1e-4
    if cnt == 1 or tiny:
        center = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
        for start in (center, center + 0.3 * complex(x1 - x0, y1 - y0)):
            z = _newton(a, start)
            res = abs(eval_char(a, z))
            inside = (x0 - 0.2 <= z.real <= x1 + 0.2) and (y0 - 0.2 <= z.imag <= y1 + 0.2)
            if res <= 1e-11 * (1.0 + abs(z)) and inside:
                out.append(z)
                return
        if tiny:
            raise NoConvergence("Newton polish failed on an isolated root")
        # fall through and split further
    if (x1 - x0) >= (y1 - y0):
        for frac in (0.5, 0.61803, 0.38197):
            xm = x0 + frac * (x1 - x0)
            try:
                _collect_roots(a, x0, xm, y0, y1, out, depth + 1)
                _collect_roots(a, xm, x1, y0, y1, out, depth + 1)
                return
            except _ContourHit:
                continue
    else:
        for frac in (0.5, 0.61803, 0.38197):
            ym = y0 + frac * (y1 - y0)
            try:
                _collect_roots(a, x0, x1, y0, ym, out, depth + 1)
                _collect_roots(a, x0, x1, ym, y1, out, depth + 1)
                return
            except _ContourHit:
                continue
    raise NoConvergence("could not subdivide around a contour root")


def _upper_strip_roots(a: float, rect: tuple | None = None) -> list[complex]:
    """All roots in the default strip, normalized to Im >= 0, deduplicated."""
    if rect is None:
        x_lo = -max(3.0, abs(a)) - 0.0371
        x_hi = max(1.0, math.sqrt(abs(a))) + 0.0413
        rect = (x_lo, x_hi, _STRIP_BOTTOM, _STRIP_TOP)
    found: list[complex] = []
    _collect_roots(a, rect[0], rect[1], rect[2], rect[3], found)
    normed = [complex(z.real, abs(z.imag)) for z in found]
    roots: list[complex] = []
    for z in normed:
        if all(abs(z - r) > _MERGE_TOL for r in roots):
            roots.append(z)
    return roots


def leading_root(a: float, tol: float = 1e-10, rect: tuple | None = None) -> LeadingRoot:
    """Root of the characteristic equation with maximal real part.

    Complex roots are reported by the representative with ``Im >= 0``.
    Raises :class:`NoConvergence` when the iteration budget is exhausted;
    the caller may retry with a wider ``rect`` (``(re_lo, re_hi, im_lo,
    im_hi)``).
    """
    if a == 0:
        raise ValueError("a must be nonzero; the characteristic set at 0 is trivial")
    if not tol > 0:
        raise ValueError("tol must be positive")

    if a > 0:
        lo, hi = 1e-8, math.sqrt(a)
        g = lambda x: x * x - a * (1.0 - math.exp(-x))  # noqa: E731
        glo, ghi = g(lo), g(hi)
        if not (glo < 0.0 < ghi):
            raise NoConvergence("positive-drift bracket failed")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if g(mid) < 0.0:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-13:
                break
        z = _newton(a, complex(0.5 * (lo + hi)))
        v0 = z.real
        residual = abs(eval_char(a, v0))
        if residual > tol or not (0.0 < v0 < math.sqrt(a)):
            raise NoConvergence("Newton polish failed for the positive real root")
        return LeadingRoot(v0=v0, kappa0=0.0, is_real=True, multiplicity=1, residual=residual)

    roots = _upper_strip_roots(a, rect)
    if not roots:
        raise NoConvergence("no roots found; widen the search rectangle")
    z = max(roots, key=lambda r: r.real)
    z = _newton(a, z)
    residual = abs(eval_char(a, z))
    if residual > tol:
        raise NoConvergence("Newton polish failed for the leading root")
    if abs(z.imag) <= 1e-9:
        return LeadingRoot(v0=z.real, kappa0=0.0, is_real=True, multiplicity=1, residual=residual)
    # validate isolation with a final small-circle count
    radius = min(0.04, 0.5 * abs(z.imag)) if abs(z.imag) > 2e-4 else 1e-4
    try:
        cnt = _winding(a, _circle_points(z, radius), n0=512)
    except _ContourHit:
        cnt = 1  # the circle grazed the root itself after a huge refinement
    if cnt != 1:
        raise NoConvergence("leading root failed the isolation check")
    return LeadingRoot(
        v0=z.real, kappa0=abs(z.imag), is_real=False, multiplicity=1, residual=residual
    )


def classify_regime(a: float) -> Regime:
    """Regime of the drift coefficient, with boundaries at 0 and -pi**2/2.

    Equality against the two special points is tested with absolute
    tolerance ``BOUNDARY_ATOL``.
    """
    if abs(a) <= BOUNDARY_ATOL:
        return Regime.LAQ_ZERO
    if abs(a - CRITICAL_A) <= BOUNDARY_ATOL:
        return Regime.LAQ_CRITICAL
    if a > 0:
        return Regime.LAMN
    if a > CRITICAL_A:
        return Regime.LAN
    return Regime.PLAMN


def residue_constants(a: float) -> ResidueData:
    """Leading-term constants of the fundamental solution.

    Supported for ``a > 0`` (simple real leading root) and for
    ``a <= -pi**2/2`` (leading complex pair); elsewhere the constants are
    not used by this artifact and :class:`UnsupportedRegime` is raised.
    """
    regime = classify_regime(a)
    if regime is Regime.LAMN:
        root = leading_root(a)
        v0 = root.v0
        psi = v0 / (v0 * v0 + 2.0 * v0 - a)
        return ResidueData(kind="real_root", v0=v0, kappa0=0.0, psi_real=psi)
    if regime in (Regime.LAQ_CRITICAL, Regime.PLAMN):
        root = leading_root(a)
        v0, k0 = root.v0, root.kappa0
        # At a root, h'(lam) = (lam**2 + 2*lam - a)/lam, so the transform
        # residue at the leading pole is lam/(lam**2 + 2*lam - a); the pair
        # contributes 2*Re(residue)*cos - 2*Im(residue)*sin.
        lam = complex(v0, k0)
        res = lam / (lam * lam + 2.0 * lam - a)
        return ResidueData(
            kind="complex_pair", v0=v0, kappa0=k0, a0=2.0 * res.real, b0=-2.0 * res.imag
        )
    raise UnsupportedRegime(
        "leading-term constants are only provided for a > 0 or a <= -pi**2/2"
    )


def scaling(a: float, T: float) -> float:
    """Local-experiment scaling rate ``r(a, T)``.

    ``1/sqrt(T)`` in the LAN regime, ``1/T`` at the two quadratic points,
    and ``exp(-v0(a)*T)`` in the mixed-normal regimes.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    regime = classify_regime(a)
    if regime is Regime.LAN:
        return 1.0 / math.sqrt(T)
    if regime in (Regime.LAQ_ZERO, Regime.LAQ_CRITICAL):
        return 1.0 / T
    return math.exp(-leading_root(a).v0 * T)
