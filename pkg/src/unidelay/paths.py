"""Path simulation and the deterministic/stochastic test-kit processes.

The scheme is Euler-Maruyama with left-point drift

    x[k+1] = x[k] + a * Q_k * dt + dw[k],      dw[k] ~ N(0, dt),

where ``Q_k`` is the trapezoid average of the path over the trailing unit
window ``[t_k - 1, t_k]`` (the window reaches into the initial segment for
t < 1).  ``Q`` is maintained by an O(1) running half-weight sum; the exact
same recursion, op for op, is replayed by ``trailing_averages`` so that the
discrete dynamics identity and every likelihood identity downstream hold to
float rounding, not just to quadrature accuracy.

Randomness contract: increments come from ``numpy.random.default_rng``
(PCG64) as ``standard_normal(n) * sqrt(dt)``.  Replication substreams are
derived with ``SeedSequence(master, spawn_key=(index,))``, so parallel and
serial sweeps draw identical sample sets.  Zero-noise mode is an explicit
switch, never a seed convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from .errors import InvalidGrid, KernelTooShort
from .fundamental import grid_steps


@dataclass(frozen=True, eq=False)
class InitialSegment:
    """Deterministic continuous initial data on [-1, 0].

    Either a constant or samples on the uniform simulation grid
    (``m + 1 = 1/dt + 1`` values); sampled segments are interpreted
    piecewise-linearly, which is what the trapezoid window quadrature sees.
    """

    kind: str
    value: float = 0.0
    samples: np.ndarray | None = None

    @classmethod
    def constant(cls, c: float) -> "InitialSegment":
        return cls(kind="constant", value=float(c))

    @classmethod
    def sampled(cls, values) -> "InitialSegment":
        arr = np.asarray(values, dtype=float)
        if arr.ndim != 1 or len(arr) < 2:
            raise InvalidGrid("a sampled segment needs a 1-D array of at least 2 values")
        return cls(kind="sampled", samples=arr)

    def on_grid(self, m: int) -> np.ndarray:
        if self.kind == "constant":
            return np.full(m + 1, self.value)
        if len(self.samples) != m + 1:
            raise InvalidGrid(
                f"sampled segment has {len(self.samples)} values, grid needs {m + 1}"
            )
        return self.samples.copy()

    def at_zero(self) -> float:
        return self.value if self.kind == "constant" else float(self.samples[-1])

    def is_zero(self) -> bool:
        if self.kind == "constant":
            return self.value == 0.0
        return not np.any(self.samples)

    def describe(self) -> str:
        if self.kind == "constant":
            return f"constant:{self.value!r}"
        return f"sampled:{len(self.samples)}"


@dataclass(frozen=True)
class DelayModel:
    """Drift coefficient plus deterministic initial segment."""

    a: float
    x0: InitialSegment


@dataclass(eq=False)
class SamplePath:
    """Uniform-grid realization on [-1, T] with retained increments.

    ``x`` has ``1/dt + T/dt + 1`` values; ``x[:m+1]`` is the initial
    segment.  ``dw`` holds the ``T/dt`` Brownian increments (None for
    externally loaded paths without increments).
    """

    model: DelayModel | None
    dt: float
    T: float
    x: np.ndarray = field(repr=False)
    dw: np.ndarray | None = field(repr=False)
    seed: int | None = None

    @property
    def m(self) -> int:
        return grid_steps(1.0, self.dt, "the unit delay")

    @property
    def n(self) -> int:
        return grid_steps(self.T, self.dt, "T")

    def times(self) -> np.ndarray:
        return -1.0 + self.dt * np.arange(len(self.x))

    def x_obs(self) -> np.ndarray:
        """Path values on [0, T]."""
        return self.x[self.m :]


def _half_window_sum(x, m: int) -> float:
    s = 0.5 * x[0]
    for j in range(1, m):
        s += x[j]
    s += 0.5 * x[m]
    return s


def simulate_path(
    model: DelayModel,
    T: float,
    dt: float,
    seed: int | None = None,
    zero_noise: bool = False,
) -> SamplePath:
    """Euler-Maruyama path of the delay SDE on [0, T].

    Deterministic for a fixed seed.  ``zero_noise=True`` sets every
    increment to zero for ODE cross-checks (a seed is then optional).
    """
    if T < 1.0:
        raise InvalidGrid("T must be at least 1")
    m = grid_steps(1.0, dt, "the unit delay")
    n = grid_steps(T, dt, "T")
    if zero_noise:
        dw = np.zeros(n)
    else:
        if seed is None:
            raise ValueError("seed is required unless zero_noise is set")
        rng = np.random.default_rng(seed)
        dw = rng.standard_normal(n) * math.sqrt(dt)

    x = model.x0.on_grid(m).tolist()
    dwl = dw.tolist()
    a = model.a
    adt = a * dt
    W = _half_window_sum(x, m)
    for k in range(n):
        q = dt * W
        x.append(x[k + m] + adt * q + dwl[k])
        W += 0.5 * ((x[k + m] + x[k + m + 1]) - (x[k] + x[k + 1]))
    return SamplePath(model=model, dt=dt, T=float(T), x=np.asarray(x), dw=dw, seed=seed)


def trailing_averages(x, m: int, dt: float) -> np.ndarray:
    """Trapezoid average over the trailing unit window at every grid point.

    Replays the running-sum recursion of :func:`simulate_path` op for op,
    so on a simulated path the returned values equal the drift quadrature
    bit for bit.
    """
    xl = x.tolist() if isinstance(x, np.ndarray) else list(x)
    n = len(xl) - 1 - m
    if n < 0:
        raise InvalidGrid("path shorter than one delay window")
    q = np.empty(n + 1)
    W = _half_window_sum(xl, m)
    q[0] = dt * W
    for k in range(n):
        W += 0.5 * ((xl[k + m] + xl[k + m + 1]) - (xl[k] + xl[k + 1]))
        q[k + 1] = dt * W
    return q


def replicate_seed(master_seed: int, index: int) -> int:
    """64-bit substream seed for replication ``index``.

    Mixing function: ``SeedSequence(master, spawn_key=(index,))`` hashed to
    one uint64 word, so the stream depends only on (master, index), not on
    how many replications run or in which order.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def _grid_indices(t_grid, dt: float) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    idx = np.rint(t / dt).astype(int)
    if np.any(np.abs(idx * dt - t) > 1e-9) or np.any(idx < 0):
        raise InvalidGrid("time points must lie on the nonnegative dt grid")
    return idx


def segment_kernel_coeffs(seg_values: np.ndarray, h: float) -> np.ndarray:
    """Nested-trapezoid weights of the initial-segment double integral.

    Collapses ``integral over u in [-1,0], s in [u,0] of
    f(t + u - s) * X0(s)`` into ``sum_l C[l] * f(t - l*h)`` by grouping the
    (u, s) trapezoid product weights along the diagonal lag ``s - u``.
    """
    seg = np.asarray(seg_values, dtype=float)
    mm = len(seg) - 1
    coeffs = np.zeros(mm + 1)
    for i in range(mm):  # u = -1 + i*h; the inner interval [u, 0] is nonempty
        wu = h * (0.5 if i == 0 else 1.0)
        for j in range(i, mm + 1):  # s = -1 + j*h
            ws = h * (0.5 if j in (i, mm) else 1.0)
            coeffs[j - i] += wu * ws * seg[j]
    return coeffs


def initial_term(kernel, x0: InitialSegment, t_grid, dt: float) -> np.ndarray:
    """Deterministic initial-segment convolution ``Z(t)`` on the grid.

    ``Z(t) = integral over u in [-1,0], s in [u,0] of
    kernel(t + u - s) * X0(s)``, by nested trapezoid.  The kernel must be
    given on the dt grid from 0 and cover ``[t - 1, t]`` for every
    requested t, hence ``t >= 1``.
    """
    m = grid_steps(1.0, dt, "the unit delay")
    kern = np.asarray(kernel, dtype=float)
    idx = _grid_indices(t_grid, dt)
    if len(idx) and idx.min() < m:
        raise KernelTooShort("time points below 1 would need the kernel at negative lags")
    if len(idx) and idx.max() >= len(kern):
        raise KernelTooShort("kernel does not reach the largest requested time")
    coeffs = segment_kernel_coeffs(x0.on_grid(m), dt)
    return np.convolve(kern, coeffs)[idx]


def y_process(kernel, model: DelayModel, dw, t_grid, dt: float) -> np.ndarray:
    """Kernel-driven test process at the requested grid times.

    ``Y(t) = kernel(t) * X0(0) + a * Z(t) + sum_{s_j < t} kernel(t - s_j) * dw_j``
    with the stochastic convolution frozen at left endpoints.  ``Z`` is the
    initial-segment term of :func:`initial_term` (skipped when the segment
    is identically zero, which also lifts the t >= 1 restriction).
    """
    kern = np.asarray(kernel, dtype=float)
    dw = np.asarray(dw, dtype=float)
    idx = _grid_indices(t_grid, dt)
    kmax = int(idx.max()) if len(idx) else 0
    if kmax >= len(kern):
        raise KernelTooShort("kernel does not reach the largest requested time")
    if len(dw) < kmax:
        raise KernelTooShort("increments do not reach the largest requested time")

    out = model.x0.at_zero() * kern[idx]
    if not model.x0.is_zero():
        out = out + model.a * initial_term(kern, model.x0, t_grid, dt)
    if kmax > 0:
        conv = signal.convolve(dw[:kmax], kern[1 : kmax + 1], method="auto")
        sto = np.where(idx > 0, conv[np.maximum(idx - 1, 0)], 0.0)
        out = out + sto
    return out
