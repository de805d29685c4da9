"""Simulation scheme, exact discrete dynamics, and the test-kit processes."""

import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from unidelay import (
    DelayModel,
    InitialSegment,
    InvalidGrid,
    KernelTooShort,
    delay_integral,
    fisher_limit,
    fundamental_solution,
    initial_term,
    replicate_seed,
    simulate_path,
    y_process,
)
from unidelay.paths import segment_kernel_coeffs

import oracles


def model_const(a, c):
    return DelayModel(a, InitialSegment.constant(c))


def test_initial_segment_grids():
    seg = InitialSegment.constant(2.0)
    assert np.all(seg.on_grid(10) == 2.0)
    assert seg.at_zero() == 2.0 and not seg.is_zero()
    samp = InitialSegment.sampled(np.linspace(0, 1, 11))
    assert samp.at_zero() == 1.0
    with pytest.raises(InvalidGrid):
        samp.on_grid(20)
    with pytest.raises(InvalidGrid):
        InitialSegment.sampled([1.0])


def test_zero_drift_path_is_walk():
    p = simulate_path(model_const(0.0, 1.0), 5.0, 0.01, seed=7)
    walk = 1.0 + np.concatenate([[0.0], np.cumsum(p.dw)])
    assert np.abs(p.x_obs() - walk).max() < 1e-14


def test_zero_noise_zero_drift_is_constant():
    p = simulate_path(model_const(0.0, 3.5), 2.0, 0.02, zero_noise=True)
    assert np.all(p.x == 3.5)
    assert np.all(p.dw == 0.0)


def test_zero_noise_matches_rk4_oracle():
    p = simulate_path(model_const(-1.0, 1.0), 1.0, 1e-3, zero_noise=True)
    ref = oracles.rk4_unit_history(-1.0, 1.0, 1e-3)
    assert abs(p.x_obs()[-1] - ref[-1]) < 1e-3


@pytest.mark.parametrize("a,T", [(-1.0, 20.0), (0.7, 12.0)])
def test_discrete_dynamics_identity(a, T):
    p = simulate_path(model_const(a, 1.0), T, 0.01, seed=5)
    q = delay_integral(p)
    xo = p.x_obs()
    resid = xo[1:] - (xo[:-1] + a * q[:-1] * p.dt + p.dw)
    scale = max(1.0, float(np.abs(xo).max()))
    assert np.abs(resid).max() <= 1e-12 * scale


def test_determinism_and_seed_contract():
    p1 = simulate_path(model_const(-1.0, 1.0), 5.0, 0.01, seed=42)
    p2 = simulate_path(model_const(-1.0, 1.0), 5.0, 0.01, seed=42)
    p3 = simulate_path(model_const(-1.0, 1.0), 5.0, 0.01, seed=43)
    assert np.array_equal(p1.x, p2.x)
    assert not np.array_equal(p1.x, p3.x)
    with pytest.raises(ValueError):
        simulate_path(model_const(-1.0, 1.0), 5.0, 0.01)


def test_grid_validation():
    with pytest.raises(InvalidGrid):
        simulate_path(model_const(-1.0, 1.0), 5.0, 0.3, seed=1)
    with pytest.raises(InvalidGrid):
        simulate_path(model_const(-1.0, 1.0), 0.5, 0.01, seed=1)
    with pytest.raises(InvalidGrid):
        simulate_path(model_const(-1.0, 1.0), 5.25, 0.1, seed=1)


def test_replicate_seed_mixing():
    seeds = [replicate_seed(123, i) for i in range(100)]
    assert len(set(seeds)) == 100
    assert seeds[7] == replicate_seed(123, 7)
    assert replicate_seed(124, 7) != seeds[7]


def test_sampled_segment_used_verbatim():
    vals = np.sin(np.linspace(-1, 0, 101))
    seg = InitialSegment.sampled(vals)
    p = simulate_path(DelayModel(-1.0, seg), 2.0, 0.01, seed=9)
    assert np.array_equal(p.x[:101], vals)


def test_monte_carlo_mean_matches_representation():
    # empirical mean of X(t) against the variation-of-constants mean
    # x(t)*X0(0) + a * (double integral of x(t+u-s)*X0(s))
    dt = 5e-3
    n_rep = 2000
    for a in (-1.0, 1.0):
        fs = fundamental_solution(a, 5.0, dt)
        coeffs = segment_kernel_coeffs(np.ones(round(1 / dt) + 1), dt)
        kern = fs.x[round(1 / dt) :]
        model = model_const(a, 1.0)
        t_checks = [1.0, 2.0, 5.0]
        idx = [round(t / dt) for t in t_checks]
        acc = np.zeros(len(idx))
        acc2 = np.zeros(len(idx))
        for i in range(n_rep):
            p = simulate_path(model, 5.0, dt, seed=replicate_seed(2026, i))
            vals = p.x_obs()[idx]
            acc += vals
            acc2 += vals * vals
        mean = acc / n_rep
        sd = np.sqrt(np.maximum(acc2 / n_rep - mean**2, 0.0))
        se = sd / math.sqrt(n_rep)
        for k, t in zip(range(len(idx)), t_checks):
            m_idx = idx[k]
            rep_mean = kern[m_idx] * 1.0 + a * float(
                np.dot(coeffs, kern[m_idx - round(1 / dt) : m_idx + 1][::-1])
            )
            assert abs(mean[k] - rep_mean) <= 3.0 * se[k] + 1e-12, (a, t)


def test_y_process_zero_everything():
    kern = np.linspace(1, 2, 201)
    model = model_const(-1.5, 0.0)
    y = y_process(kern, model, np.zeros(200), [0.0, 1.0, 2.0], 0.01)
    assert np.all(y == 0.0)


def test_y_process_constant_kernel_value():
    kern = np.ones(401)
    for a in (2.0, -3.0):
        y = y_process(kern, model_const(a, 1.0), np.zeros(400), [1.0, 2.5, 4.0], 0.01)
        assert np.abs(y - (1.0 + a / 2.0)).max() < 1e-12


def test_y_process_kernel_too_short():
    kern = np.ones(101)
    with pytest.raises(KernelTooShort):
        y_process(kern, model_const(1.0, 0.0), np.zeros(400), [2.0], 0.01)
    with pytest.raises(KernelTooShort):
        y_process(np.ones(401), model_const(1.0, 0.0), np.zeros(50), [2.0], 0.01)


def test_y_process_exponential_kernel_variance():
    # kernel exp(w*t): the discounted process is a martingale whose
    # variance approaches (1 - exp(-2*w*t)) / (2*w)
    w, dt, t = 1.0, 0.01, 2.0
    n = round(t / dt)
    kern = np.exp(w * dt * np.arange(n + 1))
    model = model_const(0.3, 0.0)
    rng_master = 515
    vals = np.empty(2000)
    for i in range(2000):
        rng = np.random.default_rng(replicate_seed(rng_master, i))
        dw = rng.standard_normal(n) * math.sqrt(dt)
        vals[i] = math.exp(-w * t) * y_process(kern, model, dw, [t], dt)[0]
    var = float(vals.var(ddof=1))
    target = (1.0 - math.exp(-2.0 * w * t)) / (2.0 * w)
    assert abs(var - target) / target < 0.05


def test_initial_term_values_and_errors():
    kern = np.ones(401)
    z = initial_term(kern, InitialSegment.constant(0.0), [1.0, 2.0], 0.01)
    assert np.all(z == 0.0)
    z = initial_term(kern, InitialSegment.constant(1.0), [1.0, 3.0], 0.01)
    assert np.abs(z - 0.5).max() < 1e-12
    with pytest.raises(KernelTooShort):
        initial_term(kern, InitialSegment.constant(1.0), [0.5], 0.01)
    with pytest.raises(KernelTooShort):
        initial_term(np.ones(51), InitialSegment.constant(1.0), [2.0], 0.01)


def test_segment_convolution_energy_bound():
    # squared initial-segment convolution is bounded by the segment energy
    # times the kernel energy
    rng = np.random.default_rng(77)
    dt = 0.02
    T = 50.0
    n = round(T / dt)
    m = round(1.0 / dt)
    tt = dt * np.arange(n + 1)
    t_grid = dt * np.arange(m, n + 1)
    useg = np.linspace(-1.0, 0.0, m + 1)
    for _ in range(100):
        freqs = rng.uniform(0.2, 6.0, size=3)
        amps = rng.normal(size=3)
        phases = rng.uniform(0, 2 * np.pi, size=3)
        decay = rng.uniform(0.0, 0.3)
        kern = np.exp(-decay * tt) * sum(
            a * np.cos(f * tt + p) for a, f, p in zip(amps, freqs, phases)
        )
        seg_vals = sum(
            a * np.cos(f * useg + p)
            for a, f, p in zip(rng.normal(size=2), rng.uniform(0.3, 4, 2), rng.uniform(0, 6.3, 2))
        )
        seg = InitialSegment.sampled(seg_vals)
        z = initial_term(kern, seg, t_grid, dt)
        lhs = float(trapezoid(z * z, dx=dt))
        rhs = float(trapezoid(seg_vals**2, dx=dt)) * float(trapezoid(kern * kern, dx=dt))
        assert lhs <= rhs * (1.0 + 1e-8) + 1e-12


def test_time_average_converges_to_kernel_energy():
    # (1/T) * integral of Y**2 approaches the kernel energy
    dt = 0.01
    fs = fundamental_solution(-1.0, 200.0, dt)
    j_lim = fisher_limit(-1.0, rel_tol=1e-6)
    kern = fs.y
    model = model_const(-1.0, 1.0)
    m = round(1.0 / dt)
    results = {}
    for T in (100.0, 200.0):
        n = round(T / dt)
        t_grid = dt * np.arange(m, n + 1)
        acc = 0.0
        n_seed = 200
        for i in range(n_seed):
            rng = np.random.default_rng(replicate_seed(606, i))
            dw = rng.standard_normal(n) * math.sqrt(dt)
            y = y_process(kern[: n + 1], model, dw, t_grid, dt)
            acc += float(trapezoid(y * y, dx=dt)) / T
        results[T] = acc / n_seed
    for T, val in results.items():
        assert abs(val - j_lim) / j_lim < 0.10, (T, val, j_lim)
    assert abs(results[200.0] - j_lim) <= abs(results[100.0] - j_lim) + 0.02 * j_lim


def test_discounted_sinusoid_kernel_gap():
    # discounted kernel-driven process against the truncated stationary
    # sinusoid integral, sharing the same increments
    w, kappa, dt, t_eval = 0.5, math.pi, 0.01, 30.0
    horizon = 38.0
    n = round(horizon / dt)
    tt = dt * np.arange(n + 1)
    kern = np.cos(kappa * tt) * np.exp(w * tt)
    model = model_const(-0.5, 0.0)
    k_eval = round(t_eval / dt)
    gaps = []
    for i in range(100):
        rng = np.random.default_rng(replicate_seed(707, i))
        dw = rng.standard_normal(n) * math.sqrt(dt)
        yv = y_process(kern, model, dw, [t_eval], dt)[0]
        lhs = math.exp(-w * t_eval) * yv
        s = dt * np.arange(n)
        v = float(np.dot(np.cos(kappa * (t_eval - s)) * np.exp(-w * s), dw))
        gaps.append(abs(lhs - v))
    assert max(gaps) < 1e-3


def test_discounted_exponential_kernel_limit():
    # kernel exp(w*t): e^{-wt} Y(t) equals the discounted increment sum
    w, dt = 1.0, 0.01
    t = 3.0
    n = round(t / dt)
    kern = np.exp(w * dt * np.arange(n + 1))
    rng = np.random.default_rng(3)
    dw = rng.standard_normal(n) * math.sqrt(dt)
    y = y_process(kern, model_const(0.9, 0.0), dw, [t], dt)[0]
    direct = float(np.dot(np.exp(-w * dt * np.arange(n)), dw))
    assert math.exp(-w * t) * y == pytest.approx(direct, rel=1e-10)
