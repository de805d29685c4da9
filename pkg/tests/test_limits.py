"""Limit-law samplers: identities, oracle comparisons, grid convergence."""

import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from unidelay import (
    CRITICAL_A,
    InitialSegment,
    InvalidPhase,
    NonpositiveInformation,
    Regime,
    UnsupportedRegime,
    leading_root,
    sample_critical_limit,
    sample_df_limit,
    sample_lamn_limit,
    sample_lan_limit,
    sample_plamn_limit,
)
from unidelay.limits import (
    _lamn_draws,
    _plamn_draws,
    critical_functional,
    df_functional,
    lamn_deterministic_part,
    lamn_information_factor,
    plamn_phase_period,
    plamn_window_sinusoid,
)

import oracles


def quantile_skew(v, p=0.1):
    """Bowley-style skewness; finite-sample stable on heavy-tailed laws,
    unlike the raw third moment (these ratio laws have none)."""
    q = np.quantile(v, [p, 0.5, 1.0 - p])
    return float((q[2] + q[0] - 2.0 * q[1]) / (q[2] - q[0]))


def test_lan_limit_variances():
    for j_a, n in ((1.0, 20000), (4.0, 20000)):
        s = sample_lan_limit(j_a, n, seed=10)
        assert s.regime is Regime.LAN and s.n == n and len(s.values) == n
        var = s.values.var(ddof=1)
        assert abs(var - 1.0 / j_a) <= 3.0 * math.sqrt(2.0 / n) / j_a
    with pytest.raises(NonpositiveInformation):
        sample_lan_limit(0.0, 100, seed=1)


def test_df_numerator_telescoping_identity():
    rng = np.random.default_rng(4)
    for m in (1000, 10_000):
        g = rng.standard_normal(m) * math.sqrt(1.0 / m)
        w = np.concatenate([[0.0], np.cumsum(g)])
        lhs = float(np.dot(w[:-1], g))
        rhs = 0.5 * (w[-1] ** 2 - float(np.dot(g, g)))
        assert abs(lhs - rhs) < 1e-12


def test_df_negativity_probability_vs_frozen_oracle():
    s = sample_df_limit(5000, 10_000, seed=42)
    frac = float((s.values < 0).mean())
    assert abs(frac - oracles.UNIT_ROOT_NEGATIVE_PROB) < 0.02
    # live coarse oracle agreement with the frozen constant
    live = oracles.plain_unit_root_draws(4000, 4000, np.random.default_rng(9))
    assert abs(float((live < 0).mean()) - oracles.UNIT_ROOT_NEGATIVE_PROB) < 0.025


def test_df_determinism_and_preconditions():
    s1 = sample_df_limit(100, 1000, seed=5)
    s2 = sample_df_limit(100, 1000, seed=5)
    s3 = sample_df_limit(100, 1000, seed=6)
    assert np.array_equal(s1.values, s2.values)
    assert not np.array_equal(s1.values, s3.values)
    with pytest.raises(ValueError):
        sample_df_limit(100, 999, seed=5)


def test_df_grid_convergence_coupled():
    # same Brownian paths at m and 2m: refining the grid moves the sample
    # by less than 0.02 in KS distance
    from unidelay.harness import ks_distance

    rng = np.random.default_rng(11)
    n, m = 4000, 4000
    fine = rng.standard_normal((n, 2 * m)) * math.sqrt(1.0 / (2 * m))
    coarse = fine[:, 0::2] + fine[:, 1::2]
    v_fine = df_functional(fine)
    v_coarse = df_functional(coarse)
    assert ks_distance(v_fine, v_coarse) < 0.02


def test_critical_levy_area_symmetry():
    rng = np.random.default_rng(12)
    m, n = 2000, 5000
    g1 = rng.standard_normal((n, m)) * math.sqrt(1.0 / m)
    g2 = rng.standard_normal((n, m)) * math.sqrt(1.0 / m)
    levy, radial, den = critical_functional(g1, g2)
    # swapping the two coordinates flips orientation: the area term is
    # negated, the radial term and the denominator are unchanged
    levy2, radial2, den2 = critical_functional(g2, g1)
    assert np.allclose(levy2, -levy, rtol=1e-12, atol=1e-14)
    assert np.allclose(radial2, radial, rtol=1e-12, atol=1e-14)
    assert np.allclose(den2, den, rtol=1e-12, atol=1e-14)
    se = levy.std(ddof=1) / math.sqrt(n)
    assert abs(levy.mean()) < 3.0 * se


def test_critical_radial_telescoping():
    rng = np.random.default_rng(13)
    m = 5000
    g1 = rng.standard_normal(m) * math.sqrt(1.0 / m)
    g2 = rng.standard_normal(m) * math.sqrt(1.0 / m)
    _, radial, _ = critical_functional(g1, g2)
    w1 = np.concatenate([[0.0], np.cumsum(g1)])
    w2 = np.concatenate([[0.0], np.cumsum(g2)])
    rhs = 0.5 * (w1[-1] ** 2 + w2[-1] ** 2 - float(np.dot(g1, g1)) - float(np.dot(g2, g2)))
    assert abs(float(radial[0]) - rhs) < 1e-12


def test_critical_median_vs_frozen_oracle():
    s = sample_critical_limit(5000, 10_000, seed=43)
    assert abs(float(np.median(s.values)) - oracles.CRITICAL_MEDIAN) < 0.15


def test_critical_grid_convergence_coupled():
    from unidelay.harness import ks_distance

    rng = np.random.default_rng(14)
    n, m = 3000, 4000
    f1 = rng.standard_normal((n, 2 * m)) * math.sqrt(1.0 / (2 * m))
    f2 = rng.standard_normal((n, 2 * m)) * math.sqrt(1.0 / (2 * m))
    pi = math.pi

    def ratio(g1, g2):
        levy, radial, den = critical_functional(g1, g2)
        return (16 * pi * levy - 4 * pi * pi * radial) / (16 * den)

    v_fine = ratio(f1, f2)
    v_coarse = ratio(f1[:, ::2] + f1[:, 1::2], f2[:, ::2] + f2[:, 1::2])
    assert ks_distance(v_fine, v_coarse) < 0.02


def test_lamn_zero_segment_u_variance():
    a = 1.0
    v0 = leading_root(a).v0
    _, j = _lamn_draws(a, InitialSegment.constant(0.0), 10_000, 2000, seed=15)
    u2 = j / lamn_information_factor(a, v0)
    assert abs(float(u2.mean()) - 1.0 / (2.0 * v0)) / (1.0 / (2.0 * v0)) < 0.05


def test_lamn_deterministic_part_vs_dblquad():
    from scipy.integrate import dblquad

    a = 1.0
    v0 = leading_root(a).v0
    val, err = dblquad(lambda s, u: math.exp(-v0 * (s - u)), -1, 0, lambda u: u, 0)
    det = lamn_deterministic_part(a, InitialSegment.constant(1.0), v0)
    assert det == pytest.approx(1.0 + a * val, rel=1e-5)
    assert err < 1e-8


def test_lamn_symmetry_and_sign():
    s = sample_lamn_limit(1.0, InitialSegment.constant(1.0), 10_000, 2000, seed=16)
    v = s.values
    assert np.all(np.isfinite(v))
    # distribution is symmetric: sign balance, mirrored quantiles, and
    # trimmed skew (the raw third moment does not exist for this law)
    assert abs(float((v > 0).mean()) - 0.5) < 3.0 * 0.005
    q = np.quantile(v, [0.1, 0.25, 0.75, 0.9])
    assert abs(q[0] + q[3]) < 0.15 * (q[3] - q[0])
    assert abs(q[1] + q[2]) < 0.15 * (q[2] - q[1])
    assert abs(quantile_skew(v)) < 0.1
    se = v.std(ddof=1) / math.sqrt(len(v))
    assert abs(float(v.mean())) < 3.0 * se


def test_lamn_rejects_nonpositive_drift():
    with pytest.raises(UnsupportedRegime):
        sample_lamn_limit(-1.0, InitialSegment.constant(0.0), 100, 500, seed=1)


def test_lamn_conditional_normality_binned():
    # information-conditional draws are standard normal: bin by J and
    # check the per-bin variance of Delta/sqrt(J)
    vals, j = _lamn_draws(1.0, InitialSegment.constant(1.0), 10_000, 2000, seed=17)
    z = vals * np.sqrt(j)  # the score is Z*sqrt(J), so this recovers Z
    edges = np.quantile(j, np.linspace(0, 1, 11))
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (j >= lo) & (j <= hi)
        nb = int(sel.sum())
        if nb < 100:
            continue
        var = float(z[sel].var(ddof=1))
        assert abs(var - 1.0) <= 3.0 * math.sqrt(2.0 / nb)


def test_plamn_window_sinusoid_critical_matches_closed_form():
    v0, k0, ay, by = plamn_window_sinusoid(CRITICAL_A)
    assert abs(v0) < 1e-9
    assert k0 == pytest.approx(math.pi, abs=1e-9)
    assert ay == pytest.approx(-8.0 / (math.pi**2 + 16.0), abs=1e-10)
    assert by == pytest.approx(32.0 / (math.pi * (math.pi**2 + 16.0)), abs=1e-10)


def test_plamn_draws_positive_information():
    s = sample_plamn_limit(-6.0, InitialSegment.constant(1.0), 0.3, 2000, 1500, seed=18)
    assert np.all(np.isfinite(s.values))
    _, j = _plamn_draws(-6.0, InitialSegment.constant(1.0), 0.3, 2000, 1500, seed=18)
    assert np.all(j > 0)


def test_plamn_phase_periodicity_same_seed():
    a = -6.0
    k0 = leading_root(a).kappa0
    full_period = 2.0 * math.pi / k0
    v1, j1 = _plamn_draws(a, InitialSegment.constant(1.0), 0.2, 500, 1200, seed=19)
    v2, j2 = _plamn_draws(a, InitialSegment.constant(1.0), 0.2 + full_period, 500, 1200, seed=19)
    assert np.abs(j1 - j2).max() < 1e-9 * float(np.abs(j1).max())
    assert np.abs(v1 - v2).max() < 1e-9 * float(np.abs(v1).max())


def test_plamn_mean_information_vs_quadrature_oracle():
    a = -6.0
    v0, k0, ay, by = plamn_window_sinusoid(a)
    target = oracles.plamn_mean_information(a, v0, k0, ay, by, d=0.0)
    _, j = _plamn_draws(a, InitialSegment.constant(0.0), 0.0, 5000, 2000, seed=20)
    assert abs(float(j.mean()) - target) / target < 0.05


def test_plamn_phase_validation_and_regime():
    period = plamn_phase_period(-6.0)
    with pytest.raises(InvalidPhase):
        sample_plamn_limit(-6.0, InitialSegment.constant(0.0), period, 100, 500, seed=1)
    with pytest.raises(InvalidPhase):
        sample_plamn_limit(-6.0, InitialSegment.constant(0.0), -0.01, 100, 500, seed=1)
    with pytest.raises(UnsupportedRegime):
        sample_plamn_limit(-1.0, InitialSegment.constant(0.0), 0.0, 100, 500, seed=1)
    with pytest.raises(UnsupportedRegime):
        sample_plamn_limit(CRITICAL_A, InitialSegment.constant(0.0), 0.0, 100, 500, seed=1)


def test_plamn_symmetry():
    s = sample_plamn_limit(-6.0, InitialSegment.constant(1.0), 0.0, 10_000, 2000, seed=21)
    v = s.values
    assert abs(float((v > 0).mean()) - 0.5) < 3.0 * 0.005
    assert abs(quantile_skew(v)) < 0.1


def test_mixture_grid_convergence_lamn_coupled():
    from unidelay.harness import ks_distance

    a = 1.0
    v0 = leading_root(a).v0
    det = lamn_deterministic_part(a, InitialSegment.constant(1.0), v0)
    factor = lamn_information_factor(a, v0)
    s_max = math.log(1e8) / v0
    n, m = 6000, 1500
    rng = np.random.default_rng(22)
    fine = rng.standard_normal((n, 2 * m)) * math.sqrt(s_max / (2 * m))
    zs = rng.standard_normal(n)

    def draws(g):
        mm = g.shape[1]
        w = np.exp(-v0 * (s_max / mm) * np.arange(mm))
        u = det + g @ w
        return zs / np.sqrt(factor * u * u)

    v_fine = draws(fine)
    v_coarse = draws(fine[:, ::2] + fine[:, 1::2])
    assert ks_distance(v_fine, v_coarse) < 0.02


def test_sampler_determinism_all():
    x0 = InitialSegment.constant(1.0)
    pairs = [
        sample_lan_limit(0.6, 50, seed=2).values,
        sample_lamn_limit(1.0, x0, 50, 800, seed=2).values,
        sample_plamn_limit(-6.0, x0, 0.1, 50, 800, seed=2).values,
        sample_critical_limit(50, 1000, seed=2).values,
    ]
    again = [
        sample_lan_limit(0.6, 50, seed=2).values,
        sample_lamn_limit(1.0, x0, 50, 800, seed=2).values,
        sample_plamn_limit(-6.0, x0, 0.1, 50, 800, seed=2).values,
        sample_critical_limit(50, 1000, seed=2).values,
    ]
    for v1, v2 in zip(pairs, again):
        assert np.array_equal(v1, v2)
        assert np.all(np.isfinite(v1))
