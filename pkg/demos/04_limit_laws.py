"""Draw from the five limit laws of the scaled estimation error and print
quantile tables; they range from plain Gaussian (ergodic drift) through
unit-root-type ratios (zero drift) to heavy-tailed mixed-normal ratios.
"""

import numpy as np

from unidelay import (
    CRITICAL_A,
    InitialSegment,
    fisher_limit,
    sample_critical_limit,
    sample_df_limit,
    sample_lamn_limit,
    sample_lan_limit,
    sample_plamn_limit,
)

QS = (5, 25, 50, 75, 95)
N = 20_000


def table(name, values):
    q = np.percentile(values, QS)
    cells = "  ".join(f"{v:9.4f}" for v in q)
    print(f"  {name:<28} {cells}   P(<0) = {(values < 0).mean():.3f}")


print(f"{'law':<30} " + "  ".join(f"{p:>8}%" for p in QS))

j = fisher_limit(-1.0, rel_tol=1e-6)
table("ergodic a=-1 (Gaussian)", sample_lan_limit(j, N, seed=1).values)
table("zero drift (unit root)", sample_df_limit(N, 10_000, seed=2).values)
table("critical drift (2-D area)", sample_critical_limit(N, 10_000, seed=3).values)

x0 = InitialSegment.constant(1.0)
table("a=+1 (mixed normal)", sample_lamn_limit(1.0, x0, N, 2000, seed=4).values)
table("a=-6, d=0 (periodic m.n.)", sample_plamn_limit(-6.0, x0, 0.0, N, 2000, seed=5).values)

print()
print("The mixed-normal laws are ratio-type and heavy-tailed: their")
print("interquartile ranges are modest while extreme quantiles run far out:")
v = sample_lamn_limit(1.0, x0, N, 2000, seed=4).values
for p in (99.0, 99.9):
    print(f"  a=+1 law, {p:.1f}% quantile: {np.percentile(v, p):10.2f}")

print()
print("Phase dependence of the periodic mixed-normal information:")
from unidelay.limits import _plamn_draws, plamn_phase_period  # noqa: E402

period = plamn_phase_period(-6.0)
for frac in (0.0, 0.25, 0.5, 0.75):
    _, jv = _plamn_draws(-6.0, x0, frac * period, 4000, 2000, seed=6)
    print(f"  d = {frac * period:6.3f} ({frac:4.2f} of the period): E[J(d)] = {jv.mean():.4f}")
