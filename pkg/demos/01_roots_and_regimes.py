"""Sweep the drift coefficient and print the leading characteristic root,
the asymptotic regime, and the local scaling rate at a desk-scale horizon.

The regime boundaries sit at 0 and at -pi**2/2 = -4.9348...; between them
the leading root has negative real part and the experiment is locally
asymptotically normal, above 0 the root is real positive (mixed normal),
and below the critical point a complex pair crosses into the right half
plane (periodically mixed normal).
"""

import math

import numpy as np

from unidelay import CRITICAL_A, classify_regime, leading_root, scaling

T = 50.0
print(f"{'a':>9}  {'v0':>10}  {'kappa0':>8}  {'real':>5}  {'regime':<13}  r(a,T={T:g})")
for a in [-10.0, -6.0, CRITICAL_A, -4.5, -2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 3.0]:
    regime = classify_regime(a).value
    if a == 0.0:
        print(f"{a:9.4f}  {'-':>10}  {'-':>8}  {'-':>5}  {regime:<13}  {scaling(a, T):.3e}")
        continue
    root = leading_root(a)
    print(
        f"{a:9.4f}  {root.v0:10.6f}  {root.kappa0:8.5f}  {str(root.is_real):>5}  "
        f"{regime:<13}  {scaling(a, T):.3e}"
    )

print()
print("Critical-point anchors:")
root = leading_root(CRITICAL_A, tol=1e-12)
print(f"  v0 = {root.v0:.2e} (exactly 0 in the limit), kappa0 = {root.kappa0:.12f} (pi)")
print(f"  residual |h(root)| = {root.residual:.2e}")

from unidelay import residue_constants  # noqa: E402

rd = residue_constants(CRITICAL_A)
print(f"  leading sinusoid coefficients: {rd.a0:.6f} (16/(pi^2+16) = "
      f"{16 / (math.pi ** 2 + 16):.6f}), {rd.b0:.6f} (4*pi/(pi^2+16) = "
      f"{4 * math.pi / (math.pi ** 2 + 16):.6f})")

print()
print("Spectral abscissa across the LAN range (root real part vs drift):")
for a in np.linspace(-4.8, -0.4, 12):
    print(f"  a = {a:7.3f}   v0 = {leading_root(float(a)).v0:9.5f}")
