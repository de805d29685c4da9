"""Compute the fundamental solution for a few drifts, check its closed
forms on the first interval, watch the leading-term expansion take over,
and evaluate the information limit of the ergodic range.

Optionally writes PNG plots next to this script when matplotlib is
importable; the printed output carries the same content.
"""

import math

import numpy as np

from unidelay import (
    asymptotic_form,
    fisher_limit,
    fundamental_solution,
    leading_root,
)

dt = 1e-3

print("First-interval closed forms (the delay term is silent until t = 1):")
fs = fundamental_solution(-1.0, 2.0, dt)
print(f"  a = -1: x(1) = {fs.x_at(1.0):.10f}   cos(1)  = {math.cos(1.0):.10f}")
print(f"          y(1) = {fs.y_at(1.0):.10f}   sin(1)  = {math.sin(1.0):.10f}")
fs = fundamental_solution(1.0, 2.0, dt)
print(f"  a = +1: x(1) = {fs.x_at(1.0):.10f}   cosh(1) = {math.cosh(1.0):.10f}")

print()
print("Leading-term expansion, positive drift (flat scaled tail):")
fs = fundamental_solution(1.0, 15.0, dt)
v0 = leading_root(1.0).v0
for t in (5.0, 10.0, 15.0):
    approx = asymptotic_form(1.0, t)
    print(f"  t = {t:4.1f}: x = {fs.x_at(t):12.4f}   psi*e^(v0 t) = {approx:12.4f}   "
          f"rel gap = {abs(fs.x_at(t) - approx) / approx:.2e}")

print()
print("Leading-term expansion, oscillatory drift a = -6:")
fs = fundamental_solution(-6.0, 40.0, dt)
v6 = leading_root(-6.0).v0
for t in (10.0, 25.0, 40.0):
    scaled = fs.x_at(t) * math.exp(-v6 * t)
    sin = asymptotic_form(-6.0, t) * math.exp(-v6 * t)
    print(f"  t = {t:4.1f}: x*e^(-v0 t) = {scaled:+.6f}   sinusoid = {sin:+.6f}")

print()
print("Information limit of the ergodic range (integral of the squared")
print("delay average of the fundamental solution):")
for a in (-0.5, -1.0, -2.0, -4.0):
    print(f"  a = {a:5.2f}:  J = {fisher_limit(a, rel_tol=1e-6):.6f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 3.5))
    for a, ax in zip((-1.0, -6.0), axes):
        fs = fundamental_solution(a, 20.0, 1e-2)
        ax.plot(fs.t_x, fs.x, lw=0.9, label="x(t)")
        ax.plot(fs.t_y, fs.y, lw=0.9, label="delay average y(t)")
        ax.set_title(f"a = {a:g}")
        ax.set_xlabel("t")
        ax.legend()
    fig.tight_layout()
    out = __file__.replace(".py", ".png")
    fig.savefig(out, dpi=120)
    print(f"\nwrote {out}")
except ImportError:
    print("\n(matplotlib not importable; skipped the plot)")
