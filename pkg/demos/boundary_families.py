"""Tour of the boundary families and their closed-form densities.

Run:  python demos/boundary_families.py
"""

import numpy as np

from ifpt import (
    DanielsBoundary,
    LinearBoundary,
    OscillatingBoundary,
    PeskirGBoundary,
    PiecewiseLinearBoundary,
    c_from_kappa,
    fpt_density_daniels,
    fpt_density_linear,
    peskir_limit,
)

print("== linear boundary c(t) = 1 + 0.3 t ==")
lin = LinearBoundary(1.0, 0.3)
ts = np.array([0.0, 0.5, 1.0, 2.0])
print("  levels:", lin.value(ts))
print("  FPT density at t=1:", fpt_density_linear(1.0, 1.0, 0.3))

print("\n== Daniels boundary (alpha=1, beta=0.5, gamma=0.5) ==")
dan = DanielsBoundary(1.0, 0.5, 0.5)
ts = np.array([0.01, 0.5, 1.0, 2.0])
print("  levels:", np.round(dan.value(ts), 6))
print("  limit at zero (alpha/2):", dan.value_at_zero())
print("  density at the same times:", np.round(fpt_density_daniels(ts, 1.0, 0.5, 0.5), 6))
# gamma=1, beta=0 collapses to the constant boundary at alpha
const = DanielsBoundary(1.0, 0.0, 1.0)
print("  gamma=1, beta=0 is constant:", const.value(np.array([0.1, 1.0, 7.0])))

print("\n== oscillating boundary 1 + 0.5 cos(2t) ==")
osc = OscillatingBoundary(1.0, 0.5, 2.0)
print("  level at 0 (alpha+beta):", osc.value(0.0))
print("  derivative at 0:", osc.derivative(0.0))

print("\n== small-time square-root boundary ==")
# kappa = f(0+) = 1 fixes the constant c
c = c_from_kappa(1.0)
g = PeskirGBoundary(c)
print(f"  c for kappa=1: {c:.6f}  (round trip: {peskir_limit(c):.12f})")
ts = np.array([1e-6, 1e-4, 1e-2])
print("  g(t) near zero:", np.round(g.value(ts), 6))
print("  g(t)/sqrt(2t log 1/t):", np.round(g.value(ts) / np.sqrt(2 * ts * np.log(1 / ts)), 4))

print("\n== piecewise-linear boundary ==")
pl = PiecewiseLinearBoundary([(0.0, 1.0), (0.5, 1.2), (1.0, 1.1)])
for i in (1, 2):
    a, b = pl.segment_coeffs(i)
    print(f"  segment {i}: alpha={a:+.3f} beta={b:+.3f}")
print("  sampled from Daniels:", PiecewiseLinearBoundary.from_sampling(dan, [0.5, 1.0]).knots)
