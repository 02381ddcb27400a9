"""Reproduce the three guarantee curves and their headline constants.

Prints the worst-case ratios that define the algorithms: the product-state
curve bottoms out at 0.4988 (x = 0.949), the damped rotation lifts it to
0.58281 at beta = 0.38981, and the EPR branch rule crosses at 1/sqrt(2).
"""

import numpy as np

from qmcut.circuits import BETA_STAR, optimize_beta, rotated_energy_bound
from qmcut.rounding import product_energy_bound, product_ratio_curve

xs, f, ratio = product_ratio_curve(step=1e-4)
k = int(np.argmin(ratio))
print("product-state rounding:")
print(f"  min f(x)/(1+x) = {ratio[k]:.6f} at x = {xs[k]:.4f}")
print(f"  f(-1/2) = {product_energy_bound(-0.5):.6f}   f(1) = {product_energy_bound(1.0):.6f}")

beta, worst = optimize_beta()
print("\ndamped entangling rotation:")
print(f"  argmax beta = {beta:.5f}  (stored constant {BETA_STAR})")
print(f"  guaranteed ratio = {worst:.6f}")
grid = np.linspace(-1 + 1e-4, 1.0, 20000)
undamped = np.min(rotated_energy_bound(1.0, grid) / (1 + grid))
print(f"  for contrast, beta = 1 (full rotation) only guarantees {undamped:.6f}")

etas = np.linspace(0.0, 1.0, 100001)
product_branch = 1.0 / (1.0 + etas)
rotated_branch = (0.5 + etas + 0.5 * etas ** 2) / (1.0 + etas)
best = np.maximum(product_branch, rotated_branch)
k = int(np.argmin(best))
print("\nEPR branch rule:")
print(f"  worst ratio = {best[k]:.8f} at eta = {etas[k]:.6f}")
print(f"  1/sqrt(2)   = {1 / np.sqrt(2):.8f} at sqrt(2) - 1 = {np.sqrt(2) - 1:.6f}")
