"""Estimate the increment density of a symmetric 1-stable process.

The increment of this process at sampling rate dt has the explicit density
dt / (pi (x^2 + dt^2)), which makes it the standard end-to-end check: simulate
increments, threshold the empirical characteristic function at the calibrated
level, invert, and compare against the truth.
"""

import numpy as np

from levyspec import (SeedSpec, UGrid, adaptive_estimate, cauchy_triplet, ecf,
                      sample_increments, select_kappa, write_estimate_csv)

DT = 1.0
N = 5000

triplet = cauchy_triplet()
sample = sample_increments(triplet, DT, N, SeedSpec(42))
print(f"simulated {N} increments at dt={DT}; "
      f"median |x| = {np.median(np.abs(sample.values)):.3f}")

# calibrate the threshold constant from the data
grid = UGrid.make(10.0, 0.05)
phi_hat = ecf(sample, grid)
kappa = select_kappa(phi_hat)
level = (1 + kappa * np.sqrt(np.log(N))) / np.sqrt(N)
print(f"selected kappa = {kappa:.2f}  (threshold level {level:.4f})")

# invert the thresholded ECF on a fixed window around the origin
x_grid = np.linspace(-6.0, 6.0, 241)
estimate = adaptive_estimate(sample, kappa, grid, x_grid)
truth = DT / (np.pi * (x_grid ** 2 + DT ** 2))

err = np.max(np.abs(estimate.values - truth))
print(f"max pointwise error on [-6, 6]: {err:.4f} "
      f"(true density peaks at {1 / (np.pi * DT):.4f})")
print(f"imaginary residual of the inversion: {estimate.imag_residual:.2e}")

write_estimate_csv(estimate, "cauchy_density_estimate.csv",
                   [f"kappa={kappa}", f"n={N}", f"dt={DT}"])
print("wrote cauchy_density_estimate.csv (columns x,f_hat)")
