"""Trace the Euler characteristic of the unthresholded frequency set.

For small kappa the threshold sits inside the noise floor of the empirical
characteristic function, so the kept set splinters into many components.
Raising kappa merges them; the selection rule picks the first kappa whose
component count is stable over three consecutive grid values.
"""

import numpy as np

from levyspec import (KappaGrid, SeedSpec, UGrid, cauchy_triplet, chi_profile,
                      ecf, sample_increments, stabilization_index)

DT = 1.0
GRID = UGrid.make(10.0, 0.05)

for n in (500, 10_000):
    sample = sample_increments(cauchy_triplet(), DT, n, SeedSpec(7))
    kappas, chis = chi_profile(ecf(sample, GRID), KappaGrid(0.05, 100))
    k = stabilization_index(chis)
    print(f"n = {n}:")
    # print the profile until well past stabilization
    upto = min(len(kappas), (k or len(kappas)) + 6)
    for kap, chi in zip(kappas[:upto], chis[:upto]):
        marker = " <- selected" if k is not None and kap == kappas[k] else ""
        print(f"  kappa={kap:4.2f}  chi={chi:3d}{marker}")
    print()
