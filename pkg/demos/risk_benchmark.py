"""Reduced Monte-Carlo benchmark of the thresholded estimator.

Runs the relative L2 risk for two stable models at a few sample sizes (the
full sweep lives in the acceptance tests) and prints the familiar
risk-versus-n table: the risk drops roughly like 1/n, and the selected kappa
stays flat in n.
"""

import math

from levyspec import (ExperimentConfig, LevyTriplet, StableJumpDensity,
                      relative_l2_risk, risk_table_csv)

MODELS = [
    ("cauchy", StableJumpDensity(1 / math.pi, 1 / math.pi, 1.0)),
    ("0.7-stable", StableJumpDensity(2.0, 1.0, 0.7)),
]

reports = []
for label, jumps in MODELS:
    config = ExperimentConfig(LevyTriplet(0.0, 0.0, jumps), delta_t=1.0,
                              n_list=(500, 2000, 8000), trials=20,
                              kappa_mode="auto", master_seed=99, label=label)
    for rep in relative_l2_risk(config):
        reports.append(rep)
        print(f"{rep.label:>10}  n={rep.n:>5}  "
              f"risk={rep.mean_relative_risk:.3e} ({rep.sd_relative_risk:.1e})  "
              f"kappa={rep.mean_kappa:.2f} ({rep.sd_kappa:.2f})")

with open("risk_benchmark.csv", "w") as fh:
    fh.write(risk_table_csv(reports, ["trials=20", "seed=99"]))
print("\nwrote risk_benchmark.csv")
