"""
Tracking a sparse system under correlated input
===============================================

The ``fig2`` preset: M = 16, two non-zero taps that become four at
iteration 1000, AR(1) input with pole 0.8 and 40 dB SNR. Every algorithm
in the roster sees the same system, input and noise in each trial.

The full preset averages 200 trials; set ``TRIALS`` higher to smooth the
curves. To reproduce the CSV from the shell::

    altlms simulate --preset fig2 --out curves.csv
"""

import numpy as np

from altlms import preset_fig2, run_experiment

TRIALS = 50

scenario = preset_fig2().replace(trials=TRIALS)
curves = run_experiment(scenario, workers=4)

# %%
# Learning curves in dB, sampled every 250 iterations.
print("iteration " + "".join(f"{c.label:>22}" for c in curves))
for i in range(0, scenario.iterations, 250):
    print(f"{i:9d} " + "".join(f"{c.mse_db[i]:22.2f}" for c in curves))

# %%
# Steady state before the switch and after re-convergence.
for lo, hi in ((800, 1000), (1800, 2000)):
    print(f"\nmean MSE over [{lo}, {hi}):")
    for c in sorted(curves, key=lambda c: c.mse[lo:hi].mean()):
        print(f"  {c.label:22} {10 * np.log10(c.mse[lo:hi].mean()):7.2f} dB")
