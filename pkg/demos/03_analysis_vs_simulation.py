"""
Predicted against simulated steady-state MSE
============================================

The ``fig3`` preset runs SA-ALT-LMS with the l1, log-sum and l0 penalties
on a length-32 system with four complex Gaussian taps, white input and
30 dB SNR, sweeping ``mu = eta``. Each simulated value is the mean of the
last 10% of the learning curve; the prediction comes from the decoupled
K recursions averaged over the same trial systems.

The log-sum prediction tracks the simulation within about 2 dB. The l1
and l0 predictions are optimistic because the recursions carry no term
for the steady shrinkage bias on the support taps.

From the shell::

    altlms sweep --preset fig3 --grid 0.005:0.025:10 --out sweep.csv
"""

import numpy as np

from altlms import AnalysisInput, preset_fig3, sweep_step_size, transient_k
from altlms.harness import run_experiment, trial_systems

TRIALS = 40

scenario = preset_fig3().replace(trials=TRIALS)
points = sweep_step_size(scenario, np.linspace(0.005, 0.025, 5), workers=4)

labels = [e.label for e in scenario.roster]
print("step    " + "".join(f"{lab:>26}" for lab in labels))
for p in points:
    cells = [f"{10 * np.log10(p.simulated[lab]):8.2f} / {10 * np.log10(p.analytical[lab]):6.2f} dB"
             for lab in labels]
    print(f"{p.step:.4f}  " + "".join(f"{c:>26}" for c in cells))
print("(simulated / predicted)")

# %%
# The transient prediction for one trial system, next to its simulation.
entry = scenario.roster[1]
one = scenario.replace(trials=1, roster=(entry,))
system = trial_systems(one, 0)[0][1]
inp = AnalysisInput.from_weights(system, one.sigma_x2, one.sigma_n2, entry.mu, entry.eta,
                                 entry.tau, entry.lam, entry.penalty)
predicted = transient_k(inp, one.iterations).mse_db
simulated = run_experiment(one.replace(trials=TRIALS))[0].mse_db
print(f"\n{entry.label}, mu = eta = {entry.mu}")
for i in (0, 50, 100, 200, 400, 999):
    print(f"  iteration {i:4d}: predicted {predicted[i]:7.2f} dB, simulated {simulated[i]:7.2f} dB")
