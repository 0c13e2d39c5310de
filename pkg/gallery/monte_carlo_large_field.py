"""
==================================
Monte Carlo beyond the exact guard
==================================

The exact engine is limited to a dozen players.  For larger fields use the
seeded estimator; the same seed always reproduces the same counts.
"""

# %%
import numpy as np

import knockout as ko

values = [str(v) for v in range(32, 0, -1)]
fmt = ko.balanced_format(len(values))
rep = ko.estimate(values, fmt, trials=200_000, seed=7)
print(rep.rng_algorithm, "seed", rep.seed)
for i in range(5):
    print(f"player {i + 1}: {rep.point_estimates[i]:.4f} +/- {rep.standard_errors[i]:.4f}")

# %%
# Compare with the format-free bounds, which need no simulation.

for i in range(3):
    print(f"player {i + 1}: universal upper bound {float(ko.universal_upper(values, i)):.4f}")

# %%
# Small fields: simulation against the exact answer.

small = ["6", "4", "3", "1", "1", "1"]
fmt6 = ko.balanced_format(6)
exact = np.array([float(p) for p in ko.win_probabilities(small, fmt6)])
est = ko.estimate(small, fmt6, trials=100_000, seed=1)
z = (np.array(est.point_estimates) - exact) / np.array(est.standard_errors)
print("z-scores:", np.round(z, 2))

# %%
# A single simulated tournament, round by round.

winner, eliminated = ko.simulate_once(small, fmt6, ko.SplitMix64(42), trial=0)
for s, out in enumerate(eliminated, start=1):
    print(f"round {s}: eliminated {[i + 1 for i in out]}")
print("winner:", winner + 1)
