"""
Low output and a productivity shock
===================================

With a tenth of the base productivity, banditry pays and the mafia stays
marginal. Restoring productivity later turns the economy around.
"""

# %%
import numpy as np

from mafiasim import builtin_experiment, classify_experiment, run_scenario

low = run_scenario(builtin_experiment("low-output"))
shock = run_scenario(builtin_experiment("productivity-shock"))

# %%
# The mafia never reaches 5% of the population under low output.
N = low.samples[0].params.N
print("max M/N:", low.series("M").max() / N)
print("terminal B/M:", low.final.state.B / low.final.state.M)

# %%
# Both runs share the first 150 months.
same = np.allclose(low.series("B")[:151], shock.series("B")[:151])
print("identical before the shock:", same)

# %%
for name, traj in (("low-output", low), ("productivity-shock", shock)):
    end = traj.final.aux
    print(f"{name:<20} Y={end.Y:7.1f}  lawlessness={end.lawlessness:.3f}  integrity={end.integrity:.3f}")
    print(" ", classify_experiment(traj))
