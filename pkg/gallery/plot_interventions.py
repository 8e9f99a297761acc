"""
Comparing policy interventions
==============================

Run the four experiments that follow unification with a second action at
month 150 and compare where they end up.
"""

# %%
from mafiasim import builtin_experiment, classify_experiment, run_scenario
from mafiasim.scenario import PUBLISHED_OUTCOMES

names = ("productivity-shock", "eliminate-mafia", "no-bandits", "state-control")
runs = {name: run_scenario(builtin_experiment(name)) for name in names}

# %%
for name, traj in runs.items():
    print(name, [str(iv) for iv in builtin_experiment(name).interventions])

# %%
# Terminal values.
for name, traj in runs.items():
    s = traj.final
    print(f"{name:<20} P={s.state.P:7.2f} B={s.state.B:6.2f} M={s.state.M:8.2e} Y={s.aux.Y:7.1f}")

# %%
# Outcome signs against the reference table.
for name, traj in runs.items():
    signs = classify_experiment(traj).as_tuple()
    print(f"{name:<20} {signs}  {'match' if signs == PUBLISHED_OUTCOMES[name] else 'MISMATCH'}")
