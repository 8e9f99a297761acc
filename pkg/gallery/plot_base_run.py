"""
Base run and mafia unification
==============================

Start from the lawless fixed point, let the state unify the mafia at month 60
and watch the populations settle into the new regime.
"""

# %%
from pathlib import Path

from mafiasim import builtin_experiment, classify_experiment, run_scenario, settling_time
from mafiasim.output import to_svg

sc = builtin_experiment("base")
traj = run_scenario(sc)
fp = traj.meta["equilibrium"]
print("fixed point:", fp.state)

# %%
# Populations before and after unification.
for t in (0, 60, 120, 300):
    s = traj.at(t)
    print(f"t={t:>3}  P={s.state.P:7.2f}  B={s.state.B:6.2f}  M={s.state.M:6.2f}  "
          f"lawlessness={s.aux.lawlessness:.3f}  integrity={s.aux.integrity:.3f}")

# %%
print("settles after", settling_time(traj, 1e-3), "months")
print(classify_experiment(traj))

# %%
Path("base.svg").write_text(to_svg(traj))
