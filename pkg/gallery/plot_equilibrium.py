"""
Finding and checking fixed points
=================================

Relax a rough guess to a fixed point and check its residuals. Rounded
values are close but not exact.
"""

# %%
from mafiasim import Parameters, StockState, find_fixed_point, verify_fixed_point

for label, params, guess in (
    ("base", Parameters(), StockState(107, 3, 0, 10, 0.3)),
    ("low output", Parameters(a_P=1), StockState(100, 10, 0, 1, 0.1)),
):
    fp = find_fixed_point(params, guess)
    print(label, "converged" if fp.converged else "not converged", "after", fp.horizon, "months")
    print(" ", fp.state)
    print("\n".join("  " + line for line in verify_fixed_point(fp.state, params).lines()))

# %%
# The same check on values rounded to two decimals fails at tol=1e-8.
rounded = StockState.from_stocks(110, 3.09, 0.05, 9.98, 0.29)
print(verify_fixed_point(rounded, Parameters()).passed)
