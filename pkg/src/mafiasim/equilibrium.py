"""
Fixed points of the model by relaxation.

The solver simply runs the dynamics with constant parameters until every
rate of change is below tolerance, so the point it returns is an attractor
of the same discretised system used for the experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .integrator import IntegrationConfig, _clamp, _rates, _step
from .model import Overrides, Parameters, StockState, derivatives, evaluate_auxiliaries

DEFAULT_TOL = 1e-8
DEFAULT_MAX_HORIZON = 5000.0


@dataclass(frozen=True)
class FixedPointResult:
    state: StockState
    residual: float
    horizon: float
    converged: bool


@dataclass(frozen=True)
class ResidualReport:
    dB: float
    dM: float
    dihat_P: float
    dihat_B: float
    B_gap: float
    M_gap: float
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.dB, self.dM, self.dihat_P, self.dihat_B)

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol

    def lines(self) -> list[str]:
        return [
            f"|dB/dt|         {self.dB:.9g}",
            f"|dM/dt|         {self.dM:.9g}",
            f"|dihat_P/dt|    {self.dihat_P:.9g}",
            f"|dihat_B/dt|    {self.dihat_B:.9g}",
            f"|B_star - B|    {self.B_gap:.9g}",
            f"|D_M - M|       {self.M_gap:.9g}",
            f"tol             {self.tol:.9g}",
            f"result          {'pass' if self.passed else 'fail'}",
        ]


def find_fixed_point(params: Parameters, guess: StockState, tol: float = DEFAULT_TOL,
                     max_horizon: float = DEFAULT_MAX_HORIZON,
                     overrides: Overrides = Overrides(),
                     config: IntegrationConfig = IntegrationConfig()) -> FixedPointResult:
    """Relax ``guess`` under constant ``params`` until ``max |rate| < tol``.

    The returned state has ``t`` reset to ``guess.t``. Failure to converge
    within ``max_horizon`` months is reported through ``converged=False``.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0")
    guess.check(params.N)
    state = guess
    dt = config.dt
    n_max = int(math.ceil(max_horizon / dt))
    residual = math.inf
    k = 0
    while True:
        residual = max(abs(r) for r in _rates(state, params, overrides))
        if residual < tol or k >= n_max:
            break
        state = _clamp(_step(state, params, overrides, dt, config.method), params.N)[0]
        k += 1
    state = StockState(state.P, state.B, state.M, state.ihat_P, state.ihat_B, guess.t)
    return FixedPointResult(state, residual, k * dt, residual < tol)


def verify_fixed_point(state: StockState, params: Parameters, tol: float = DEFAULT_TOL,
                       overrides: Overrides = Overrides()) -> ResidualReport:
    aux = evaluate_auxiliaries(state, params, overrides)
    d = derivatives(state, params, overrides, aux)
    return ResidualReport(
        dB=abs(d.dB), dM=abs(d.dM), dihat_P=abs(d.dihat_P), dihat_B=abs(d.dihat_B),
        B_gap=abs(aux.B_star - state.B), M_gap=abs(aux.D_M - state.M), tol=tol,
    )
