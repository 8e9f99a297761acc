"""
Algebraic core of the peasant / bandit / mafia economy.

Every auxiliary quantity is a pure function of the stocks and the
parameters. :func:`evaluate_auxiliaries` wires the single-symbol functions
together in dependency order and :func:`derivatives` turns the result into
the rates of change of the integrated stocks.

Peasants are not integrated: ``P = N - B - M`` is recomputed from the other
two population stocks, which keeps the population exactly constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .errors import ConfigurationError

__all__ = [
    "Parameters",
    "StockState",
    "Overrides",
    "AuxiliaryValues",
    "StateDerivative",
    "avoidance_probability",
    "theft_success",
    "bandit_appropriations",
    "bandit_income",
    "peasant_income",
    "banditry_attractiveness",
    "potential_bandits",
    "protection_market",
    "mafia_control",
    "indices",
    "evaluate_auxiliaries",
    "derivatives",
]


@dataclass(frozen=True)
class Parameters:
    """Exogenous constants of the model.

    Defaults are the pre-unification base-run values; ``N`` is the total
    population (107 peasants + 3 bandits + 0 mafiosi).

    Parameters
    ----------
    a_P : float
        Marginal product, output per peasant per month.
    theta_B : float
        Effectiveness of bandit technology.
    theta_M : float
        Mafiosi needed per bandit to control it, in [0, 1].
    c_M : float
        Compensating differential (fixed cost of being a mafioso).
    lambda_A : float
        Authority control, in [0, 1].
    t_M : float
        Maximum share of loot paid as tribute, in [0, 1].
    tau : float
        Income perception delay, months.
    tau_B : float
        Bandit recruitment delay, months.
    tau_M : float
        Mafia recruitment delay, months.
    N : float
        Total population, constant.
    """

    a_P: float = 10.0
    theta_B: float = 3.0
    theta_M: float = 0.2
    c_M: float = 10.0
    lambda_A: float = 0.9
    t_M: float = 0.2
    tau: float = 10.0
    tau_B: float = 3.0
    tau_M: float = 5.0
    N: float = 110.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigurationError(f"parameter {f.name} must be a finite number, got {v!r}")
        for name in ("a_P", "theta_B", "tau", "tau_B", "tau_M", "N"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"parameter {name} must be > 0, got {getattr(self, name)}")
        for name in ("theta_M", "lambda_A", "t_M"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigurationError(f"parameter {name} must be in [0, 1], got {getattr(self, name)}")
        # c_M > 0 keeps the protection price strictly positive
        if self.c_M <= 0:
            raise ConfigurationError(f"parameter c_M must be > 0, got {self.c_M}")

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def with_value(self, name: str, value: float) -> "Parameters":
        if name not in self.names():
            raise ConfigurationError(
                f"unknown parameter {name!r}; valid names: {', '.join(self.names())}"
            )
        return replace(self, **{name: float(value)})

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.names()}


@dataclass(frozen=True)
class StockState:
    """Integrated state at time ``t``.

    ``P`` is carried for convenience but is always ``N - B - M``; build
    states with :meth:`from_stocks` to get that for free.
    """

    P: float
    B: float
    M: float
    ihat_P: float
    ihat_B: float
    t: float = 0.0

    @classmethod
    def from_stocks(cls, N: float, B: float, M: float, ihat_P: float, ihat_B: float,
                    t: float = 0.0) -> "StockState":
        return cls(P=N - B - M, B=B, M=M, ihat_P=ihat_P, ihat_B=ihat_B, t=t)

    @property
    def total(self) -> float:
        return self.P + self.B + self.M

    def check(self, N: float, rtol: float = 1e-9) -> None:
        """Raise :class:`ConfigurationError` if the state is not valid for population ``N``."""
        for name in ("P", "B", "M", "ihat_P", "ihat_B"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ConfigurationError(f"stock {name} must be finite and >= 0, got {v}")
        if abs(self.total - N) > rtol * N:
            raise ConfigurationError(f"P + B + M = {self.total} differs from N = {N}")


@dataclass(frozen=True)
class Overrides:
    """Structural switches used by the intervention experiments."""

    demand_zero: bool = False
    potential_bandits_zero: bool = False

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


@dataclass(frozen=True)
class AuxiliaryValues:
    Y: float
    F: float
    pi: float
    R_B: float
    T_B: float
    I_B: float
    i_B: float
    T_P: float
    I_P: float
    i_P: float
    attractiveness: float
    B_star: float
    W: float
    L: float
    l: float
    p_M: float
    D_M: float
    m_B: float
    lambda_M: float
    lawlessness: float
    integrity: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class StateDerivative:
    dB: float
    dM: float
    dihat_P: float
    dihat_B: float

    def max_abs(self) -> float:
        return max(abs(self.dB), abs(self.dM), abs(self.dihat_P), abs(self.dihat_B))


def avoidance_probability(B: float, P: float, theta_B: float) -> float:
    """Probability that a peasant avoids banditry, ``1 / (1 + theta_B * B / P)``.

    With no peasants left but some bandits, the limit ``P -> 0`` gives 0.
    """
    if B <= 0:
        return 1.0
    if P <= 0:
        return 0.0
    return 1.0 / (1.0 + theta_B * B / P)


def theft_success(lambda_A: float, lambda_M: float) -> float:
    """Theft success rate under public and private enforcement."""
    return (1.0 - lambda_A) * (1.0 - lambda_M)


def bandit_appropriations(pi: float, F: float, Y: float) -> float:
    return pi * (1.0 - F) * Y


def bandit_income(R_B: float, lambda_M: float, t_M: float, B: float) -> tuple[float, float, float]:
    """Return ``(T_B, I_B, i_B)``: tribute, disposable income, income per bandit."""
    T_B = t_M * lambda_M * R_B
    I_B = R_B - T_B
    i_B = I_B / B if B > 0 else 0.0
    return T_B, I_B, i_B


def peasant_income(Y: float, R_B: float, p_M: float, M: float, P: float) -> tuple[float, float, float]:
    """Return ``(T_P, I_P, i_P)``.

    ``I_P`` is reported as computed and may be negative when the peasants are
    looted and taxed beyond their output.
    """
    T_P = p_M * M
    I_P = Y - R_B - T_P
    i_P = I_P / P if P > 0 else 0.0
    return T_P, I_P, i_P


def banditry_attractiveness(ihat_B: float, ihat_P: float) -> float:
    """Share ``ihat_B / (ihat_B + ihat_P)``; zero when both incomes vanish."""
    if ihat_B <= 0:
        return 0.0
    return min(1.0, ihat_B / (ihat_B + max(ihat_P, 0.0)))


def potential_bandits(P: float, B: float, attractiveness: float,
                      overrides: Overrides = Overrides()) -> float:
    if overrides.potential_bandits_zero:
        return 0.0
    return (P + B) * attractiveness


def protection_market(R_B: float, I_P: float, ihat_P: float, ihat_B: float, c_M: float,
                      overrides: Overrides = Overrides()) -> tuple[float, float, float, float, float]:
    """Return ``(W, L, l, p_M, D_M)`` for the market in private protection.

    Willingness to pay equals expected damages, the budget is disposable
    income floored at zero, and demand is spending over price.
    """
    W = R_B
    L = max(I_P, 0.0)
    l = min(W, L)
    p_M = max(ihat_P, ihat_B) + c_M
    D_M = 0.0 if overrides.demand_zero else l / p_M
    return W, L, l, p_M, D_M


def mafia_control(M: float, B: float, lambda_A: float, theta_M: float) -> tuple[float, float]:
    """Return ``(m_B, lambda_M)``.

    ``m_B`` is the mafia size needed to control all bandits. When it is zero
    (no bandits, or full public control) any mafia at all has full control.
    """
    m_B = (1.0 - lambda_A) * theta_M * B
    if m_B > 0:
        return m_B, min(1.0, M / m_B)
    return m_B, 1.0 if M > 0 else 0.0


def indices(P: float, B: float, M: float, I_P: float, Y: float) -> tuple[float, float]:
    """Return ``(lawlessness, integrity)``, both clamped to [0, 1]."""
    lawlessness = (B + M) / (P + B + M)
    integrity = I_P / Y if Y > 0 else 1.0
    return min(1.0, max(0.0, lawlessness)), min(1.0, max(0.0, integrity))


def evaluate_auxiliaries(state: StockState, params: Parameters,
                         overrides: Overrides = Overrides()) -> AuxiliaryValues:
    P, B, M = state.P, state.B, state.M
    Y = params.a_P * P
    m_B, lambda_M = mafia_control(M, B, params.lambda_A, params.theta_M)
    pi = theft_success(params.lambda_A, lambda_M)
    F = avoidance_probability(B, P, params.theta_B)
    R_B = bandit_appropriations(pi, F, Y)
    T_B, I_B, i_B = bandit_income(R_B, lambda_M, params.t_M, B)
    # price depends on perceived incomes only, so it precedes the peasant budget
    p_M = max(state.ihat_P, state.ihat_B) + params.c_M
    T_P, I_P, i_P = peasant_income(Y, R_B, p_M, M, P)
    attractiveness = banditry_attractiveness(state.ihat_B, state.ihat_P)
    B_star = potential_bandits(P, B, attractiveness, overrides)
    W, L, l, p_M, D_M = protection_market(R_B, I_P, state.ihat_P, state.ihat_B, params.c_M, overrides)
    lawlessness, integrity = indices(P, B, M, I_P, Y)
    return AuxiliaryValues(
        Y=Y, F=F, pi=pi, R_B=R_B, T_B=T_B, I_B=I_B, i_B=i_B, T_P=T_P, I_P=I_P, i_P=i_P,
        attractiveness=attractiveness, B_star=B_star, W=W, L=L, l=l, p_M=p_M, D_M=D_M,
        m_B=m_B, lambda_M=lambda_M, lawlessness=lawlessness, integrity=integrity,
    )


def derivatives(state: StockState, params: Parameters, overrides: Overrides = Overrides(),
                aux: AuxiliaryValues | None = None) -> StateDerivative:
    """Rates of change of ``B``, ``M`` and the two perceived incomes.

    Pass ``aux`` to reuse auxiliaries already evaluated at ``state``.
    """
    if aux is None:
        aux = evaluate_auxiliaries(state, params, overrides)
    return StateDerivative(
        dB=(aux.B_star - state.B) / params.tau_B,
        dM=(aux.D_M - state.M) / params.tau_M,
        dihat_P=(aux.i_P - state.ihat_P) / params.tau,
        dihat_B=(aux.i_B - state.ihat_B) / params.tau,
    )
