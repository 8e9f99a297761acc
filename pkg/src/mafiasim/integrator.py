"""Fixed-step integration of the stock equations."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, fields
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .errors import ConfigurationError, SimulationError
from .model import (
    AuxiliaryValues,
    Overrides,
    Parameters,
    StateDerivative,
    StockState,
    derivatives,
    evaluate_auxiliaries,
)

if TYPE_CHECKING:
    from .scenario import Intervention

log = logging.getLogger(__name__)

METHODS = ("explicit-euler", "classical-rk4")
_STEP_TOL = 1e-9


@dataclass(frozen=True)
class IntegrationConfig:
    dt: float = 0.125
    method: str = "explicit-euler"
    sample_interval: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError(f"dt must be > 0, got {self.dt}")
        if self.method not in METHODS:
            raise ConfigurationError(f"method must be one of {', '.join(METHODS)}, got {self.method!r}")
        if self.sample_interval < self.dt:
            raise ConfigurationError("sample_interval must be >= dt")
        steps_between_samples(self.sample_interval, self.dt, "sample_interval")

    @property
    def sample_every(self) -> int:
        return steps_between_samples(self.sample_interval, self.dt, "sample_interval")


def steps_between_samples(span: float, dt: float, what: str) -> int:
    """Number of whole steps of size ``dt`` in ``span``; raise if not integral."""
    n = span / dt
    k = round(n)
    if abs(n - k) > _STEP_TOL * max(1.0, n):
        raise ConfigurationError(f"{what} = {span} is not a multiple of dt = {dt}")
    return k


@dataclass(frozen=True)
class Sample:
    t: float
    state: StockState
    aux: AuxiliaryValues
    params: Parameters
    overrides: Overrides


@dataclass
class Trajectory:
    """Sampled output of :func:`simulate`.

    Each sample keeps the stocks, every auxiliary, and the parameters and
    overrides in effect at that instant.
    """

    samples: list[Sample]
    config: IntegrationConfig
    name: str = ""
    clamp_events: int = 0
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def series(self, name: str) -> np.ndarray:
        """Time series of a stock (``P``, ``B``, ``M``, ``ihat_P``, ``ihat_B``) or auxiliary."""
        first = self.samples[0]
        if hasattr(first.state, name) and name != "t":
            return np.array([getattr(s.state, name) for s in self.samples])
        if hasattr(first.aux, name):
            return np.array([getattr(s.aux, name) for s in self.samples])
        raise KeyError(name)

    def at(self, t: float) -> Sample:
        for s in self.samples:
            if abs(s.t - t) <= _STEP_TOL * max(1.0, abs(t)):
                return s
        raise KeyError(f"no sample at t={t}")

    @property
    def final(self) -> Sample:
        return self.samples[-1]

    def window(self, t0: float, t1: float) -> list[Sample]:
        eps = _STEP_TOL * max(1.0, abs(t1))
        return [s for s in self.samples if t0 - eps <= s.t <= t1 + eps]


def _check_finite(state: StockState, aux: AuxiliaryValues, d: StateDerivative) -> None:
    for f in fields(d):
        if not math.isfinite(getattr(d, f.name)):
            bad = [k for k, v in aux.as_dict().items() if not math.isfinite(v)]
            culprit = bad[0] if bad else f.name
            raise SimulationError(f"non-finite {f.name} at t={state.t}: auxiliary {culprit} is not finite")


def _rates(state: StockState, params: Parameters, overrides: Overrides) -> tuple[float, float, float, float]:
    aux = evaluate_auxiliaries(state, params, overrides)
    d = derivatives(state, params, overrides, aux)
    _check_finite(state, aux, d)
    return d.dB, d.dM, d.dihat_P, d.dihat_B


def _advance(state: StockState, rates: Iterable[float], h: float, N: float) -> StockState:
    dB, dM, dP, dI = rates
    B = state.B + h * dB
    M = state.M + h * dM
    return StockState(N - B - M, B, M, state.ihat_P + h * dP, state.ihat_B + h * dI, state.t + h)


def _step(state, params, overrides, dt, method):
    """One unclamped step; returns the raw new state."""
    N = params.N
    k1 = _rates(state, params, overrides)
    if method == "explicit-euler":
        return _advance(state, k1, dt, N)
    k2 = _rates(_advance(state, k1, dt / 2, N), params, overrides)
    k3 = _rates(_advance(state, k2, dt / 2, N), params, overrides)
    k4 = _rates(_advance(state, k3, dt, N), params, overrides)
    rates = [(a + 2 * b + 2 * c + d) / 6 for a, b, c, d in zip(k1, k2, k3, k4)]
    return _advance(state, rates, dt, N)


def _clamp(raw: StockState, N: float) -> tuple[StockState, bool]:
    B = min(max(raw.B, 0.0), N)
    M = min(max(raw.M, 0.0), N - B)
    ihat_P = max(raw.ihat_P, 0.0)
    ihat_B = max(raw.ihat_B, 0.0)
    clamped = (B, M, ihat_P, ihat_B) != (raw.B, raw.M, raw.ihat_P, raw.ihat_B)
    return StockState(N - B - M, B, M, ihat_P, ihat_B, raw.t), clamped


def step(state: StockState, params: Parameters, overrides: Overrides = Overrides(),
         dt: float = 0.125, method: str = "explicit-euler") -> StockState:
    """Advance ``state`` by ``dt`` months.

    ``B`` and ``M`` are clamped to ``[0, N]`` (perceived incomes to ``>= 0``)
    and ``P`` is recomputed as ``N - B - M``.

    Raises
    ------
    SimulationError
        If any rate evaluates to a non-finite value.
    """
    if not dt > 0:
        raise ConfigurationError(f"dt must be > 0, got {dt}")
    if method not in METHODS:
        raise ConfigurationError(f"method must be one of {', '.join(METHODS)}, got {method!r}")
    return _clamp(_step(state, params, overrides, dt, method), params.N)[0]


def apply_action(params: Parameters, overrides: Overrides, target: str, value) -> tuple[Parameters, Overrides]:
    if target in Overrides.names():
        return params, Overrides(**{**{n: getattr(overrides, n) for n in Overrides.names()}, target: bool(value)})
    return params.with_value(target, value), overrides


def simulate(initial: StockState, params: Parameters, scenario=None, horizon: float | None = None,
             config: IntegrationConfig = IntegrationConfig(), overrides: Overrides = Overrides(),
             name: str = "") -> Trajectory:
    """Integrate from ``initial`` to ``horizon`` months.

    Parameters
    ----------
    initial : StockState
        Starting state; its ``t`` is the start time.
    params : Parameters
        Parameters at the start of the run.
    scenario : Scenario or sequence of Intervention, optional
        Timed interventions. A :class:`~mafiasim.scenario.Scenario` also
        supplies ``horizon`` when none is given; its ``initial_params`` are
        ignored in favour of ``params``.
    horizon : float
        End time in months. A sample is always recorded there.
    config : IntegrationConfig
        Step size, scheme and sampling interval.

    Interventions due at a step boundary are applied before the step that
    starts there, so the sample at that time already reflects them.
    """
    interventions: list[Intervention] = []
    if scenario is not None:
        interventions = list(getattr(scenario, "interventions", scenario))
        if horizon is None:
            horizon = getattr(scenario, "horizon", None)
        name = name or getattr(scenario, "name", "")
    if horizon is None:
        raise ConfigurationError("horizon is required")

    t0 = initial.t
    span = horizon - t0
    if not span > 0:
        raise ConfigurationError(f"horizon {horizon} must be after the start time {t0}")
    dt = config.dt
    n_steps = steps_between_samples(span, dt, "horizon")
    every = config.sample_every

    due: list[tuple[int, Intervention]] = []
    for iv in sorted(interventions, key=lambda iv: iv.time):
        if iv.time < t0 or iv.time > horizon:
            raise ConfigurationError(f"intervention time {iv.time} outside [{t0}, {horizon}]")
        due.append((steps_between_samples(iv.time - t0, dt, f"intervention time {iv.time}"), iv))

    initial.check(params.N)
    state = initial
    samples: list[Sample] = []
    clamps = 0
    j = 0
    for k in range(n_steps + 1):
        while j < len(due) and due[j][0] == k:
            params, overrides = apply_action(params, overrides, due[j][1].target, due[j][1].value)
            j += 1
        if k % every == 0 or k == n_steps:
            samples.append(Sample(state.t, state, evaluate_auxiliaries(state, params, overrides),
                                  params, overrides))
        if k == n_steps:
            break
        raw = _step(state, params, overrides, dt, config.method)
        state, clamped = _clamp(raw, params.N)
        # t from the step index avoids accumulated rounding in sample times
        state = StockState(state.P, state.B, state.M, state.ihat_P, state.ihat_B, t0 + (k + 1) * dt)
        if clamped:
            clamps += 1
    if clamps:
        log.warning("%s: stock clamping activated on %d steps", name or "run", clamps)
    return Trajectory(samples, config, name=name, clamp_events=clamps)


def settling_time(traj: Trajectory, eps: float) -> float | None:
    """Earliest sample time after which every population stock changes by
    less than ``eps`` (relative, per month) until the end of the run.

    Returns ``None`` if the last sampled interval still exceeds ``eps``.
    """
    if not eps > 0:
        raise ConfigurationError("eps must be > 0")
    if not traj.samples:
        raise ConfigurationError("empty trajectory")
    t = traj.times
    if len(t) == 1:
        return float(t[0])
    x = np.column_stack([traj.series("P"), traj.series("B"), traj.series("M")])
    dx = np.abs(np.diff(x, axis=0)) / np.diff(t)[:, None]
    base = np.abs(x[:-1])
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(dx == 0, 0.0, dx / base)
    moving = np.nonzero(rel.max(axis=1) >= eps)[0]
    if moving.size == 0:
        return float(t[0])
    last = moving[-1]
    if last == len(t) - 2:
        return None
    return float(t[last + 1])
