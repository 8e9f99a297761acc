"""
Timed interventions, the six built-in experiments and directional outcome
classification.

Scenario files are YAML documents with ``parameters``, ``initial`` and
``interventions`` sections::

    name: base
    horizon: 300.0
    parameters: {a_P: 10.0, theta_B: 3.0, ...}
    initial: {B: 3.0, M: 0.0, ihat_P: 9.98, ihat_B: 0.28}
    interventions:
    - {time: 60.0, target: lambda_A, value: 0.0}

``initial`` is only a guess: runs start from the fixed point reached from it
under the initial parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
import yaml

from .equilibrium import DEFAULT_MAX_HORIZON, DEFAULT_TOL, FixedPointResult, find_fixed_point
from .errors import ConfigurationError
from .integrator import IntegrationConfig, Trajectory, apply_action, simulate
from .model import Overrides, Parameters, StockState

HORIZON = 300.0
UNIFICATION = 60.0
SECOND_INTERVENTION = 150.0

EXPERIMENTS = (
    "base",
    "low-output",
    "productivity-shock",
    "eliminate-mafia",
    "no-bandits",
    "state-control",
)

QUANTITIES = ("Peasants", "Bandits", "Mafia", "Lawlessness", "Economic integrity")

# Published direction of change per experiment, in QUANTITIES order.
PUBLISHED_OUTCOMES = {
    "base": ("-", "+", "+", "+", "-"),
    "low-output": ("-", "+", "n/c", "+", "-"),
    "productivity-shock": ("+", "-", "+", "-", "+"),
    "eliminate-mafia": ("-", "+", "-", "+", "-"),
    "no-bandits": ("+", "-", "-", "-", "+"),
    "state-control": ("+", "-", "-", "-", "+"),
}

# Pre/post windows: single-intervention runs compare against the
# pre-unification state, two-intervention runs against the post-unification one.
COMPARISON_WINDOWS = {
    name: (((40.0, 60.0) if name in ("base", "low-output") else (130.0, 150.0)), (280.0, 300.0))
    for name in EXPERIMENTS
}

BASE_GUESS = {"B": 3.0, "M": 0.0, "ihat_P": 9.98, "ihat_B": 0.28}
LOW_OUTPUT_GUESS = {"B": 10.0, "M": 0.0, "ihat_P": 1.0, "ihat_B": 0.1}

Value = Union[float, bool]


@dataclass(frozen=True)
class Intervention:
    """Set ``target`` (a parameter or override name) to ``value`` at ``time``."""

    time: float
    target: str
    value: Value

    def __post_init__(self):
        if not self.time >= 0:
            raise ConfigurationError(f"intervention time must be >= 0, got {self.time}")
        if self.target in Overrides.names():
            if not isinstance(self.value, (bool, int)) or self.value not in (0, 1):
                raise ConfigurationError(f"override {self.target} takes a boolean, got {self.value!r}")
            object.__setattr__(self, "value", bool(self.value))
        elif self.target in Parameters.names():
            # validates the value against the parameter's own invariants
            Parameters().with_value(self.target, self.value)
            object.__setattr__(self, "value", float(self.value))
        else:
            valid = Parameters.names() + Overrides.names()
            raise ConfigurationError(f"unknown intervention target {self.target!r}; valid: {', '.join(valid)}")


@dataclass(frozen=True)
class Scenario:
    name: str
    initial_params: Parameters
    interventions: tuple[Intervention, ...] = ()
    horizon: float = HORIZON
    initial: dict = field(default_factory=lambda: dict(BASE_GUESS))

    def __post_init__(self):
        ivs = tuple(sorted(self.interventions, key=lambda iv: iv.time))
        object.__setattr__(self, "interventions", ivs)
        if not self.horizon > 0:
            raise ConfigurationError(f"horizon must be > 0, got {self.horizon}")
        for iv in ivs:
            if iv.time > self.horizon:
                raise ConfigurationError(f"intervention at t={iv.time} is after the horizon {self.horizon}")
        unknown = set(self.initial) - {"P", "B", "M", "ihat_P", "ihat_B"}
        if unknown:
            raise ConfigurationError(f"unknown initial stocks: {', '.join(sorted(unknown))}")

    def with_horizon(self, horizon: float) -> "Scenario":
        return Scenario(self.name, self.initial_params,
                        tuple(iv for iv in self.interventions if iv.time <= horizon),
                        horizon, dict(self.initial))

    def initial_guess(self) -> StockState:
        N = self.initial_params.N
        g = {**BASE_GUESS, **self.initial}
        state = StockState.from_stocks(N, float(g["B"]), float(g["M"]),
                                       float(g["ihat_P"]), float(g["ihat_B"]))
        if "P" in g and abs(float(g["P"]) - state.P) > 1e-9 * N:
            raise ConfigurationError(f"initial P + B + M = {float(g['P']) + state.B + state.M} differs from N = {N}")
        state.check(N)
        return state


@dataclass(frozen=True)
class OutcomeSigns:
    peasants: str
    bandits: str
    mafia: str
    lawlessness: str
    integrity: str

    def as_tuple(self) -> tuple[str, ...]:
        return (self.peasants, self.bandits, self.mafia, self.lawlessness, self.integrity)

    def __str__(self):
        return "  ".join(f"{q}: {s}" for q, s in zip(QUANTITIES, self.as_tuple()))


def builtin_experiment(name: str) -> Scenario:
    """One of the six named experiments; see :data:`EXPERIMENTS`."""
    if name not in EXPERIMENTS:
        raise ConfigurationError(f"unknown experiment {name!r}; valid names: {', '.join(EXPERIMENTS)}")
    low = name in ("low-output", "productivity-shock")
    params = Parameters(a_P=1.0) if low else Parameters()
    ivs = [Intervention(UNIFICATION, "lambda_A", 0.0)]
    second = {
        "productivity-shock": ("a_P", 10.0),
        "eliminate-mafia": ("demand_zero", True),
        "no-bandits": ("potential_bandits_zero", True),
        "state-control": ("lambda_A", 0.5),
    }.get(name)
    if second:
        ivs.append(Intervention(SECOND_INTERVENTION, *second))
    guess = LOW_OUTPUT_GUESS if low else BASE_GUESS
    return Scenario(name, params, tuple(ivs), HORIZON, dict(guess))


def apply_interventions(scenario: Scenario, t: float,
                        current: tuple[Parameters, Overrides] | None = None) -> tuple[Parameters, Overrides]:
    """Parameters and overrides in effect at time ``t``."""
    params, overrides = current if current is not None else (scenario.initial_params, Overrides())
    for iv in scenario.interventions:
        if iv.time <= t:
            params, overrides = apply_action(params, overrides, iv.target, iv.value)
    return params, overrides


def equilibrate(scenario: Scenario, tol: float = DEFAULT_TOL,
                max_horizon: float = DEFAULT_MAX_HORIZON,
                config: IntegrationConfig = IntegrationConfig()) -> FixedPointResult:
    """Fixed point for the scenario's parameters at t = 0, from its initial guess."""
    params, overrides = apply_interventions(scenario, 0.0)
    return find_fixed_point(params, scenario.initial_guess(), tol, max_horizon, overrides, config)


def run_scenario(scenario: Scenario, config: IntegrationConfig = IntegrationConfig()) -> Trajectory:
    """Equilibrate, then simulate the scenario to its horizon.

    The fixed point is stored under ``traj.meta["equilibrium"]``.
    """
    fp = equilibrate(scenario, config=config)
    traj = simulate(fp.state, scenario.initial_params, scenario, scenario.horizon, config, name=scenario.name)
    traj.meta["equilibrium"] = fp
    return traj


def _sign(pre: float, post: float, threshold: float) -> str:
    if abs(pre) < 0.01:
        delta = 0.005
    else:
        delta = threshold * abs(pre)
    if post - pre > delta:
        return "+"
    if pre - post > delta:
        return "-"
    return "n/c"


def classify_outcomes(traj: Trajectory, pre_window: tuple[float, float],
                      post_window: tuple[float, float], threshold: float = 0.01) -> OutcomeSigns:
    """Direction of change of each summary quantity between two windows.

    Populations are compared as fractions of the total population, the
    indices as they are. A change counts when it exceeds ``threshold``
    relative to the pre-window mean, or 0.005 absolute when that mean is
    below 0.01.
    """
    if not threshold > 0:
        raise ConfigurationError("threshold must be > 0")
    if not pre_window[1] <= post_window[0]:
        raise ConfigurationError("pre window must precede post window")
    pre = traj.window(*pre_window)
    post = traj.window(*post_window)
    if not pre or not post:
        raise ConfigurationError(f"empty window: pre={pre_window} post={post_window}")

    def means(samples):
        N = samples[0].params.N
        return [
            np.mean([s.state.P / N for s in samples]),
            np.mean([s.state.B / N for s in samples]),
            np.mean([s.state.M / N for s in samples]),
            np.mean([s.aux.lawlessness for s in samples]),
            np.mean([s.aux.integrity for s in samples]),
        ]

    signs = [_sign(a, b, threshold) for a, b in zip(means(pre), means(post))]
    return OutcomeSigns(*signs)


def classify_experiment(traj: Trajectory, name: str | None = None, threshold: float = 0.01) -> OutcomeSigns:
    pre, post = COMPARISON_WINDOWS[name or traj.name]
    return classify_outcomes(traj, pre, post, threshold)


# -- file format ---------------------------------------------------------------

def scenario_to_dict(scenario: Scenario) -> dict:
    initial = {**BASE_GUESS, **scenario.initial}
    initial.pop("P", None)
    return {
        "name": scenario.name,
        "horizon": float(scenario.horizon),
        "parameters": scenario.initial_params.as_dict(),
        "initial": {k: float(initial[k]) for k in ("B", "M", "ihat_P", "ihat_B")},
        "interventions": [
            {"time": float(iv.time), "target": iv.target, "value": iv.value}
            for iv in scenario.interventions
        ],
    }


def scenario_from_dict(doc: dict, name: str = "scenario") -> Scenario:
    if not isinstance(doc, dict):
        raise ConfigurationError("scenario document must be a mapping")
    unknown = set(doc) - {"name", "horizon", "parameters", "initial", "interventions"}
    if unknown:
        raise ConfigurationError(f"unknown scenario sections: {', '.join(sorted(unknown))}")
    raw_params = doc.get("parameters") or {}
    if not isinstance(raw_params, dict):
        raise ConfigurationError("parameters must be a mapping of name: value")
    bad = set(raw_params) - set(Parameters.names())
    if bad:
        raise ConfigurationError(f"unknown parameters: {', '.join(sorted(bad))}")
    try:
        params = Parameters(**{k: float(v) for k, v in raw_params.items()})
        ivs = []
        for rec in doc.get("interventions") or []:
            if not isinstance(rec, dict) or set(rec) != {"time", "target", "value"}:
                raise ConfigurationError(f"intervention must have time, target and value: {rec!r}")
            ivs.append(Intervention(float(rec["time"]), str(rec["target"]), rec["value"]))
        initial = {k: float(v) for k, v in (doc.get("initial") or {}).items()}
        return Scenario(str(doc.get("name", name)), params, tuple(ivs),
                        float(doc.get("horizon", HORIZON)), initial)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"bad scenario value: {exc}") from exc


def dump_scenario(scenario: Scenario) -> str:
    return yaml.safe_dump(scenario_to_dict(scenario), sort_keys=False, default_flow_style=None)


def load_scenario(source: str | Path) -> Scenario:
    """Read a scenario from a path or from YAML text."""
    path = Path(source) if not (isinstance(source, str) and "\n" in source) else None
    if path is not None:
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigurationError(f"cannot read scenario file {path}: {exc.strerror}") from exc
        default_name = path.stem
    else:
        text, default_name = source, "scenario"
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"scenario file is not valid YAML: {exc}".splitlines()[0]) from exc
    return scenario_from_dict(doc, default_name)
