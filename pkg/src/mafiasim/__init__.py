"""Continuous-time model of peasants, bandits and the mafia."""

from .equilibrium import FixedPointResult, find_fixed_point, verify_fixed_point
from .errors import ConfigurationError, SimulationError
from .integrator import IntegrationConfig, Trajectory, settling_time, simulate, step
from .loops import build_causal_graph, enumerate_loops, find_named_loops
from .model import (
    AuxiliaryValues,
    Overrides,
    Parameters,
    StateDerivative,
    StockState,
    derivatives,
    evaluate_auxiliaries,
)
from .scenario import (
    EXPERIMENTS,
    Intervention,
    Scenario,
    builtin_experiment,
    classify_experiment,
    classify_outcomes,
    run_scenario,
)

__version__ = "0.1.0"
