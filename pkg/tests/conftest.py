import pytest

from mafiasim import EXPERIMENTS, IntegrationConfig, builtin_experiment, run_scenario

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def runs():
    """The six built-in experiments at the default configuration."""
    return {name: run_scenario(builtin_experiment(name)) for name in EXPERIMENTS}


@pytest.fixture(scope="session")
def run_at():
    cache = {}

    def get(name, dt=0.125, method="explicit-euler"):
        key = (name, dt, method)
        if key not in cache:
            cache[key] = run_scenario(builtin_experiment(name), IntegrationConfig(dt=dt, method=method))
        return cache[key]

    return get


@pytest.fixture
def record():
    def _record(criterion: str, ok: bool, detail: str = ""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {criterion}" + (f"  [{detail}]" if detail else ""))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
