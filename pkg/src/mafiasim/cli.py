"""
Command-line front end.

::

    mafiasim experiment base --out out/
    mafiasim experiment all --check-table-6.3
    mafiasim run my.yaml --format json
    mafiasim equilibrium my.yaml
    mafiasim loops --out out/

Exit status: 0 success, 1 model or run failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import output
from .equilibrium import find_fixed_point, verify_fixed_point
from .errors import ConfigurationError, SimulationError
from .integrator import METHODS, IntegrationConfig
from .loops import build_causal_graph, find_named_loops, loop_report
from .scenario import (
    COMPARISON_WINDOWS,
    EXPERIMENTS,
    PUBLISHED_OUTCOMES,
    QUANTITIES,
    Scenario,
    apply_interventions,
    builtin_experiment,
    classify_outcomes,
    dump_scenario,
    load_scenario,
    run_scenario,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--dt", type=float, default=0.125, help="step size in months")
    p.add_argument("--method", choices=METHODS, default="explicit-euler")
    p.add_argument("--horizon", type=float, help="override the scenario horizon (months)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seedless", action="store_true",
                   help="accepted for compatibility; runs never use random numbers")
    p.add_argument("--dump-scenario", action="store_true",
                   help="print the effective scenario and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mafiasim", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("run", help="simulate a scenario file")
    p.add_argument("scenario")
    _common(p)

    p = sub.add_parser("experiment", help="run a built-in experiment, or all of them")
    p.add_argument("name", help=f"one of {', '.join(EXPERIMENTS)}, or all")
    p.add_argument("--check-table-6.3", dest="check_table", action="store_true",
                   help="exit 1 unless every outcome row matches the published table")
    p.add_argument("--threshold", type=float, default=0.01,
                   help="relative threshold for outcome signs")
    _common(p)

    p = sub.add_parser("equilibrium", help="solve the fixed point of a scenario's initial parameters")
    p.add_argument("scenario")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-horizon", type=float, default=5000.0)
    _common(p)

    p = sub.add_parser("loops", help="export the causal graph and its feedback loops")
    _common(p)
    return parser


def _config(args) -> IntegrationConfig:
    return IntegrationConfig(dt=args.dt, method=args.method)


def _prepare(scenario: Scenario, args) -> Scenario:
    return scenario.with_horizon(args.horizon) if args.horizon is not None else scenario


def _write_run(scenario: Scenario, args, out: Path, signs_for=None) -> tuple:
    traj = run_scenario(scenario, _config(args))
    ext = args.format
    text = output.to_csv(traj) if ext == "csv" else output.to_json(traj)
    (out / f"{scenario.name}.{ext}").write_text(text)
    (out / f"{scenario.name}.svg").write_text(output.to_svg(traj))
    signs = None
    if signs_for is not None:
        signs = signs_for(traj)
        (out / f"{scenario.name}.signs.txt").write_text(
            "\n".join(f"{q}: {s}" for q, s in zip(QUANTITIES, signs.as_tuple())) + "\n")
    return traj, signs


def cmd_experiment(args, out: Path) -> int:
    names = EXPERIMENTS if args.name == "all" else (args.name,)
    if args.name != "all" and args.name not in EXPERIMENTS:
        raise ConfigurationError(f"unknown experiment {args.name!r}; valid names: {', '.join(EXPERIMENTS)}, all")
    scenarios = [_prepare(builtin_experiment(n), args) for n in names]
    if args.dump_scenario:
        sys.stdout.write("---\n".join(dump_scenario(s) for s in scenarios))
        return 0
    out.mkdir(parents=True, exist_ok=True)
    summary = ["experiment," + ",".join(QUANTITIES) + ",published,match"]
    all_match = True
    for s in scenarios:
        (pre, post) = COMPARISON_WINDOWS[s.name]
        # a shortened horizon moves the post window to the end of the run
        span = post[1] - post[0]
        post = (s.horizon - span, s.horizon)
        published = PUBLISHED_OUTCOMES[s.name]
        if post[0] < pre[1]:
            _write_run(s, args, out)
            all_match = False
            summary.append(f"{s.name}," + ",".join(["n/a"] * len(QUANTITIES)) + f",{' '.join(published)},no")
            continue
        _, signs = _write_run(s, args, out,
                              lambda tr, pre=pre, post=post: classify_outcomes(tr, pre, post, args.threshold))
        match = signs.as_tuple() == published
        all_match &= match
        summary.append(f"{s.name}," + ",".join(signs.as_tuple()) + f",{' '.join(published)},{'yes' if match else 'no'}")
    (out / "summary.csv").write_text("\n".join(summary) + "\n")
    if args.check_table:
        for line in summary[1:]:
            print(line)
        if not all_match:
            print("outcome signs do not match the published table", file=sys.stderr)
            return 1
    return 0


def cmd_run(args, out: Path) -> int:
    scenario = _prepare(load_scenario(args.scenario), args)
    if args.dump_scenario:
        sys.stdout.write(dump_scenario(scenario))
        return 0
    out.mkdir(parents=True, exist_ok=True)
    first = min((iv.time for iv in scenario.interventions if iv.time > 0), default=None)
    signs = None
    if first is not None:
        # initial equilibrium against the end of the run, over equal spans
        span = min(20.0, first, scenario.horizon - first)
        end = scenario.horizon

        def signs(traj):
            return classify_outcomes(traj, (first - span, first), (end - span, end))

    _write_run(scenario, args, out, signs)
    return 0


def cmd_equilibrium(args, out: Path) -> int:
    scenario = _prepare(load_scenario(args.scenario), args)
    if args.dump_scenario:
        sys.stdout.write(dump_scenario(scenario))
        return 0
    params, overrides = apply_interventions(scenario, 0.0)
    fp = find_fixed_point(params, scenario.initial_guess(), args.tol, args.max_horizon,
                          overrides, _config(args))
    report = verify_fixed_point(fp.state, params, args.tol, overrides)
    st = fp.state
    lines = [f"scenario        {scenario.name}",
             f"converged       {'yes' if fp.converged else 'no'}",
             f"relaxation      {output.fmt(fp.horizon)} months",
             f"P               {output.fmt(st.P)}",
             f"B               {output.fmt(st.B)}",
             f"M               {output.fmt(st.M)}",
             f"ihat_P          {output.fmt(st.ihat_P)}",
             f"ihat_B          {output.fmt(st.ihat_B)}"] + report.lines()
    text = "\n".join(lines) + "\n"
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{scenario.name}.equilibrium.txt").write_text(text)
    sys.stdout.write(text)
    return 0 if fp.converged else 1


def cmd_loops(args, out: Path) -> int:
    g = build_causal_graph()
    out.mkdir(parents=True, exist_ok=True)
    (out / "causal_graph.csv").write_text(g.edge_list())
    (out / "causal_graph.dot").write_text(g.to_dot())
    report = loop_report(g)
    (out / "loops.txt").write_text(report)
    sys.stdout.write("\n".join(report.splitlines()[:8]) + "\n")
    return 0 if all(c.ok for c in find_named_loops(g)) else 1


COMMANDS = {"run": cmd_run, "experiment": cmd_experiment,
            "equilibrium": cmd_equilibrium, "loops": cmd_loops}


def run_command(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, Path(args.out))
    except ConfigurationError as exc:
        print(f"mafiasim: error: {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"mafiasim: run failed: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"mafiasim: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
