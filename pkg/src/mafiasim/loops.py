"""
Signed causal graph of the model and its feedback loops.

One node per model symbol, one edge per argument of each defining formula.
Edge polarity is the sign of the partial derivative of the target's formula
with respect to the source, taken where all quantities are positive and the
controls lie strictly inside (0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable

import networkx as nx

STOCKS = ("Peasants", "Bandits", "Mafia")


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    polarity: int
    provenance: str

    @property
    def sign(self) -> str:
        return "+" if self.polarity > 0 else "-"


@dataclass(frozen=True)
class SignedDigraph:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        seen = set()
        for e in self.edges:
            if e.polarity not in (1, -1):
                raise ValueError(f"polarity must be +1 or -1: {e}")
            if e.source not in self.nodes or e.target not in self.nodes:
                raise ValueError(f"edge endpoint not in graph: {e}")
            if (e.source, e.target) in seen:
                raise ValueError(f"duplicate edge {e.source} -> {e.target}")
            seen.add((e.source, e.target))

    def edge(self, source: str, target: str) -> Edge | None:
        for e in self.edges:
            if e.source == source and e.target == target:
                return e
        return None

    def without_edge(self, source: str, target: str) -> "SignedDigraph":
        return SignedDigraph(self.nodes, tuple(e for e in self.edges
                                                if (e.source, e.target) != (source, target)))

    def with_polarity(self, source: str, target: str, polarity: int) -> "SignedDigraph":
        edges = tuple(Edge(e.source, e.target, polarity, e.provenance)
                      if (e.source, e.target) == (source, target) else e for e in self.edges)
        return SignedDigraph(self.nodes, edges)

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        for e in self.edges:
            g.add_edge(e.source, e.target, polarity=e.polarity, provenance=e.provenance)
        return g

    def edge_list(self) -> str:
        lines = ["from,to,polarity,provenance"]
        lines += [f"{e.source},{e.target},{e.sign},{e.provenance}" for e in self.edges]
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        lines = ["digraph causal {", "  rankdir=LR;"]
        for n in self.nodes:
            shape = "box" if n in STOCKS else "ellipse"
            lines.append(f'  "{n}" [shape={shape}];')
        for e in self.edges:
            lines.append(f'  "{e.source}" -> "{e.target}" [label="{e.sign}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FeedbackLoop:
    cycle: tuple[str, ...]
    polarity: int
    name: str = ""

    @property
    def kind(self) -> str:
        return "reinforcing" if self.polarity > 0 else "balancing"

    def __str__(self):
        label = f"{self.name} " if self.name else ""
        return f"{label}({'R' if self.polarity > 0 else 'B'}) " + " -> ".join(self.cycle + self.cycle[:1])


# (source, target, sign, defining formula)
_MODEL_EDGES = [
    ("Peasants", "Y", +1, "Y = a_P*P"),
    ("a_P", "Y", +1, "Y = a_P*P"),
    ("Bandits", "F", -1, "F = 1/(1 + theta_B*B/P)"),
    ("Peasants", "F", +1, "F = 1/(1 + theta_B*B/P)"),
    ("theta_B", "F", -1, "F = 1/(1 + theta_B*B/P)"),
    ("lambda_A", "pi", -1, "pi = (1 - lambda_A)(1 - lambda_M)"),
    ("lambda_M", "pi", -1, "pi = (1 - lambda_A)(1 - lambda_M)"),
    ("pi", "R_B", +1, "R_B = pi(1 - F)Y"),
    ("F", "R_B", -1, "R_B = pi(1 - F)Y"),
    ("Y", "R_B", +1, "R_B = pi(1 - F)Y"),
    ("t_M", "T_B", +1, "T_B = t_M*lambda_M*R_B"),
    ("lambda_M", "T_B", +1, "T_B = t_M*lambda_M*R_B"),
    ("R_B", "T_B", +1, "T_B = t_M*lambda_M*R_B"),
    ("R_B", "I_B", +1, "I_B = R_B - T_B"),
    ("T_B", "I_B", -1, "I_B = R_B - T_B"),
    ("I_B", "i_B", +1, "i_B = I_B/B"),
    ("Bandits", "i_B", -1, "i_B = I_B/B"),
    ("i_B", "ihat_B", +1, "dihat_B/dt = (i_B - ihat_B)/tau"),
    ("ihat_P", "p_M", +1, "p_M = max(ihat_P, ihat_B) + c_M"),
    ("ihat_B", "p_M", +1, "p_M = max(ihat_P, ihat_B) + c_M"),
    ("c_M", "p_M", +1, "p_M = max(ihat_P, ihat_B) + c_M"),
    ("p_M", "T_P", +1, "T_P = p_M*M"),
    ("Mafia", "T_P", +1, "T_P = p_M*M"),
    ("Y", "I_P", +1, "I_P = Y - R_B - T_P"),
    ("R_B", "I_P", -1, "I_P = Y - R_B - T_P"),
    ("T_P", "I_P", -1, "I_P = Y - R_B - T_P"),
    ("I_P", "i_P", +1, "i_P = I_P/P"),
    ("Peasants", "i_P", -1, "i_P = I_P/P"),
    ("i_P", "ihat_P", +1, "dihat_P/dt = (i_P - ihat_P)/tau"),
    ("ihat_B", "attractiveness", +1, "attractiveness = ihat_B/(ihat_B + ihat_P)"),
    ("ihat_P", "attractiveness", -1, "attractiveness = ihat_B/(ihat_B + ihat_P)"),
    ("Peasants", "B_star", +1, "B_star = (P + B)*attractiveness"),
    ("Bandits", "B_star", +1, "B_star = (P + B)*attractiveness"),
    ("attractiveness", "B_star", +1, "B_star = (P + B)*attractiveness"),
    ("B_star", "bandit_recruitment", +1, "bandit_recruitment = (B_star - B)/tau_B"),
    ("Bandits", "bandit_recruitment", -1, "bandit_recruitment = (B_star - B)/tau_B"),
    ("bandit_recruitment", "Bandits", +1, "dB/dt = bandit_recruitment"),
    ("R_B", "W", +1, "W = R_B"),
    ("I_P", "L", +1, "L = max(I_P, 0)"),
    ("W", "l", +1, "l = min(W, L)"),
    ("L", "l", +1, "l = min(W, L)"),
    ("l", "D_M", +1, "D_M = l/p_M"),
    ("p_M", "D_M", -1, "D_M = l/p_M"),
    ("D_M", "mafia_recruitment", +1, "mafia_recruitment = (D_M - M)/tau_M"),
    ("Mafia", "mafia_recruitment", -1, "mafia_recruitment = (D_M - M)/tau_M"),
    ("mafia_recruitment", "Mafia", +1, "dM/dt = mafia_recruitment"),
    ("lambda_A", "m_B", -1, "m_B = (1 - lambda_A)*theta_M*B"),
    ("theta_M", "m_B", +1, "m_B = (1 - lambda_A)*theta_M*B"),
    ("Bandits", "m_B", +1, "m_B = (1 - lambda_A)*theta_M*B"),
    ("Mafia", "lambda_M", +1, "lambda_M = min(1, M/m_B)"),
    ("m_B", "lambda_M", -1, "lambda_M = min(1, M/m_B)"),
    ("Bandits", "Peasants", -1, "P = N - B - M"),
    ("Mafia", "Peasants", -1, "P = N - B - M"),
    ("Bandits", "lawlessness", +1, "lawlessness = (B + M)/N"),
    ("Mafia", "lawlessness", +1, "lawlessness = (B + M)/N"),
    ("I_P", "integrity", +1, "integrity = I_P/Y"),
    ("Y", "integrity", -1, "integrity = I_P/Y"),
]

NAMED_LOOPS = {
    "R1": ("peasant prosperity", +1,
           ("Peasants", "Y", "I_P", "i_P", "ihat_P", "attractiveness", "B_star",
            "bandit_recruitment", "Bandits")),
    "B1": ("plenty to lose", -1,
           ("Peasants", "Y", "R_B", "I_P", "i_P", "ihat_P", "attractiveness", "B_star",
            "bandit_recruitment", "Bandits")),
    "R2": ("attractiveness of banditry", +1,
           ("R_B", "I_B", "i_B", "ihat_B", "attractiveness", "B_star",
            "bandit_recruitment", "Bandits", "F")),
    "R3": ("peasants lose", +1,
           ("Bandits", "F", "R_B", "I_P", "i_P", "ihat_P", "attractiveness", "B_star",
            "bandit_recruitment")),
    "B2": ("demand for protection", -1,
           ("R_B", "W", "l", "D_M", "mafia_recruitment", "Mafia", "lambda_M", "pi")),
}

PUBLISHED_MAFIA_LOOP_COUNT = 21


def build_causal_graph() -> SignedDigraph:
    nodes: list[str] = []
    for s, t, _, _ in _MODEL_EDGES:
        for n in (s, t):
            if n not in nodes:
                nodes.append(n)
    return SignedDigraph(tuple(nodes), tuple(Edge(*e) for e in _MODEL_EDGES))


def canonical_rotation(cycle: Iterable[str]) -> tuple[str, ...]:
    """Rotate a cycle so that its smallest node comes first."""
    c = tuple(cycle)
    i = c.index(min(c))
    return c[i:] + c[:i]


def loop_polarity(g: SignedDigraph, cycle: tuple[str, ...]) -> int:
    signs = []
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        e = g.edge(a, b)
        if e is None:
            raise KeyError(f"no edge {a} -> {b}")
        signs.append(e.polarity)
    return prod(signs)


def enumerate_loops(g: SignedDigraph, through: str | None = None) -> list[FeedbackLoop]:
    """All elementary circuits of ``g``, optionally only those through ``through``.

    Loops are returned in canonical rotation, sorted lexicographically.
    """
    cycles = [canonical_rotation(c) for c in nx.simple_cycles(g.to_networkx())]
    if through is not None:
        cycles = [c for c in cycles if through in c]
    names = {canonical_rotation(chain): key for key, (_, _, chain) in NAMED_LOOPS.items()}
    return [FeedbackLoop(c, loop_polarity(g, c), names.get(c, "")) for c in sorted(cycles)]


@dataclass(frozen=True)
class NamedLoopCheck:
    key: str
    title: str
    expected: int
    found: bool
    polarity: int | None
    problem: str

    @property
    def ok(self) -> bool:
        return self.found and self.polarity == self.expected


def find_named_loops(g: SignedDigraph) -> list[NamedLoopCheck]:
    """Check that each named loop exists in ``g`` with its expected polarity."""
    report = []
    for key, (title, expected, chain) in NAMED_LOOPS.items():
        missing = [f"{a} -> {b}" for a, b in zip(chain, chain[1:] + chain[:1]) if g.edge(a, b) is None]
        if missing:
            report.append(NamedLoopCheck(key, title, expected, False, None,
                                         f"missing edge {', '.join(missing)}"))
            continue
        pol = loop_polarity(g, chain)
        problem = ""
        if pol != expected:
            want = "reinforcing" if expected > 0 else "balancing"
            problem = f"polarity mismatch: expected {want}, signs " + ", ".join(
                f"{a}->{b} {g.edge(a, b).sign}" for a, b in zip(chain, chain[1:] + chain[:1]))
        report.append(NamedLoopCheck(key, title, expected, True, pol, problem))
    return report


def loop_report(g: SignedDigraph | None = None) -> str:
    g = g or build_causal_graph()
    lines = ["named loops:"]
    for c in find_named_loops(g):
        status = "ok" if c.ok else f"FAIL ({c.problem})"
        kind = "reinforcing" if c.expected > 0 else "balancing"
        lines.append(f"  {c.key} {c.title}: {kind} {status}")
    all_loops = enumerate_loops(g)
    mafia = [lp for lp in all_loops if "Mafia" in lp.cycle]
    lines.append(f"elementary circuits: {len(all_loops)} "
                 f"({sum(lp.polarity > 0 for lp in all_loops)} reinforcing, "
                 f"{sum(lp.polarity < 0 for lp in all_loops)} balancing)")
    lines.append(f"circuits through Mafia: {len(mafia)} (published count: {PUBLISHED_MAFIA_LOOP_COUNT})")
    lines.append("loops:")
    lines += [f"  {lp}" for lp in all_loops]
    return "\n".join(lines) + "\n"
