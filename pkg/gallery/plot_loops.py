"""
Feedback loops in the causal graph
==================================

Build the signed causal graph from the model formulas, find the five named
loops and count every elementary circuit.
"""

# %%
from collections import Counter

from mafiasim import build_causal_graph, enumerate_loops, find_named_loops

g = build_causal_graph()
print(len(g.nodes), "nodes,", len(g.edges), "edges")

# %%
for check in find_named_loops(g):
    print(check.key, check.title, "ok" if check.ok else check.problem)

# %%
loops = enumerate_loops(g)
print(Counter(lp.kind for lp in loops))
print("through Mafia:", len(enumerate_loops(g, through="Mafia")))

# %%
# Shortest circuits first.
for lp in sorted(loops, key=lambda lp: len(lp.cycle))[:8]:
    print(lp)
