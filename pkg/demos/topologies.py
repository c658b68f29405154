"""Plain against enhanced voting on ring, torus and complete graphs, plus a custom graph."""
import numpy as np
import networkx as nx

from dmvr.engine import Scenario, run
from dmvr.graph import build_complete, build_ring, build_torus, from_edge_list

reps = 100
graphs = [build_complete(100), build_ring(100), build_torus(10, 10)]

for g in graphs:
    for rho1 in (0.52, 0.6):
        counts = [round(100 * rho1), 100 - round(100 * rho1)]
        row = []
        for variant in ("compact-voting", "enhanced-voting"):
            t = [run(Scenario.from_counts(g, counts, variant, s)).tau_prime for s in range(reps)]
            row.append(np.mean(t))
        print(f"{g.label:10s} rho1={rho1}: plain {row[0]:7.1f}  enhanced {row[1]:7.1f}")

# Any connected graph works; here a small-world graph built with networkx.
sw = nx.connected_watts_strogatz_graph(60, 4, 0.1, seed=3)
g = from_edge_list(60, sw.edges(), label="small-world")
tr = run(Scenario.from_counts(g, [25, 20, 15], "explicit-ranking", seed=0))
print(g.label, tr.converged, tr.readouts[0], round(tr.tau_prime, 2))
