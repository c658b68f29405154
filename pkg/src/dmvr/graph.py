"""Undirected connected interaction topologies.

Node ids are 0-based. Neighbour lists are kept sorted, so a given stream of
uniform draws selects the same neighbours on every platform.
"""
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, InvalidEdgeError, InvalidSizeError, NotConnectedError


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple
    label: str = "graph"
    _csr: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for i, nbrs in enumerate(self.adjacency):
            indptr[i + 1] = indptr[i] + len(nbrs)
        indices = np.fromiter(
            (j for nbrs in self.adjacency for j in nbrs), dtype=np.int64, count=int(indptr[-1])
        )
        indptr.flags.writeable = False
        indices.flags.writeable = False
        object.__setattr__(self, "_csr", (indptr, indices))

    @property
    def csr(self):
        """``(indptr, indices)`` arrays for compiled kernels."""
        return self._csr

    @property
    def num_edges(self):
        return int(self._csr[0][-1]) // 2

    def degree(self, i):
        return len(self.adjacency[i])

    def edges(self):
        return [(i, j) for i, nbrs in enumerate(self.adjacency) for j in nbrs if i < j]

    def is_connected(self):
        return _connected(self.n, self.adjacency)


def _connected(n, adjacency):
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(v)
    return count == n


def _from_sets(n, nbr_sets, label):
    adjacency = tuple(tuple(sorted(s)) for s in nbr_sets)
    if not _connected(n, adjacency):
        raise NotConnectedError(f"graph on {n} nodes is not connected")
    return Graph(n, adjacency, label)


def build_complete(n):
    if n < 2:
        raise InvalidSizeError(f"complete graph needs n >= 2, got {n}")
    return _from_sets(n, [set(range(n)) - {i} for i in range(n)], "complete")


def build_ring(n):
    if n < 3:
        raise InvalidSizeError(f"ring needs n >= 3, got {n}")
    return _from_sets(n, [{(i - 1) % n, (i + 1) % n} for i in range(n)], "ring")


def build_torus(rows, cols):
    # below 3 the wraparound neighbours coincide
    if rows < 3 or cols < 3:
        raise InvalidSizeError(f"torus needs rows, cols >= 3, got {rows}x{cols}")
    nbrs = []
    for r in range(rows):
        for c in range(cols):
            nbrs.append({
                ((r - 1) % rows) * cols + c,
                ((r + 1) % rows) * cols + c,
                r * cols + (c - 1) % cols,
                r * cols + (c + 1) % cols,
            })
    return _from_sets(rows * cols, nbrs, f"torus{rows}x{cols}")


def from_edge_list(n, edges, label="edgelist"):
    if n < 1:
        raise InvalidSizeError(f"need at least one node, got {n}")
    nbrs = [set() for _ in range(n)]
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidEdgeError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise InvalidEdgeError(f"self-loop at node {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    if n == 1:
        raise NotConnectedError("a single node has no neighbour to interact with")
    return _from_sets(n, nbrs, label)


def sample_neighbor(g, i, rng):
    """Uniform neighbour of ``i``; consumes one draw from ``rng``."""
    nbrs = g.adjacency[i]
    k = min(int(rng.random() * len(nbrs)), len(nbrs) - 1)
    return nbrs[k]


def read_edge_list(path):
    """Parse ``n <count>`` followed by ``u v`` lines; ``#`` lines are comments."""
    n = None
    edges = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise InvalidEdgeError(f"{path}:{lineno}: expected 'n <count>' header")
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise InvalidEdgeError(f"{path}:{lineno}: expected 'u v'")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise InvalidEdgeError(f"{path}: missing 'n <count>' header")
    return from_edge_list(n, edges, label=Path(path).stem)


def write_edge_list(g, path):
    lines = [f"# {g.label}", f"n {g.n}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    Path(path).write_text("\n".join(lines) + "\n")


def build_topology(topo):
    """Build a graph from a small dict such as ``{"kind": "torus", "rows": 10, "cols": 10}``."""
    kind = topo["kind"]
    if kind == "complete":
        return build_complete(topo["n"])
    if kind == "ring":
        return build_ring(topo["n"])
    if kind == "torus":
        return build_torus(topo["rows"], topo["cols"])
    if kind == "edgelist":
        return read_edge_list(topo["path"])
    raise ConfigurationError(f"unknown topology kind {kind!r}")
