"""Graphs, digraphs, graph matrices, structural algorithms, samplers, and
the named fixture graphs used throughout the test suite.

Adjacency convention: <w|A|v> = 1 iff (v, w) is an arc (column indexes the
source vertex, row the target).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .exceptions import (
    DisconnectedGraphError,
    IsolatedVertexError,
    MultipleSinksError,
    ProbabilityOverflowError,
    WrongTopologyError,
)


def _check_pairs(n: int, pairs, ordered: bool):
    seen = set()
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"vertex out of range in pair ({u}, {v})")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        key = (u, v) if ordered else (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"duplicate pair ({u}, {v})")
        seen.add(key)


@dataclass(frozen=True)
class DiGraph:
    """Simple directed graph on vertices 0..n-1."""

    n: int
    arcs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        _check_pairs(self.n, arcs, ordered=True)
        object.__setattr__(self, "arcs", arcs)

    def indegree(self, v: int) -> int:
        return sum(1 for (_, w) in self.arcs if w == v)

    def outdegree(self, v: int) -> int:
        return sum(1 for (u, _) in self.arcs if u == v)

    def in_neighbors(self, v: int) -> list:
        return sorted(u for (u, w) in self.arcs if w == v)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset((min(int(u), int(v)), max(int(u), int(v))) for u, v in self.edges)
        _check_pairs(self.n, edges, ordered=False)
        object.__setattr__(self, "edges", edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d


def adjacency(g) -> np.ndarray:
    """A[w, v] = 1 iff (v, w) is an arc; symmetric for undirected input."""
    a = np.zeros((g.n, g.n))
    if isinstance(g, DiGraph):
        for v, w in g.arcs:
            a[w, v] = 1.0
    else:
        for u, v in g.edges:
            a[u, v] = 1.0
            a[v, u] = 1.0
    return a


def laplacian(g: Graph) -> np.ndarray:
    a = adjacency(g)
    return np.diag(a.sum(axis=0)) - a


def normalized_laplacian(g: Graph) -> np.ndarray:
    d = g.degrees().astype(float)
    if np.any(d == 0):
        raise IsolatedVertexError("normalized Laplacian undefined with isolated vertices")
    inv_sqrt = 1.0 / np.sqrt(d)
    a = adjacency(g)
    return np.eye(g.n) - inv_sqrt[:, None] * a * inv_sqrt[None, :]


def underlying(g: DiGraph) -> Graph:
    return Graph(g.n, frozenset((min(u, v), max(u, v)) for u, v in g.arcs))


def to_digraph(g: Graph) -> DiGraph:
    """Replace every edge by the pair of opposite arcs."""
    arcs = set()
    for u, v in g.edges:
        arcs.add((u, v))
        arcs.add((v, u))
    return DiGraph(g.n, frozenset(arcs))


def random_orientation(g: Graph, seed: int) -> DiGraph:
    rng = np.random.default_rng(seed)
    arcs = set()
    for u, v in sorted(g.edges):
        arcs.add((u, v) if rng.random() < 0.5 else (v, u))
    return DiGraph(g.n, frozenset(arcs))


@dataclass(frozen=True)
class Condensation:
    """Strongly connected components, the DAG over them, and its sinks."""

    partition: tuple
    dag: DiGraph
    sinks: tuple


def _to_nx(g: DiGraph) -> nx.DiGraph:
    h = nx.DiGraph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.arcs)
    return h


def condensation(g: DiGraph) -> Condensation:
    comps = [tuple(sorted(c)) for c in nx.strongly_connected_components(_to_nx(g))]
    comps.sort(key=lambda c: c[0])
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    dag_arcs = set()
    for u, v in g.arcs:
        cu, cv = comp_of[u], comp_of[v]
        if cu != cv:
            dag_arcs.add((cu, cv))
    dag = DiGraph(len(comps), frozenset(dag_arcs))
    sinks = tuple(i for i in range(dag.n) if dag.outdegree(i) == 0)
    return Condensation(partition=tuple(comps), dag=dag, sinks=sinks)


def distances_to_sink_set(g: DiGraph, cond: Condensation | None = None) -> np.ndarray:
    """Directed distance from each vertex to the unique sink component."""
    if cond is None:
        cond = condensation(g)
    if len(cond.sinks) != 1:
        raise MultipleSinksError(f"expected a unique sink component, found {len(cond.sinks)}")
    sink_vertices = set(cond.partition[cond.sinks[0]])
    # BFS on reversed arcs from the whole sink set at once
    rev = [[] for _ in range(g.n)]
    for u, v in g.arcs:
        rev[v].append(u)
    dist = np.full(g.n, -1, dtype=np.int64)
    queue = deque()
    for v in sink_vertices:
        dist[v] = 0
        queue.append(v)
    while queue:
        v = queue.popleft()
        for u in rev[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    adj = [[] for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == g.n


def is_strongly_connected(g: DiGraph) -> bool:
    return nx.is_strongly_connected(_to_nx(g)) if g.n > 0 else True


def giant_component(g: Graph) -> Graph:
    """Largest connected component, relabeled to 0..k-1."""
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    comp = max(nx.connected_components(h), key=len)
    order = sorted(comp)
    relabel = {v: i for i, v in enumerate(order)}
    edges = frozenset(
        (relabel[u], relabel[v]) for u, v in g.edges if u in comp and v in comp
    )
    return Graph(len(order), edges)


# ---------------------------------------------------------------------------
# Random graph samplers (deterministic per seed)

def gen_er(n: int, p: float, seed: int, directed: bool = False):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    if directed:
        mask = rng.random((n, n)) < p
        np.fill_diagonal(mask, False)
        arcs = frozenset(zip(*np.nonzero(mask)))
        return DiGraph(n, frozenset((int(u), int(v)) for u, v in arcs))
    iu, iv = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    edges = frozenset((int(u), int(v)) for u, v in zip(iu[keep], iv[keep]))
    return Graph(n, edges)


def cl_powerlaw_omega(n: int, a: float, b: float) -> np.ndarray:
    """Expected-degree vector omega_i = n^(a + (i/n) b), i = 1..n."""
    if not (0 < a < a + b <= 1):
        raise ValueError(f"require 0 < a < a+b <= 1, got a={a}, b={b}")
    i = np.arange(1, n + 1)
    return np.power(float(n), a + (i / n) * b)


def gen_cl(n: int, omega: np.ndarray, seed: int) -> Graph:
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (n,):
        raise ValueError("omega must have one entry per vertex")
    if np.any(omega < 0) or np.any(omega > n - 1):
        raise ValueError("omega entries must lie in [0, n-1]")
    total = omega.sum()
    if total > 0 and omega.max() ** 2 > total:
        raise ProbabilityOverflowError("some pair probability omega_i*omega_j/||omega||_1 exceeds 1")
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, k=1)
    if total == 0:
        return Graph(n, frozenset())
    probs = omega[iu] * omega[iv] / total
    keep = rng.random(iu.size) < probs
    edges = frozenset((int(u), int(v)) for u, v in zip(iu[keep], iv[keep]))
    return Graph(n, edges)


def gen_ba(n: int, m0: int, seed: int, directed: bool = False):
    """Preferential attachment: seed clique K_m0, then each new vertex picks
    m0 distinct existing targets with probability proportional to degree."""
    if not 1 <= m0 <= n:
        raise ValueError(f"require 1 <= m0 <= n, got m0={m0}, n={n}")
    rng = np.random.default_rng(seed)
    deg = np.zeros(n, dtype=np.int64)
    pairs = []
    for u in range(m0):
        for v in range(u + 1, m0):
            pairs.append((u, v))
            deg[u] += 1
            deg[v] += 1
    for w in range(m0, n):
        weights = deg[:w].astype(float)
        k = min(m0, w)
        if weights.sum() == 0:
            targets = rng.choice(w, size=k, replace=False)
        else:
            targets = rng.choice(w, size=k, replace=False, p=weights / weights.sum())
        for v in targets:
            pairs.append((int(v), w))
            deg[v] += 1
            deg[w] += 1
    if directed:
        # arc from the pre-existing vertex to the newly added one
        return DiGraph(n, frozenset(pairs))
    return Graph(n, frozenset(pairs))


# ---------------------------------------------------------------------------
# Fixture graphs

def path(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def complete(n: int) -> Graph:
    return Graph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


def star(n: int) -> Graph:
    """Hub at vertex 0 connected to n-1 leaves."""
    return Graph(n, frozenset((0, v) for v in range(1, n)))


def complete_plus_leaf(n: int) -> Graph:
    """K_{n-1} on vertices 0..n-2 plus a leaf (vertex n-1) attached to 0."""
    edges = set((u, v) for u in range(n - 1) for v in range(u + 1, n - 1))
    edges.add((0, n - 1))
    return Graph(n, frozenset(edges))


def circulant_jump2(n: int) -> DiGraph:
    """Bidirected ring plus an arc from i+2 to i at every vertex; n = 4k, k > 1."""
    if n % 4 != 0 or n < 8:
        raise WrongTopologyError(f"size must be 4k with k > 1, got {n}")
    arcs = set()
    for i in range(n):
        arcs.add((i, (i + 1) % n))
        arcs.add(((i + 1) % n, i))
        arcs.add(((i + 2) % n, i))
    return DiGraph(n, frozenset(arcs))


def moral_triangle() -> DiGraph:
    """Two parents v1, v2 sharing the child v3 (vertices 0, 1, 2)."""
    return DiGraph(3, frozenset({(0, 2), (1, 2)}))


def premature_graph() -> DiGraph:
    """Undirected triangle v1 v2 v3 plus the arc v1 -> v4 (vertices 0..3)."""
    arcs = {(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1), (0, 3)}
    return DiGraph(4, frozenset(arcs))


def ngqsw_period_graph() -> DiGraph:
    """Undirected star v0 - {v1..v5} plus the edge v5 - v4, bidirected."""
    edges = [(0, i) for i in range(1, 6)] + [(4, 5)]
    return to_digraph(Graph(6, frozenset(edges)))


# ---------------------------------------------------------------------------
# JSON interchange: {"n": int, "directed": bool, "edges": [[u, v], ...]}, 1-based

def to_json(g, fp=None):
    directed = isinstance(g, DiGraph)
    pairs = sorted(g.arcs if directed else g.edges)
    doc = {
        "n": g.n,
        "directed": directed,
        "edges": [[u + 1, v + 1] for u, v in pairs],
    }
    if fp is None:
        return json.dumps(doc, indent=1)
    json.dump(doc, fp, indent=1)
    return None


def from_json(source):
    doc = json.loads(source) if isinstance(source, str) else json.load(source)
    n = int(doc["n"])
    pairs = frozenset((int(u) - 1, int(v) - 1) for u, v in doc["edges"])
    if doc["directed"]:
        return DiGraph(n, pairs)
    return Graph(n, pairs)


def require_connected(g: Graph):
    if not is_connected(g):
        raise DisconnectedGraphError("operation requires a connected graph")
