"""Thresholded, weighted keyword co-occurrence networks and their metrics.

A vertex is a descriptor with its occurrence weight (number of records whose
descriptor set contains it). An undirected edge (i, j, c) counts the records
containing both endpoints, so c never exceeds either endpoint weight. Vertex
order is canonical: weight descending, ties by label.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _kernels
from .vocabulary import OccurrenceIndex


@dataclass(frozen=True)
class CoNetwork:
    """Vertices with occurrence weights plus integer-weighted edges (i < j).

    ``weights`` is None for networks read back from Pajek files, where
    occurrence counts are not serialized; operations that need them say so.
    """

    labels: tuple[str, ...]
    weights: tuple[int, ...] | None
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        n = len(self.labels)
        if self.weights is not None and len(self.weights) != n:
            raise ValueError("weights length does not match labels")
        for i, j, c in self.edges:
            if not (0 <= i < j < n):
                raise ValueError(f"bad edge endpoints ({i}, {j}) for {n} vertices")
            if c <= 0:
                raise ValueError(f"edge ({i}, {j}) has non-positive weight {c}")

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown descriptor '{label}'") from None

    def require_weights(self) -> tuple[int, ...]:
        if self.weights is None:
            raise ValueError("network has no occurrence weights (external source)")
        return self.weights


@dataclass(frozen=True)
class NetworkMetrics:
    degree_centrality: tuple[float, ...]
    closeness: tuple[float, ...]
    density: float
    components: int


def canonical_vertex_order(totals: dict[str, int]) -> list[str]:
    return sorted(totals, key=lambda t: (-totals[t], t))


def make_network(vertices: list[tuple[str, int]], edges: list[tuple[str, str, int]]) -> CoNetwork:
    """Build a CoNetwork from labelled data, applying the canonical order."""
    totals = dict(vertices)
    if len(totals) != len(vertices):
        raise ValueError("duplicate vertex labels")
    labels = canonical_vertex_order(totals)
    index = {t: i for i, t in enumerate(labels)}
    packed = {}
    for a, b, c in edges:
        i, j = index[a], index[b]
        if i == j:
            raise ValueError(f"self-edge on '{a}'")
        key = (i, j) if i < j else (j, i)
        packed[key] = packed.get(key, 0) + c
    edge_list = tuple(sorted((i, j, c) for (i, j), c in packed.items()))
    return CoNetwork(tuple(labels), tuple(totals[t] for t in labels), edge_list)


def build_network(idx: OccurrenceIndex) -> CoNetwork:
    """Count document-level co-occurrences over per-record descriptor sets.

    Each record contributes 1 to every unordered pair of distinct descriptors
    in its set; order of records does not matter.
    """
    totals = {d: c for d, c in idx.totals.items() if c > 0}
    labels = canonical_vertex_order(totals)
    index = {t: i for i, t in enumerate(labels)}
    pair_counts: dict[tuple[int, int], int] = {}
    for descriptors in idx.per_record.values():
        members = sorted(index[d] for d in descriptors if d in index)
        for i, j in combinations(members, 2):
            pair_counts[(i, j)] = pair_counts.get((i, j), 0) + 1
    edges = tuple(sorted((i, j, c) for (i, j), c in pair_counts.items()))
    return CoNetwork(tuple(labels), tuple(totals[t] for t in labels), edges)


def threshold_filter(net: CoNetwork, min_occ: int) -> CoNetwork:
    """Keep vertices with weight >= min_occ and the edges between survivors."""
    if min_occ < 1:
        raise ValueError(f"min_occ must be >= 1, got {min_occ}")
    weights = net.require_weights()
    keep = [i for i, w in enumerate(weights) if w >= min_occ]
    remap = {old: new for new, old in enumerate(keep)}
    labels = tuple(net.labels[i] for i in keep)
    new_weights = tuple(weights[i] for i in keep)
    edges = tuple(
        (remap[i], remap[j], c) for i, j, c in net.edges if i in remap and j in remap
    )
    return CoNetwork(labels, new_weights, edges)


def edge_query(net: CoNetwork, descriptor: str) -> list[tuple[str, str, int]]:
    """All edges incident to ``descriptor``: queried keyword first, partners
    ascending, one row per edge."""
    v = net.index_of(descriptor)
    rows = []
    for i, j, c in net.edges:
        if i == v:
            rows.append((net.labels[j], c))
        elif j == v:
            rows.append((net.labels[i], c))
    rows.sort()
    return [(descriptor, partner, c) for partner, c in rows]


def association_strength(net: CoNetwork) -> np.ndarray:
    """Similarity matrix s_ij = c_ij / (w_i * w_j); zero diagonal, symmetric.

    The global scaling constant is irrelevant to every consumer here
    (clustering, ranking), so none is applied.
    """
    weights = np.asarray(net.require_weights(), dtype=np.float64)
    if (weights <= 0).any():
        raise ValueError("association strength needs positive occurrence weights")
    s = np.zeros((net.n_vertices, net.n_vertices))
    for i, j, c in net.edges:
        s[i, j] = s[j, i] = c / (weights[i] * weights[j])
    s.flags.writeable = False
    return s


def raw_weight_matrix(net: CoNetwork) -> np.ndarray:
    w = np.zeros((net.n_vertices, net.n_vertices))
    for i, j, c in net.edges:
        w[i, j] = w[j, i] = float(c)
    w.flags.writeable = False
    return w


def hop_distance_matrix(net: CoNetwork) -> np.ndarray:
    """Unweighted shortest-path hop counts; np.inf across components."""
    n = net.n_vertices
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for i, j, _ in net.edges:
        d[i, j] = d[j, i] = 1.0
    return _kernels.floyd_warshall(d)


def connected_components(net: CoNetwork) -> tuple[tuple[int, ...], ...]:
    """Vertex index groups, each sorted, ordered by smallest member."""
    n = net.n_vertices
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j, _ in net.edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    stack.append(u)
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


def component_subnetworks(net: CoNetwork) -> list[tuple[tuple[int, ...], CoNetwork]]:
    """(original indices, subnetwork) per component, preserving vertex order."""
    out = []
    for comp in connected_components(net):
        remap = {old: new for new, old in enumerate(comp)}
        labels = tuple(net.labels[i] for i in comp)
        weights = None if net.weights is None else tuple(net.weights[i] for i in comp)
        edges = tuple(
            (remap[i], remap[j], c) for i, j, c in net.edges if i in remap and j in remap
        )
        out.append((comp, CoNetwork(labels, weights, edges)))
    return out


def network_metrics(net: CoNetwork) -> NetworkMetrics:
    """Degree centrality, within-component closeness, density, component count.

    Distances are hop counts; closeness of v is (n_c - 1) / sum of hop
    distances inside v's component of size n_c, and 0 for isolated vertices.
    """
    n = net.n_vertices
    if n == 0:
        return NetworkMetrics((), (), 0.0, 0)
    degree = [0] * n
    for i, j, _ in net.edges:
        degree[i] += 1
        degree[j] += 1
    if n > 1:
        centrality = tuple(deg / (n - 1) for deg in degree)
        density = 2 * net.n_edges / (n * (n - 1))
    else:
        centrality = (0.0,)
        density = 0.0
    hop = hop_distance_matrix(net)
    closeness = []
    for v in range(n):
        finite = np.isfinite(hop[v])
        size = int(finite.sum())
        total = float(hop[v][finite].sum())
        closeness.append((size - 1) / total if total > 0 else 0.0)
    return NetworkMetrics(centrality, tuple(closeness), density, len(connected_components(net)))
