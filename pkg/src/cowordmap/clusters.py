"""Thematic cluster detection by greedy modularity maximization.

Two-phase agglomeration (local moving + aggregation) on the
similarity-weighted graph by default, or on raw co-occurrence weights.
Everything is deterministic: vertices are visited in canonical order and
ties go to the lowest cluster id. Components are clustered independently,
so no cluster can span disconnected themes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import (
    CoNetwork,
    association_strength,
    connected_components,
    raw_weight_matrix,
)


@dataclass(frozen=True)
class ClusterPartition:
    """Total assignment of vertex index -> cluster id (1-based, dense)."""

    assignment: tuple[int, ...]
    modularity: float

    def __post_init__(self):
        ids = set(self.assignment)
        if self.assignment and ids != set(range(1, len(ids) + 1)):
            raise ValueError(f"cluster ids must be dense 1..k, got {sorted(ids)}")

    @property
    def n_clusters(self) -> int:
        return len(set(self.assignment))

    def members(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.assignment):
            out.setdefault(c, []).append(v)
        return out


@dataclass(frozen=True)
class ClusterSummary:
    cluster_id: int
    size: int
    members: tuple[tuple[str, int], ...]  # (descriptor, occurrence weight), ranked


def _weight_matrix(net: CoNetwork, use_similarity: bool) -> np.ndarray:
    return association_strength(net) if use_similarity else raw_weight_matrix(net)


def modularity(
    net: CoNetwork,
    partition: ClusterPartition,
    resolution: float = 1.0,
    use_similarity: bool = False,
) -> float:
    """Weighted modularity Q = sum_c [S_in/(2m) - gamma (S_tot/(2m))^2].

    m is the total edge weight of the chosen weighting; an edgeless network
    has Q = 0 by definition.
    """
    if len(partition.assignment) != net.n_vertices:
        raise ValueError("partition does not cover the network")
    w = _weight_matrix(net, use_similarity)
    two_m = float(w.sum())
    if two_m == 0.0:
        return 0.0
    k = w.sum(axis=1)
    q = 0.0
    for indices in partition.members().values():
        idx = np.asarray(indices)
        s_in = float(w[np.ix_(idx, idx)].sum())
        s_tot = float(k[idx].sum())
        q += s_in / two_m - resolution * (s_tot / two_m) ** 2
    return q


def _local_moving(b: np.ndarray, gamma: float) -> np.ndarray:
    """One level of local moving; returns the community id per node.

    Node v moves to the neighbouring community with the best strictly
    positive gain; exact ties pick the lowest community id. Sweeps repeat
    until a full pass makes no move.
    """
    n = b.shape[0]
    k = b.sum(axis=1)
    two_m = float(k.sum())
    comm = np.arange(n)
    if two_m == 0.0:
        return comm
    m = two_m / 2.0
    sigma = k.astype(float).copy()  # total degree per community id
    moved = True
    while moved:
        moved = False
        for v in range(n):
            cur = int(comm[v])
            kv = float(k[v])
            sigma[cur] -= kv
            row = b[v]
            link = np.bincount(comm, weights=row, minlength=n)
            link[cur] -= row[v]  # exclude the self-loop from "links into cur"
            best_c = cur
            best_gain = link[cur] / m - gamma * sigma[cur] * kv / (2.0 * m * m)
            candidates = np.nonzero(link > 0)[0]
            for c in candidates:
                c = int(c)
                if c == cur:
                    continue
                gain = link[c] / m - gamma * sigma[c] * kv / (2.0 * m * m)
                if gain > best_gain or (gain == best_gain and c < best_c):
                    best_gain = gain
                    best_c = c
            comm[v] = best_c
            sigma[best_c] += kv
            if best_c != cur:
                moved = True
    return comm


def _louvain(b: np.ndarray, gamma: float) -> np.ndarray:
    """Full two-phase agglomeration on one connected weight matrix."""
    n = b.shape[0]
    assignment = np.arange(n)
    level = b.astype(float).copy()
    while True:
        comm = _local_moving(level, gamma)
        ids = sorted({int(c) for c in comm})
        if len(ids) == level.shape[0]:
            return assignment
        relabel = {c: i for i, c in enumerate(ids)}
        comm_rel = np.array([relabel[int(c)] for c in comm])
        assignment = comm_rel[assignment]
        p = np.zeros((level.shape[0], len(ids)))
        p[np.arange(level.shape[0]), comm_rel] = 1.0
        level = p.T @ level @ p


def detect_clusters(
    net: CoNetwork,
    resolution: float = 1.0,
    use_similarity: bool = True,
) -> ClusterPartition:
    """Greedy modularity clusters, one run per connected component.

    The reported modularity is computed with the same weighting and
    resolution the optimizer used, and is never below the all-singletons
    value (the optimizer starts there and only accepts improvements).
    """
    if net.n_vertices == 0:
        raise ValueError("cannot cluster an empty network")
    if resolution <= 0:
        raise ValueError(f"resolution must be positive, got {resolution}")
    w = _weight_matrix(net, use_similarity)
    n = net.n_vertices
    raw = np.zeros(n, dtype=int)
    offset = 0
    for comp in connected_components(net):
        idx = np.asarray(comp)
        local = _louvain(w[np.ix_(idx, idx)], resolution)
        for pos, orig in enumerate(comp):
            raw[orig] = offset + int(local[pos])
        offset += int(local.max()) + 1
    # renumber to 1..k by first appearance in canonical vertex order
    seen: dict[int, int] = {}
    assignment = []
    for v in range(n):
        c = int(raw[v])
        if c not in seen:
            seen[c] = len(seen) + 1
        assignment.append(seen[c])
    partition = ClusterPartition(tuple(assignment), 0.0)
    q = modularity(net, partition, resolution, use_similarity)
    return ClusterPartition(tuple(assignment), q)


def cluster_summary(
    partition: ClusterPartition,
    freq: list[tuple[str, int]],
) -> list[ClusterSummary]:
    """Per-cluster size and members ranked by occurrence weight.

    ``freq`` pairs up (descriptor, occurrence count) positionally with the
    partition's vertex indices; a network's vertex list already has that
    shape.
    """
    if len(freq) != len(partition.assignment):
        raise ValueError("freq does not align with the partition")
    out = []
    for cid, indices in sorted(partition.members().items()):
        ranked = sorted((freq[v] for v in indices), key=lambda kv: (-kv[1], kv[0]))
        out.append(ClusterSummary(cid, len(indices), tuple(ranked)))
    return out


def format_legend(
    summaries: list[ClusterSummary],
    labels: dict[int, str] | None = None,
) -> list[str]:
    """Legend lines like "Cluster 1 (11 items)"; labels are user-supplied."""
    labels = labels or {}
    return [
        f"{labels.get(s.cluster_id, f'Cluster {s.cluster_id}')} ({s.size} items)"
        for s in summaries
    ]
