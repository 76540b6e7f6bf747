"""Kamada-Kawai stress-minimizing layout over graph-theoretic distances.

Edge length is the inverse co-occurrence weight (heavier tie = closer), and
the target separation of vertices i and j is ``scale * d_ij`` where d_ij is
their shortest-path distance. Stress is

    E = sum_{i<j} (|p_i - p_j| - scale * d_ij)^2 / d_ij^2

minimized per connected component by repeatedly relaxing the vertex with the
largest gradient norm using damped Newton steps. Initialization is a circle
in canonical vertex order, so runs are reproducible without a seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .network import CoNetwork, component_subnetworks


@dataclass(frozen=True)
class LayoutParams:
    scale: float = 1.0
    tolerance: float = 1e-4
    max_iterations: int = 10_000
    inner_iterations: int = 50
    jitter_seed: int | None = None  # None keeps the seed-free deterministic start

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class LayoutMap:
    """Vertex coordinates plus the state the optimizer finished in.

    Raw optimizer output keeps display units (``normalized=False``);
    ``pack_components`` produces unit-square coordinates. ``final_stress``
    always refers to the optimizer's coordinate frame. ``stress_history``
    holds one non-increasing trace per component when present.
    """

    coords: np.ndarray
    final_stress: float | None
    converged: bool = True
    iterations: int = 0
    normalized: bool = False
    stress_history: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        coords = np.ascontiguousarray(np.asarray(self.coords, dtype=np.float64))
        if coords.ndim != 2 or (coords.size and coords.shape[1] != 2):
            raise ValueError("coords must be an (n, 2) array")
        if not np.isfinite(coords).all():
            raise ValueError("coords must be finite")
        coords.flags.writeable = False
        object.__setattr__(self, "coords", coords)


def graph_distances(net: CoNetwork) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """All-pairs shortest paths per component over edge lengths 1/weight.

    Returns (original vertex indices, distance matrix) pairs; cross-component
    distances are simply absent.
    """
    out = []
    for comp, sub in component_subnetworks(net):
        m = len(comp)
        d = np.full((m, m), np.inf)
        np.fill_diagonal(d, 0.0)
        for i, j, c in sub.edges:
            length = 1.0 / c
            if length < d[i, j]:
                d[i, j] = d[j, i] = length
        _kernels.floyd_warshall(d)
        out.append((comp, d))
    return out


def stress(coords: np.ndarray, dmat: np.ndarray, scale: float) -> float:
    """Total stress; pairs at infinite graph distance contribute nothing."""
    coords = np.asarray(coords, dtype=np.float64)
    n = coords.shape[0]
    total = 0.0
    for i in range(n - 1):
        d = dmat[i, i + 1 :]
        finite = np.isfinite(d)
        if not finite.any():
            continue
        diff = coords[i] - coords[i + 1 :]
        dist = np.sqrt((diff * diff).sum(axis=1))
        term = (dist - scale * d) ** 2 / (d * d)
        total += float(term[finite].sum())
    return total


def stress_gradient(coords: np.ndarray, dmat: np.ndarray, scale: float) -> np.ndarray:
    """Analytic gradient of ``stress`` with respect to every coordinate."""
    coords = np.asarray(coords, dtype=np.float64)
    n = coords.shape[0]
    grad = np.zeros((n, 2))
    for v in range(n):
        d = dmat[v].copy()
        finite = np.isfinite(d)
        finite[v] = False
        if not finite.any():
            continue
        diff = coords[v] - coords
        dist = np.sqrt((diff * diff).sum(axis=1))
        dist = np.maximum(dist, 1e-12)
        d[~finite] = 1.0
        factor = (2.0 / (d * d)) * (1.0 - scale * d / dist)
        factor[~finite] = 0.0
        grad[v, 0] = float((factor * diff[:, 0]).sum())
        grad[v, 1] = float((factor * diff[:, 1]).sum())
    return grad


def _circle_start(m: int, radius: float, rng: np.random.Generator | None) -> np.ndarray:
    angles = 2.0 * np.pi * np.arange(m) / m
    pos = np.column_stack((radius * np.cos(angles), radius * np.sin(angles)))
    if rng is not None:
        pos += 0.01 * radius * rng.standard_normal(pos.shape)
    return np.ascontiguousarray(pos)


def kamada_kawai(net: CoNetwork, params: LayoutParams = LayoutParams()) -> LayoutMap:
    """Stress-minimize every component independently; coordinates stay raw.

    Each component starts on a circle around its own origin, so components of
    a disconnected network overlap until ``pack_components`` arranges them.
    Budget exhaustion is flagged via ``converged``, never raised.
    """
    if net.n_vertices == 0:
        raise ValueError("cannot lay out an empty network")
    rng = None if params.jitter_seed is None else np.random.default_rng(params.jitter_seed)
    coords = np.zeros((net.n_vertices, 2))
    histories: list[tuple[float, ...]] = []
    total = 0.0
    iterations = 0
    converged = True
    for comp, dmat in graph_distances(net):
        m = len(comp)
        if m == 1:
            histories.append((0.0,))
            continue
        radius = params.scale * float(dmat.max()) / 2.0
        pos = _circle_start(m, radius, rng)
        it, conv, trace = _kernels.kk_minimize(
            pos,
            dmat,
            params.scale,
            params.tolerance,
            params.max_iterations,
            params.inner_iterations,
        )
        for local, orig in enumerate(comp):
            coords[orig] = pos[local]
        histories.append(tuple(float(s) for s in trace))
        total += float(trace[-1])
        iterations += it
        converged = converged and conv
    return LayoutMap(
        coords,
        final_stress=total,
        converged=converged,
        iterations=iterations,
        normalized=False,
        stress_history=tuple(histories),
    )


def normalize_unit_square(coords: np.ndarray) -> np.ndarray:
    """Uniformly rescale into [0,1]^2, centering the short dimension."""
    coords = np.asarray(coords, dtype=np.float64)
    if coords.shape[0] == 0:
        return coords.copy()
    mins = coords.min(axis=0)
    spans = coords.max(axis=0) - mins
    largest = float(spans.max())
    if largest == 0.0:
        return np.full_like(coords, 0.5)
    s = 1.0 / largest
    return (coords - mins) * s + (1.0 - s * spans) / 2.0


def pack_components(layouts: list[LayoutMap], sizes: list[int]) -> LayoutMap:
    """Arrange per-component layouts on a shelf-packed grid, then normalize.

    Components are scaled to boxes with side proportional to sqrt(vertex
    count) and placed largest first, left to right, wrapping onto new shelves
    (y grows downward). Bounding boxes never touch; the combined picture is
    renormalized to the unit square with preserved aspect ratio.
    """
    if not layouts:
        raise ValueError("nothing to pack")
    if len(layouts) != len(sizes):
        raise ValueError("layouts and sizes differ in length")

    boxes = []  # (side, content coords relative to the box origin)
    for layout, size in zip(layouts, sizes):
        c = layout.coords
        if c.shape[0] != size:
            raise ValueError("component layout does not match its vertex count")
        side = float(np.sqrt(size))
        mins = c.min(axis=0) if size else np.zeros(2)
        spans = (c.max(axis=0) - mins) if size else np.zeros(2)
        largest = float(spans.max()) if size else 0.0
        if largest == 0.0:
            rel = np.full((size, 2), side / 2.0)
        else:
            s = side / largest
            rel = (c - mins) * s + (side - s * spans) / 2.0
        boxes.append((side, rel))

    order = sorted(range(len(boxes)), key=lambda i: (-boxes[i][0], i))
    max_side = max(side for side, _ in boxes)
    gap = 0.08 * max_side
    total_area = sum(side * side for side, _ in boxes)
    shelf_width = max(max_side, float(np.sqrt(total_area)) * 1.2)

    placed: dict[int, np.ndarray] = {}
    x = 0.0
    y = 0.0
    shelf_height = 0.0
    for i in order:
        side, rel = boxes[i]
        if x > 0.0 and x + side > shelf_width:
            x = 0.0
            y += shelf_height + gap
            shelf_height = 0.0
        placed[i] = rel + np.array([x, y])
        x += side + gap
        shelf_height = max(shelf_height, side)

    combined = np.vstack([placed[i] for i in range(len(boxes))])
    combined = normalize_unit_square(combined)
    stresses = [l.final_stress for l in layouts]
    return LayoutMap(
        combined,
        final_stress=None if any(s is None for s in stresses) else float(sum(stresses)),
        converged=all(l.converged for l in layouts),
        iterations=sum(l.iterations for l in layouts),
        normalized=True,
    )


def layout_network(net: CoNetwork, params: LayoutParams = LayoutParams()) -> LayoutMap:
    """Layout for a whole network: per-component Kamada-Kawai, then packing.

    Coordinates come back in the network's vertex order, normalized to the
    unit square.
    """
    subnets = component_subnetworks(net)
    layouts = [kamada_kawai(sub, params) for _, sub in subnets]
    packed = pack_components(layouts, [sub.n_vertices for _, sub in subnets])
    coords = np.zeros((net.n_vertices, 2))
    cursor = 0
    for comp, _ in subnets:
        for orig in comp:
            coords[orig] = packed.coords[cursor]
            cursor += 1
    return LayoutMap(
        coords,
        final_stress=packed.final_stress,
        converged=packed.converged,
        iterations=packed.iterations,
        normalized=True,
    )
