"""Numeric hot kernels: all-pairs shortest paths and stress minimization.

Two interchangeable backends live here. The default is numba ``@njit``
(compiled on first use, cached on disk); setting the environment variable
``COWORDMAP_NO_NUMBA=1`` before import selects the pure-numpy fallback, which
is also used automatically when numba is not importable. Both backends run
the same algorithm with the same tie-breaking rules, so each is
deterministic; across backends results may differ in the last float ulps.

``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DIST_FLOOR = 1e-12  # coincident points: push apart along +x, deterministically
_DET_FLOOR = 1e-12
_MAX_HALVINGS = 32


def _env_disabled() -> bool:
    return os.environ.get("COWORDMAP_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


# --- pure numpy backend -----------------------------------------------------


def _floyd_warshall_numpy(dist: np.ndarray) -> np.ndarray:
    n = dist.shape[0]
    for k in range(n):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)
    return dist


def _pair_geometry(pos: np.ndarray, v: int):
    """Offsets and distances from vertex v to all vertices, floor-guarded."""
    dx = pos[v, 0] - pos[:, 0]
    dy = pos[v, 1] - pos[:, 1]
    dist = np.sqrt(dx * dx + dy * dy)
    tiny = dist < _DIST_FLOOR
    if tiny.any():
        dx = np.where(tiny, _DIST_FLOOR, dx)
        dy = np.where(tiny, 0.0, dy)
        dist = np.where(tiny, _DIST_FLOOR, dist)
    return dx, dy, dist


def _total_stress_numpy(pos: np.ndarray, dmat: np.ndarray, scale: float) -> float:
    n = pos.shape[0]
    total = 0.0
    for v in range(n - 1):
        dx, dy, dist = _pair_geometry(pos, v)
        d = dmat[v]
        sl = slice(v + 1, n)
        total += float(np.sum((dist[sl] - scale * d[sl]) ** 2 / (d[sl] * d[sl])))
    return total


def _local_stress_numpy(pos, dmat, scale, v, x, y) -> float:
    dx = x - pos[:, 0]
    dy = y - pos[:, 1]
    dist = np.sqrt(dx * dx + dy * dy)
    dist = np.maximum(dist, _DIST_FLOOR)
    d = dmat[v].copy()
    d[v] = 1.0
    terms = (dist - scale * d) ** 2 / (d * d)
    terms[v] = 0.0
    return float(np.sum(terms))


def _vertex_derivs_numpy(pos, dmat, scale, v):
    # gradient and Hessian of stress = sum_j k (dist - l)^2, hence the 2s
    n = pos.shape[0]
    dx, dy, dist = _pair_geometry(pos, v)
    d = dmat[v].copy()
    d[v] = 1.0
    k = 1.0 / (d * d)
    l = scale * d
    mask = np.ones(n, dtype=bool)
    mask[v] = False
    ratio = l / dist
    d3 = dist * dist * dist
    gx = 2.0 * float(np.sum((k * dx * (1.0 - ratio))[mask]))
    gy = 2.0 * float(np.sum((k * dy * (1.0 - ratio))[mask]))
    hxx = 2.0 * float(np.sum((k * (1.0 - l * dy * dy / d3))[mask]))
    hyy = 2.0 * float(np.sum((k * (1.0 - l * dx * dx / d3))[mask]))
    hxy = 2.0 * float(np.sum((k * l * dx * dy / d3)[mask]))
    return gx, gy, hxx, hxy, hyy


def _gradient_norms_numpy(pos, dmat, scale) -> np.ndarray:
    n = pos.shape[0]
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    tiny = dist < _DIST_FLOOR
    np.fill_diagonal(tiny, False)
    if tiny.any():
        diff[..., 0] = np.where(tiny, _DIST_FLOOR, diff[..., 0])
        diff[..., 1] = np.where(tiny, 0.0, diff[..., 1])
        dist = np.where(tiny, _DIST_FLOOR, dist)
    d = dmat.copy()
    np.fill_diagonal(d, 1.0)
    np.fill_diagonal(dist, 1.0)
    factor = (2.0 / (d * d)) * (1.0 - scale * d / dist)
    np.fill_diagonal(factor, 0.0)
    gx = np.sum(factor * diff[..., 0], axis=1)
    gy = np.sum(factor * diff[..., 1], axis=1)
    return np.sqrt(gx * gx + gy * gy)


def _try_step_numpy(pos, dmat, scale, v, sx, sy, old_local):
    """Damped trial along (sx, sy): halve until the local stress drops."""
    t = 1.0
    for _ in range(_MAX_HALVINGS):
        nx = pos[v, 0] + t * sx
        ny = pos[v, 1] + t * sy
        new_local = _local_stress_numpy(pos, dmat, scale, v, nx, ny)
        if new_local < old_local:
            pos[v, 0] = nx
            pos[v, 1] = ny
            return new_local - old_local
        t *= 0.5
    return 0.0


def _relax_vertex_numpy(pos, dmat, scale, v, tol, max_inner) -> float:
    total_delta = 0.0
    for _ in range(max_inner):
        gx, gy, hxx, hxy, hyy = _vertex_derivs_numpy(pos, dmat, scale, v)
        if math.sqrt(gx * gx + gy * gy) < tol:
            break
        det = hxx * hyy - hxy * hxy
        old_local = _local_stress_numpy(pos, dmat, scale, v, pos[v, 0], pos[v, 1])
        delta = 0.0
        if abs(det) > _DET_FLOOR:
            sx = (-gx * hyy + gy * hxy) / det
            sy = (gx * hxy - gy * hxx) / det
            delta = _try_step_numpy(pos, dmat, scale, v, sx, sy, old_local)
        if delta == 0.0:
            delta = _try_step_numpy(pos, dmat, scale, v, -gx, -gy, old_local)
        if delta == 0.0:
            break
        total_delta += delta
    return total_delta


def _kk_minimize_numpy(pos, dmat, scale, tol, max_outer, max_inner):
    trace = np.empty(max_outer + 1)
    stress = _total_stress_numpy(pos, dmat, scale)
    trace[0] = stress
    it = 0
    converged = False
    while it < max_outer:
        norms = _gradient_norms_numpy(pos, dmat, scale)
        v = int(np.argmax(norms))
        if norms[v] < tol:
            converged = True
            break
        delta = _relax_vertex_numpy(pos, dmat, scale, v, tol, max_inner)
        if delta == 0.0:
            break
        stress += delta
        it += 1
        trace[it] = stress
    return it, converged, trace[: it + 1]


# --- numba backend ----------------------------------------------------------

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - environment without numba
    _HAVE_NUMBA = False

if _HAVE_NUMBA:

    @numba.njit(cache=True)
    def _floyd_warshall_nb(dist):
        n = dist.shape[0]
        for k in range(n):
            for i in range(n):
                dik = dist[i, k]
                for j in range(n):
                    alt = dik + dist[k, j]
                    if alt < dist[i, j]:
                        dist[i, j] = alt
        return dist

    @numba.njit(cache=True)
    def _local_stress_nb(pos, dmat, scale, v, x, y):
        n = pos.shape[0]
        total = 0.0
        for j in range(n):
            if j == v:
                continue
            dx = x - pos[j, 0]
            dy = y - pos[j, 1]
            dist = math.sqrt(dx * dx + dy * dy)
            if dist < _DIST_FLOOR:
                dist = _DIST_FLOOR
            d = dmat[v, j]
            diff = dist - scale * d
            total += diff * diff / (d * d)
        return total

    @numba.njit(cache=True)
    def _total_stress_nb(pos, dmat, scale):
        n = pos.shape[0]
        total = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                dx = pos[i, 0] - pos[j, 0]
                dy = pos[i, 1] - pos[j, 1]
                dist = math.sqrt(dx * dx + dy * dy)
                d = dmat[i, j]
                diff = dist - scale * d
                total += diff * diff / (d * d)
        return total

    @numba.njit(cache=True)
    def _vertex_derivs_nb(pos, dmat, scale, v):
        # gradient and Hessian of stress = sum_j k (dist - l)^2, hence the 2s
        n = pos.shape[0]
        gx = 0.0
        gy = 0.0
        hxx = 0.0
        hxy = 0.0
        hyy = 0.0
        for j in range(n):
            if j == v:
                continue
            dx = pos[v, 0] - pos[j, 0]
            dy = pos[v, 1] - pos[j, 1]
            dist = math.sqrt(dx * dx + dy * dy)
            if dist < _DIST_FLOOR:
                dx = _DIST_FLOOR
                dy = 0.0
                dist = _DIST_FLOOR
            d = dmat[v, j]
            k = 1.0 / (d * d)
            l = scale * d
            ratio = l / dist
            d3 = dist * dist * dist
            gx += 2.0 * k * dx * (1.0 - ratio)
            gy += 2.0 * k * dy * (1.0 - ratio)
            hxx += 2.0 * k * (1.0 - l * dy * dy / d3)
            hyy += 2.0 * k * (1.0 - l * dx * dx / d3)
            hxy += 2.0 * k * l * dx * dy / d3
        return gx, gy, hxx, hxy, hyy

    @numba.njit(cache=True)
    def _try_step_nb(pos, dmat, scale, v, sx, sy, old_local):
        t = 1.0
        for _ in range(_MAX_HALVINGS):
            nx = pos[v, 0] + t * sx
            ny = pos[v, 1] + t * sy
            new_local = _local_stress_nb(pos, dmat, scale, v, nx, ny)
            if new_local < old_local:
                pos[v, 0] = nx
                pos[v, 1] = ny
                return new_local - old_local
            t *= 0.5
        return 0.0

    @numba.njit(cache=True)
    def _relax_vertex_nb(pos, dmat, scale, v, tol, max_inner):
        total_delta = 0.0
        for _ in range(max_inner):
            gx, gy, hxx, hxy, hyy = _vertex_derivs_nb(pos, dmat, scale, v)
            if math.sqrt(gx * gx + gy * gy) < tol:
                break
            det = hxx * hyy - hxy * hxy
            old_local = _local_stress_nb(pos, dmat, scale, v, pos[v, 0], pos[v, 1])
            delta = 0.0
            if abs(det) > _DET_FLOOR:
                sx = (-gx * hyy + gy * hxy) / det
                sy = (gx * hxy - gy * hxx) / det
                delta = _try_step_nb(pos, dmat, scale, v, sx, sy, old_local)
            if delta == 0.0:
                delta = _try_step_nb(pos, dmat, scale, v, -gx, -gy, old_local)
            if delta == 0.0:
                break
            total_delta += delta
        return total_delta

    @numba.njit(cache=True)
    def _kk_minimize_nb(pos, dmat, scale, tol, max_outer, max_inner):
        n = pos.shape[0]
        trace = np.empty(max_outer + 1)
        stress = _total_stress_nb(pos, dmat, scale)
        trace[0] = stress
        it = 0
        converged = False
        while it < max_outer:
            best = -1
            best_norm = -1.0
            for v in range(n):
                gx, gy, _, _, _ = _vertex_derivs_nb(pos, dmat, scale, v)
                norm = math.sqrt(gx * gx + gy * gy)
                if norm > best_norm:
                    best_norm = norm
                    best = v
            if best_norm < tol:
                converged = True
                break
            delta = _relax_vertex_nb(pos, dmat, scale, best, tol, max_inner)
            if delta == 0.0:
                break
            stress += delta
            it += 1
            trace[it] = stress
        return it, converged, trace[: it + 1]


USE_NUMBA = _HAVE_NUMBA and not _env_disabled()

BACKEND = "numba" if USE_NUMBA else "numpy"


def floyd_warshall(dist: np.ndarray) -> np.ndarray:
    """In-place all-pairs shortest paths over a dense length matrix.

    Missing edges are ``np.inf``; the diagonal must be 0.
    """
    if USE_NUMBA:
        return _floyd_warshall_nb(dist)
    return _floyd_warshall_numpy(dist)


def kk_minimize(
    pos: np.ndarray,
    dmat: np.ndarray,
    scale: float,
    tol: float,
    max_outer: int,
    max_inner: int,
):
    """Stress-minimize ``pos`` in place; all dmat entries must be finite.

    Repeatedly relaxes the vertex with the largest stress-gradient norm by
    damped Newton steps (first max wins ties). Returns
    (iterations, converged, stress_trace) where the trace holds the total
    stress after each accepted outer step, starting from the initial layout.
    """
    if USE_NUMBA:
        it, converged, trace = _kk_minimize_nb(pos, dmat, scale, tol, max_outer, max_inner)
    else:
        it, converged, trace = _kk_minimize_numpy(pos, dmat, scale, tol, max_outer, max_inner)
    return int(it), bool(converged), np.asarray(trace)


def total_stress(pos: np.ndarray, dmat: np.ndarray, scale: float) -> float:
    """Total layout stress for finite-distance pairs."""
    if USE_NUMBA:
        return float(_total_stress_nb(pos, dmat, scale))
    return _total_stress_numpy(pos, dmat, scale)


def warmup() -> None:
    """Force JIT compilation (or cache load) of the numba kernels."""
    d = np.array([[0.0, 1.0], [1.0, 0.0]])
    floyd_warshall(d.copy())
    pos = np.array([[0.0, 0.0], [1.0, 0.5]])
    kk_minimize(pos, d, 1.0, 1e-6, 10, 10)
