"""Pajek .net / .clu serialization (undirected weighted edge subset).

The dialect is deliberately narrow: ``*Vertices n`` with 1-based ids and
quoted labels (optionally followed by x y in six decimals), then ``*Edges``
with ``i j w`` integer-weight lines sorted ascending. UTF-8, LF newlines,
byte-stable for a given network.
"""

from __future__ import annotations

from pathlib import Path

from .clusters import ClusterPartition
from .errors import InputError
from .layout import LayoutMap
from .network import CoNetwork


def _quote(label: str) -> str:
    if '"' in label or "\n" in label or "\r" in label:
        raise ValueError(f"label not representable in Pajek dialect: {label!r}")
    return f'"{label}"'


def format_pajek_net(net: CoNetwork, layout: LayoutMap | None = None) -> str:
    """Render the network as Pajek text; coordinates only when a layout is given."""
    if layout is not None and layout.coords.shape[0] != net.n_vertices:
        raise ValueError("layout does not cover all vertices")
    lines = [f"*Vertices {net.n_vertices}"]
    for i, label in enumerate(net.labels):
        if layout is None:
            lines.append(f"{i + 1} {_quote(label)}")
        else:
            x, y = layout.coords[i]
            lines.append(f"{i + 1} {_quote(label)} {x:.6f} {y:.6f}")
    lines.append("*Edges")
    for i, j, c in sorted(net.edges):
        lines.append(f"{i + 1} {j + 1} {c}")
    return "\n".join(lines) + "\n"


def write_pajek_net(net: CoNetwork, layout: LayoutMap | None, path: str | Path) -> None:
    try:
        Path(path).write_text(format_pajek_net(net, layout), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def _parse_vertex_line(line: str, lineno: int, path: Path) -> tuple[int, str, tuple[float, float] | None]:
    text = line.strip()
    head, sep, rest = text.partition(" ")
    try:
        vid = int(head)
    except ValueError:
        raise InputError(f"{path}:{lineno}: vertex line must start with an integer id")
    rest = rest.strip()
    if not rest.startswith('"'):
        raise InputError(f"{path}:{lineno}: vertex label must be quoted")
    end = rest.find('"', 1)
    if end < 0:
        raise InputError(f"{path}:{lineno}: unterminated vertex label")
    label = rest[1:end]
    tail = rest[end + 1 :].split()
    if not tail:
        return vid, label, None
    if len(tail) != 2:
        raise InputError(f"{path}:{lineno}: expected 'x y' after label, got {tail!r}")
    try:
        x, y = float(tail[0]), float(tail[1])
    except ValueError:
        raise InputError(f"{path}:{lineno}: bad coordinates {tail!r}")
    return vid, label, (x, y)


def read_pajek_net(path: str | Path) -> tuple[CoNetwork, LayoutMap | None]:
    """Parse a file in the dialect above.

    Occurrence weights are not part of the format, so the returned network
    has ``weights=None``; coordinates come back as a LayoutMap when every
    vertex carries them.
    """
    path = Path(path)
    try:
        raw_lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc

    lines = [(no, line) for no, line in enumerate(raw_lines, start=1) if line.strip()]
    if not lines:
        raise InputError(f"{path}: empty file")
    pos = 0
    no, first = lines[pos]
    parts = first.split()
    if len(parts) != 2 or parts[0].lower() != "*vertices":
        raise InputError(f"{path}:{no}: expected '*Vertices n', got {first.strip()!r}")
    try:
        n = int(parts[1])
    except ValueError:
        raise InputError(f"{path}:{no}: bad vertex count {parts[1]!r}")
    if n < 0:
        raise InputError(f"{path}:{no}: negative vertex count")
    pos += 1

    labels: list[str] = []
    coords: list[tuple[float, float] | None] = []
    for expected in range(1, n + 1):
        if pos >= len(lines):
            raise InputError(f"{path}: expected {n} vertex lines, found {expected - 1}")
        no, line = lines[pos]
        vid, label, xy = _parse_vertex_line(line, no, path)
        if vid != expected:
            raise InputError(f"{path}:{no}: vertex ids must run 1..{n}; got {vid}, expected {expected}")
        labels.append(label)
        coords.append(xy)
        pos += 1

    if pos >= len(lines) or lines[pos][1].strip().lower() != "*edges":
        where = lines[pos][0] if pos < len(lines) else "eof"
        raise InputError(f"{path}:{where}: expected '*Edges'")
    pos += 1

    edges: dict[tuple[int, int], int] = {}
    for no, line in lines[pos:]:
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"{path}:{no}: expected 'i j w', got {line.strip()!r}")
        try:
            i, j, w = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise InputError(f"{path}:{no}: edge fields must be integers: {line.strip()!r}")
        if not (1 <= i <= n and 1 <= j <= n):
            raise InputError(f"{path}:{no}: edge endpoint out of range 1..{n}")
        if i == j:
            raise InputError(f"{path}:{no}: self-edge on vertex {i}")
        if w <= 0:
            raise InputError(f"{path}:{no}: edge weight must be positive, got {w}")
        key = (min(i, j) - 1, max(i, j) - 1)
        if key in edges:
            raise InputError(f"{path}:{no}: duplicate edge {i} {j}")
        edges[key] = w

    net = CoNetwork(tuple(labels), None, tuple(sorted((i, j, w) for (i, j), w in edges.items())))
    layout = None
    if n > 0 and all(c is not None for c in coords):
        import numpy as np

        arr = np.array(coords, dtype=np.float64)
        in_unit = bool((arr >= 0.0).all() and (arr <= 1.0).all())
        layout = LayoutMap(arr, final_stress=None, normalized=in_unit)
    elif any(c is not None for c in coords):
        raise InputError(f"{path}: coordinates must be on all vertices or none")
    return net, layout


def format_pajek_clu(partition: ClusterPartition) -> str:
    lines = [f"*Vertices {len(partition.assignment)}"]
    lines.extend(str(c) for c in partition.assignment)
    return "\n".join(lines) + "\n"


def write_pajek_clu(partition: ClusterPartition, path: str | Path) -> None:
    try:
        Path(path).write_text(format_pajek_clu(partition), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc
