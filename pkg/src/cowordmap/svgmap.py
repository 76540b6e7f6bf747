"""Label-view SVG maps: sized, colored, labelled descriptor nodes.

Circle radius and font size scale with the square root of the occurrence
weight between configured bounds; fill color comes from a fixed qualitative
palette indexed by cluster id; edge width grows with log(1 + weight). The
output is plain SVG 1.1 text, built deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

from .clusters import ClusterPartition
from .errors import InputError
from .layout import LayoutMap, normalize_unit_square
from .network import CoNetwork

PALETTE = (
    "#4e79a7",
    "#f28e2b",
    "#e15759",
    "#76b7b2",
    "#59a14f",
    "#edc948",
    "#b07aa1",
    "#ff9da7",
    "#9c755f",
    "#bab0ac",
    "#86bcb6",
    "#d37295",
)


@dataclass(frozen=True)
class SvgOptions:
    size: int = 800
    margin: float = 60.0
    min_radius: float = 3.0
    max_radius: float = 20.0
    min_font: float = 8.0
    max_font: float = 18.0
    edge_weight_floor: int = 1
    edge_width_scale: float = 1.5

    def __post_init__(self):
        if self.size <= 2 * self.margin:
            raise ValueError("margin leaves no drawing area")
        if self.edge_weight_floor < 1:
            raise ValueError("edge_weight_floor must be >= 1")


def _scaled(value: float, vmax: float, lo: float, hi: float) -> float:
    # proportional to sqrt(value), anchored so the heaviest node gets `hi`
    if vmax <= 0:
        return lo
    return max(lo, hi * math.sqrt(value) / math.sqrt(vmax))


def render_label_map_svg(
    net: CoNetwork,
    layout: LayoutMap,
    partition: ClusterPartition,
    freq,
    opts: SvgOptions = SvgOptions(),
) -> str:
    """Build the SVG document as a string; see write_label_map_svg."""
    n = net.n_vertices
    if layout.coords.shape[0] != n:
        raise ValueError("layout does not cover all vertices")
    if len(partition.assignment) != n:
        raise ValueError("partition does not cover all vertices")
    counts = dict(freq)
    weights = net.weights
    sizes = []
    for i, label in enumerate(net.labels):
        if label in counts:
            sizes.append(counts[label])
        elif weights is not None:
            sizes.append(weights[i])
        else:
            sizes.append(1)
    vmax = max(sizes) if sizes else 1

    coords = layout.coords if layout.normalized else normalize_unit_square(layout.coords)
    span = opts.size - 2 * opts.margin
    px = [(opts.margin + c[0] * span, opts.margin + c[1] * span) for c in coords]

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{opts.size}" height="{opts.size}" viewBox="0 0 {opts.size} {opts.size}">',
    ]
    for i, j, c in net.edges:
        if c < opts.edge_weight_floor:
            continue
        width = opts.edge_width_scale * math.log1p(c)
        out.append(
            f'<line x1="{px[i][0]:.2f}" y1="{px[i][1]:.2f}" '
            f'x2="{px[j][0]:.2f}" y2="{px[j][1]:.2f}" '
            f'stroke="#999999" stroke-opacity="0.6" stroke-width="{width:.2f}"/>'
        )
    radii = [_scaled(s, vmax, opts.min_radius, opts.max_radius) for s in sizes]
    for i in range(n):
        color = PALETTE[(partition.assignment[i] - 1) % len(PALETTE)]
        out.append(
            f'<circle cx="{px[i][0]:.2f}" cy="{px[i][1]:.2f}" r="{radii[i]:.2f}" '
            f'fill="{color}" fill-opacity="0.85" stroke="#333333" stroke-width="0.5"/>'
        )
    for i in range(n):
        font = _scaled(sizes[i], vmax, opts.min_font, opts.max_font)
        out.append(
            f'<text x="{px[i][0]:.2f}" y="{px[i][1] - radii[i] - 2.0:.2f}" '
            f'font-family="sans-serif" font-size="{font:.1f}" '
            f'text-anchor="middle">{escape(net.labels[i])}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_label_map_svg(
    net: CoNetwork,
    layout: LayoutMap,
    partition: ClusterPartition,
    freq,
    path: str | Path,
    opts: SvgOptions = SvgOptions(),
) -> None:
    """Write the label-view map: one circle and one text per vertex, one line
    per edge at or above the weight floor.

    ``freq`` maps descriptor -> occurrence count (any mapping or pair
    sequence); vertices missing from it fall back to the network's own
    weights.
    """
    text = render_label_map_svg(net, layout, partition, freq, opts)
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc
