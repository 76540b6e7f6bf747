"""End-to-end pipeline with manifest-recorded, reproducible runs.

Every stage reads its inputs from the output directory (prior-stage files)
and writes plain CSV/Pajek/SVG artifacts there. ``run_pipeline`` simply
chains the same stage functions the CLI subcommands expose, so running
stages one by one produces the same bytes as a full run. Intermediate
artifacts are flat files on purpose: at this corpus scale everything should
be inspectable and diffable.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from . import __version__, _kernels
from .clusters import ClusterPartition, cluster_summary, detect_clusters
from .compare import compare_networks
from .errors import InputError, StageError
from .layout import LayoutParams, layout_network
from .network import CoNetwork, build_network, make_network, threshold_filter
from .pajek import read_pajek_net, write_pajek_clu, write_pajek_net
from .records import (
    ClassScheme,
    PeriodWindow,
    RecordSet,
    class_crosstab,
    class_distribution,
    filter_records,
    load_scheme,
    parse_records,
    split_periods,
    write_records,
)
from .svgmap import SvgOptions, write_label_map_svg
from .tables import (
    write_cluster_summary_csv,
    write_compare_csv,
    write_coverage_csv,
    write_crosstab_csv,
    write_distribution_csv,
    write_edges_csv,
    write_frequencies_csv,
    write_grouped_distribution_csv,
    write_unmapped_csv,
    write_vertices_csv,
)
from .vocabulary import (
    MappingTable,
    coverage_stats,
    descriptor_frequencies,
    load_mapping,
    normalize,
)

RECORDS_FILE = "records.csv"
DESCRIPTORS_FILE = "descriptors.csv"
FREQUENCIES_FILE = "frequencies.csv"
COVERAGE_FILE = "coverage.csv"
UNMAPPED_FILE = "unmapped.csv"
VERTICES_FILE = "vertices.csv"
EDGES_FILE = "edges.csv"
NET_FILE = "network.net"
CLU_FILE = "network.clu"
CLUSTER_SUMMARY_FILE = "cluster_summary.csv"
SVG_FILE = "map.svg"
COMPARE_FILE = "compare.csv"
MANIFEST_FILE = "manifest.json"
DIST_A_FILE = "class_a_distribution.csv"
DIST_B_FILE = "class_b_distribution.csv"
CROSSTAB_FILE = "crosstab.csv"


def default_scheme_path(which: str) -> Path:
    return Path(str(resources.files("cowordmap").joinpath(f"data/scheme_{which}.txt")))


@dataclass(frozen=True)
class RunConfig:
    records: Path
    out_dir: Path
    mapping: Path | None = None
    scheme_a: Path | None = None
    scheme_b: Path | None = None
    min_occurrences: int = 5
    windows: tuple[PeriodWindow, ...] = ()
    source: str | None = None
    resolution: float = 1.0
    use_similarity: bool = True
    passthrough: bool = True
    year_range: tuple[int, int] | None = (2001, 2012)
    layout: LayoutParams = field(default_factory=LayoutParams)
    svg: SvgOptions = field(default_factory=SvgOptions)

    def scheme_a_path(self) -> Path:
        return self.scheme_a or default_scheme_path("a")

    def scheme_b_path(self) -> Path:
        return self.scheme_b or default_scheme_path("b")

    def echo(self) -> dict:
        return {
            "records": str(self.records),
            "out_dir": str(self.out_dir),
            "mapping": str(self.mapping) if self.mapping else None,
            "scheme_a": str(self.scheme_a_path()),
            "scheme_b": str(self.scheme_b_path()),
            "min_occurrences": self.min_occurrences,
            "windows": [w.label for w in self.windows],
            "source": self.source,
            "resolution": self.resolution,
            "use_similarity": self.use_similarity,
            "passthrough": self.passthrough,
            "year_range": list(self.year_range) if self.year_range else None,
            "layout": {
                "scale": self.layout.scale,
                "tolerance": self.layout.tolerance,
                "max_iterations": self.layout.max_iterations,
                "inner_iterations": self.layout.inner_iterations,
                "jitter_seed": self.layout.jitter_seed,
            },
            "svg": {
                "size": self.svg.size,
                "margin": self.svg.margin,
                "edge_weight_floor": self.svg.edge_weight_floor,
            },
        }


def parse_windows(text: str) -> tuple[PeriodWindow, ...]:
    """Parse "2001-2006,2007-2012" into PeriodWindows."""
    windows = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        start, sep, end = chunk.partition("-")
        try:
            windows.append(PeriodWindow(int(start), int(end if sep else start)))
        except ValueError:
            raise InputError(f"bad window '{chunk}', expected START-END")
    return tuple(windows)


def load_config_file(path: str | Path) -> dict[str, str]:
    """Line-oriented ``key = value`` file; '#' comments and blanks ignored."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config file {path}: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise InputError(f"{path}:{lineno}: expected 'key = value', got {stripped!r}")
        values[key.strip()] = value.strip()
    return values


# --- stage plumbing ---------------------------------------------------------


def _require(path: Path, produced_by: str) -> Path:
    if not path.exists():
        raise InputError(f"missing {path}; run the '{produced_by}' stage first")
    return path


def _schemes(config: RunConfig) -> tuple[ClassScheme, ClassScheme]:
    return (
        load_scheme(config.scheme_a_path(), "scheme_a"),
        load_scheme(config.scheme_b_path(), "scheme_b"),
    )


def _load_ingested(config: RunConfig) -> RecordSet:
    path = _require(config.out_dir / RECORDS_FILE, "ingest")
    return parse_records(path, _schemes(config), config.year_range)


def _load_mapping(config: RunConfig) -> MappingTable:
    if config.mapping is None:
        return MappingTable({})
    return load_mapping(config.mapping)


def _read_descriptor_sets(config: RunConfig) -> dict[str, frozenset[str]]:
    path = _require(config.out_dir / DESCRIPTORS_FILE, "normalize")
    per_record: dict[str, set[str]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for record_id, descriptor in reader:
            per_record.setdefault(record_id, set()).add(descriptor)
    return {rid: frozenset(s) for rid, s in per_record.items()}


def _read_network(config: RunConfig) -> CoNetwork:
    vpath = _require(config.out_dir / VERTICES_FILE, "net")
    epath = _require(config.out_dir / EDGES_FILE, "net")
    with open(vpath, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        vertices = [(label, int(count)) for label, count in reader]
    with open(epath, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        edges = [(a, b, int(w)) for a, b, w in reader]
    return make_network(vertices, edges)


# --- stages ------------------------------------------------------------------


def stage_ingest(config: RunConfig) -> dict:
    """Parse, validate and filter the corpus; write the canonical records.csv."""
    rs = parse_records(config.records, _schemes(config), config.year_range)
    if len(rs) == 0:
        raise InputError(f"records file {config.records} contains no records")
    rs = filter_records(rs, source=config.source)
    if len(rs) == 0:
        raise InputError(f"no records left after source filter '{config.source}'")
    write_records(rs, config.out_dir / RECORDS_FILE)
    by_source: dict[str, int] = {}
    for r in rs:
        by_source[r.source] = by_source.get(r.source, 0) + 1
    return {"records": len(rs), "by_source": by_source}


def stage_report(config: RunConfig, scheme: str = "both", by: str = "none") -> dict:
    """Classification tables from the ingested records."""
    rs = _load_ingested(config)
    scheme_a, scheme_b = _schemes(config)
    files = []

    def tables_for(which: str, cs: ClassScheme):
        if by == "none":
            name = DIST_A_FILE if which == "a" else DIST_B_FILE
            write_distribution_csv(class_distribution(rs, cs, which), config.out_dir / name)
            files.append(name)
            return
        if by == "period":
            if not config.windows:
                raise InputError("report --by period needs configured windows")
            parts = [
                (w.label, class_distribution(sub, cs, which))
                for w, sub in zip(config.windows, split_periods(rs, list(config.windows)))
            ]
        elif by == "source":
            sources = sorted({r.source for r in rs})
            parts = [
                (s, class_distribution(filter_records(rs, source=s), cs, which))
                for s in sources
            ]
        else:
            raise InputError(f"unknown report grouping '{by}'")
        name = f"class_{which}_by_{by}.csv"
        write_grouped_distribution_csv(parts, config.out_dir / name)
        files.append(name)

    if scheme in ("a", "both"):
        tables_for("a", scheme_a)
    if scheme in ("b", "both"):
        tables_for("b", scheme_b)
    if scheme == "both" and by == "none":
        row_labels, col_labels, counts = class_crosstab(rs, scheme_a, scheme_b)
        write_crosstab_csv(row_labels, col_labels, counts, config.out_dir / CROSSTAB_FILE)
        files.append(CROSSTAB_FILE)
    return {"files": files}


def stage_normalize(config: RunConfig) -> dict:
    """Canonicalize keywords and write the descriptor/frequency artifacts."""
    rs = _load_ingested(config)
    idx = normalize(rs, _load_mapping(config), passthrough=config.passthrough)
    rows = []
    for r in rs:
        for d in sorted(idx.per_record.get(r.id, ())):
            rows.append((r.id, d))
    from .tables import write_csv

    write_csv(config.out_dir / DESCRIPTORS_FILE, ["record_id", "descriptor"], rows)
    write_frequencies_csv(descriptor_frequencies(idx), config.out_dir / FREQUENCIES_FILE)
    stats = coverage_stats(idx, config.min_occurrences)
    write_coverage_csv(stats, config.min_occurrences, config.out_dir / COVERAGE_FILE)
    write_unmapped_csv(idx.unmapped, config.out_dir / UNMAPPED_FILE)
    return {
        "descriptors": stats.n_descriptors_total,
        "occurrences": stats.n_occurrences_total,
        "tokens_before_dedup": idx.token_count,
        "unmapped": sum(idx.unmapped.values()),
    }


def stage_net(config: RunConfig) -> dict:
    """Build the co-occurrence network and apply the frequency threshold."""
    per_record = _read_descriptor_sets(config)
    totals: dict[str, int] = {}
    for s in per_record.values():
        for d in s:
            totals[d] = totals.get(d, 0) + 1
    from .vocabulary import OccurrenceIndex

    full = build_network(OccurrenceIndex(per_record, totals, {}, 0))
    net = threshold_filter(full, config.min_occurrences)
    write_vertices_csv(net, config.out_dir / VERTICES_FILE)
    write_edges_csv(net, config.out_dir / EDGES_FILE)
    write_pajek_net(net, None, config.out_dir / NET_FILE)
    return {
        "full_vertices": full.n_vertices,
        "full_edges": full.n_edges,
        "min_occurrences": config.min_occurrences,
        "vertices": net.n_vertices,
        "edges": net.n_edges,
    }


def stage_cluster(config: RunConfig) -> dict:
    net = _read_network(config)
    if net.n_vertices == 0:
        raise InputError("thresholded network is empty; lower --min-occ")
    partition = detect_clusters(net, config.resolution, config.use_similarity)
    write_pajek_clu(partition, config.out_dir / CLU_FILE)
    freq = list(zip(net.labels, net.require_weights()))
    write_cluster_summary_csv(cluster_summary(partition, freq), config.out_dir / CLUSTER_SUMMARY_FILE)
    return {"clusters": partition.n_clusters, "modularity": partition.modularity}


def stage_layout(config: RunConfig) -> dict:
    net = _read_network(config)
    if net.n_vertices == 0:
        raise InputError("thresholded network is empty; lower --min-occ")
    layout = layout_network(net, config.layout)
    write_pajek_net(net, layout, config.out_dir / NET_FILE)
    return {
        "iterations": layout.iterations,
        "converged": layout.converged,
        "final_stress": layout.final_stress,
        "backend": _kernels.BACKEND,
    }


def stage_export(config: RunConfig) -> dict:
    net_path = _require(config.out_dir / NET_FILE, "net")
    net, layout = read_pajek_net(net_path)
    if layout is None:
        raise InputError(f"{net_path} has no coordinates; run the 'layout' stage first")
    clu_path = _require(config.out_dir / CLU_FILE, "cluster")
    assignment = _read_clu(clu_path, net.n_vertices)
    partition = ClusterPartition(assignment, 0.0)
    weighted = _read_network(config)
    freq = dict(zip(weighted.labels, weighted.require_weights()))
    write_label_map_svg(net, layout, partition, freq, config.out_dir / SVG_FILE, config.svg)
    return {"files": [SVG_FILE]}


def _read_clu(path: Path, n: int) -> tuple[int, ...]:
    lines = [l.strip() for l in path.read_text(encoding="utf-8").splitlines() if l.strip()]
    if not lines or not lines[0].lower().startswith("*vertices"):
        raise InputError(f"{path}: not a Pajek partition file")
    body = lines[1:]
    if len(body) != n:
        raise InputError(f"{path}: has {len(body)} assignments, network has {n} vertices")
    try:
        return tuple(int(x) for x in body)
    except ValueError:
        raise InputError(f"{path}: non-integer cluster id")


def compare_files(a_path: Path, b_path: Path, labels: tuple[str, str], out_path: Path) -> dict:
    """Compare two Pajek networks and write the report CSV."""
    net_a, _ = read_pajek_net(_require(Path(a_path), "net/layout"))
    net_b, _ = read_pajek_net(_require(Path(b_path), "net/layout"))
    report = compare_networks(net_a, net_b, labels)
    write_compare_csv(report, out_path)
    return {
        "sides": [labels[0], labels[1]],
        "appeared": len(report.appeared),
        "vanished": len(report.vanished),
        "persisted": len(report.persisted),
    }


def _period_net_name(window: PeriodWindow) -> str:
    return f"period_{window.start_year}_{window.end_year}.net"


def stage_compare_windows(config: RunConfig) -> dict:
    """Per-window networks plus the side-by-side report (exactly two windows)."""
    if len(config.windows) != 2:
        raise InputError("compare needs exactly two configured windows")
    rs = _load_ingested(config)
    table = _load_mapping(config)
    nets = []
    for sub in split_periods(rs, list(config.windows)):
        idx = normalize(sub, table, passthrough=config.passthrough)
        nets.append(threshold_filter(build_network(idx), config.min_occurrences))
    for window, net in zip(config.windows, nets):
        write_pajek_net(net, None, config.out_dir / _period_net_name(window))
    labels = (config.windows[0].label, config.windows[1].label)
    report = compare_networks(nets[0], nets[1], labels)
    write_compare_csv(report, config.out_dir / COMPARE_FILE)
    return {
        "sides": list(labels),
        "appeared": len(report.appeared),
        "vanished": len(report.vanished),
        "persisted": len(report.persisted),
    }


# --- full run ----------------------------------------------------------------


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def run_pipeline(config: RunConfig) -> dict:
    """Run every stage in order and write the manifest; returns the manifest."""
    started = datetime.now(timezone.utc).isoformat()
    config.out_dir.mkdir(parents=True, exist_ok=True)

    inputs = {"records": config.records, "scheme_a": config.scheme_a_path(), "scheme_b": config.scheme_b_path()}
    if config.mapping is not None:
        inputs["mapping"] = config.mapping
    digests = {}
    for name, path in sorted(inputs.items()):
        if not Path(path).exists():
            raise StageError("ingest", InputError(f"input file {path} does not exist"))
        digests[name] = {"path": str(path), "sha256": _sha256(Path(path))}

    stages: dict[str, dict] = {}
    plan = [
        ("ingest", stage_ingest),
        ("report", stage_report),
        ("normalize", stage_normalize),
        ("net", stage_net),
        ("cluster", stage_cluster),
        ("layout", stage_layout),
        ("export", stage_export),
    ]
    if len(config.windows) == 2:
        plan.append(("compare", stage_compare_windows))
    for name, fn in plan:
        try:
            stages[name] = fn(config)
        except StageError:
            raise
        except Exception as exc:
            raise StageError(name, exc) from exc

    manifest = {
        "artifact": {"name": "cowordmap", "version": __version__},
        "backend": _kernels.BACKEND,
        "config": config.echo(),
        "inputs": digests,
        "stages": stages,
        "timestamps": {"started": started, "finished": datetime.now(timezone.utc).isoformat()},
    }
    (config.out_dir / MANIFEST_FILE).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest
