"""Command-line interface.

One subcommand per pipeline stage plus ``run`` for the whole chain. Values
come from flags first, then the ``--config`` file (``key = value`` lines),
then defaults. Exit codes: 0 success, 1 input error, 2 pipeline error;
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import InputError, StageError
from .layout import LayoutParams
from .pipeline import (
    COMPARE_FILE,
    RunConfig,
    compare_files,
    load_config_file,
    parse_windows,
    run_pipeline,
    stage_cluster,
    stage_compare_windows,
    stage_export,
    stage_ingest,
    stage_layout,
    stage_net,
    stage_normalize,
    stage_report,
)
from .svgmap import SvgOptions


class _Parser(argparse.ArgumentParser):
    # usage problems are input errors (exit 1), not pipeline errors
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="config file with key = value lines")
    p.add_argument("--records", help="records CSV file")
    p.add_argument("--mapping", help="keyword mapping file")
    p.add_argument("--scheme-a", help="scheme A labels file (default: bundled)")
    p.add_argument("--scheme-b", help="scheme B labels file (default: bundled)")
    p.add_argument("--out", help="output directory (default: out)")
    p.add_argument("--min-occ", type=int, help="occurrence threshold (default: 5)")
    p.add_argument("--windows", help='period windows, e.g. "2001-2006,2007-2012"')
    p.add_argument("--source", help="keep only records with this source tag")
    p.add_argument("--resolution", type=float, help="clustering resolution (default: 1.0)")
    p.add_argument("--raw-weights", action="store_true", default=None,
                   help="cluster on raw co-occurrence counts instead of similarities")
    p.add_argument("--no-passthrough", action="store_true", default=None,
                   help="drop unmapped keywords instead of keeping them as descriptors")
    p.add_argument("--year-range", help='valid record years, e.g. "2001-2012" or "none"')
    p.add_argument("--layout-scale", type=float, help="ideal edge display length (default: 1.0)")
    p.add_argument("--layout-tolerance", type=float, help="gradient tolerance (default: 1e-4)")
    p.add_argument("--layout-max-iter", type=int, help="layout iteration budget (default: 10000)")
    p.add_argument("--svg-size", type=int, help="SVG viewport size in px (default: 800)")
    p.add_argument("--edge-floor", type=int, help="hide SVG edges below this weight (default: 1)")


def _bool(text: str, key: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise InputError(f"config key '{key}' is not a boolean: {text!r}")


def build_config(args: argparse.Namespace, need_records: bool = True) -> RunConfig:
    file_vals = load_config_file(args.config) if args.config else {}

    def pick(flag, key, default=None):
        if flag is not None:
            return flag
        return file_vals.get(key, default)

    records = pick(args.records, "records")
    if records is None and need_records:
        raise InputError("no records file given (--records or config 'records')")
    out_dir = Path(pick(args.out, "out", "out"))
    mapping = pick(args.mapping, "mapping")
    windows_text = pick(args.windows, "windows")
    year_text = pick(args.year_range, "year_range")
    if year_text is None:
        year_range: tuple[int, int] | None = (2001, 2012)
    elif year_text.strip().lower() == "none":
        year_range = None
    else:
        yr = parse_windows(year_text)
        if len(yr) != 1:
            raise InputError(f"year_range must be a single interval, got {year_text!r}")
        year_range = (yr[0].start_year, yr[0].end_year)

    raw_weights = args.raw_weights if args.raw_weights is not None else (
        _bool(file_vals["raw_weights"], "raw_weights") if "raw_weights" in file_vals else False
    )
    no_passthrough = args.no_passthrough if args.no_passthrough is not None else (
        not _bool(file_vals["passthrough"], "passthrough") if "passthrough" in file_vals else False
    )

    layout = LayoutParams(
        scale=float(pick(args.layout_scale, "layout_scale", 1.0)),
        tolerance=float(pick(args.layout_tolerance, "layout_tolerance", 1e-4)),
        max_iterations=int(pick(args.layout_max_iter, "layout_max_iterations", 10_000)),
    )
    svg = SvgOptions(
        size=int(pick(args.svg_size, "svg_size", 800)),
        edge_weight_floor=int(pick(args.edge_floor, "edge_weight_floor", 1)),
    )
    return RunConfig(
        records=Path(records) if records else Path("records.csv"),
        out_dir=out_dir,
        mapping=Path(mapping) if mapping else None,
        scheme_a=Path(p) if (p := pick(args.scheme_a, "scheme_a")) else None,
        scheme_b=Path(p) if (p := pick(args.scheme_b, "scheme_b")) else None,
        min_occurrences=int(pick(args.min_occ, "min_occurrences", 5)),
        windows=parse_windows(windows_text) if windows_text else (),
        source=pick(args.source, "source"),
        resolution=float(pick(args.resolution, "resolution", 1.0)),
        use_similarity=not raw_weights,
        passthrough=not no_passthrough,
        year_range=year_range,
        layout=layout,
        svg=svg,
    )


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cowordmap", description="Co-word analysis and science mapping")
    parser.add_argument("--version", action="version", version=f"cowordmap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    stage_help = {
        "run": "run the whole pipeline and write the manifest",
        "ingest": "parse, validate and filter the records file",
        "report": "classification distribution and cross-tab tables",
        "normalize": "canonicalize keywords; frequency and coverage tables",
        "net": "build and threshold the co-occurrence network",
        "cluster": "detect thematic clusters",
        "layout": "compute the Kamada-Kawai map coordinates",
        "export": "render the SVG label map",
        "compare": "diff two Pajek networks",
    }
    for name, text in stage_help.items():
        p = sub.add_parser(name, help=text, description=text)
        _add_config_flags(p)
        if name == "report":
            p.add_argument("--scheme", choices=["a", "b", "both"], default="both")
            p.add_argument("--by", choices=["none", "period", "source"], default="none")
        if name == "compare":
            p.add_argument("--a", required=True, help="first .net file")
            p.add_argument("--b", required=True, help="second .net file")
            p.add_argument("--label-a", help="name of the first side")
            p.add_argument("--label-b", help="name of the second side")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.command == "compare":
            config = build_config(args, need_records=False)
            config.out_dir.mkdir(parents=True, exist_ok=True)
            labels = (args.label_a or Path(args.a).stem, args.label_b or Path(args.b).stem)
            stats = compare_files(Path(args.a), Path(args.b), labels, config.out_dir / COMPARE_FILE)
            print(f"compare: {stats['appeared']} appeared, {stats['vanished']} vanished, "
                  f"{stats['persisted']} persisted -> {config.out_dir / COMPARE_FILE}")
            return 0

        config = build_config(args)
        if args.command == "run":
            manifest = run_pipeline(config)
            counts = manifest["stages"]
            print(f"run: {counts['ingest']['records']} records, "
                  f"{counts['net']['vertices']} vertices, {counts['net']['edges']} edges, "
                  f"{counts['cluster']['clusters']} clusters -> {config.out_dir}")
            return 0

        config.out_dir.mkdir(parents=True, exist_ok=True)
        stages = {
            "ingest": stage_ingest,
            "normalize": stage_normalize,
            "net": stage_net,
            "cluster": stage_cluster,
            "layout": stage_layout,
            "export": stage_export,
        }
        if args.command == "report":
            stats = _run_stage("report", lambda: stage_report(config, args.scheme, args.by))
        else:
            stats = _run_stage(args.command, lambda: stages[args.command](config))
        summary = ", ".join(f"{k}={v}" for k, v in stats.items())
        print(f"{args.command}: {summary}")
        return 0
    except StageError as exc:
        print(f"error in stage '{exc.stage}': {exc.cause}", file=sys.stderr)
        return 1 if isinstance(exc.cause, InputError) else 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pipeline bug or environment failure
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _run_stage(name: str, fn):
    try:
        return fn()
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


if __name__ == "__main__":
    sys.exit(main())
