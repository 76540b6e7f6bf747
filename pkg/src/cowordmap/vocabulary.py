"""Keyword canonicalization and descriptor occurrence counting.

Raw author keywords are matched against a human-authored mapping table and
replaced by canonical descriptors. Matching happens on a normalized
"match-key": NFC composition, casefold, whitespace collapse. Within one
record, descriptors form a set, so a descriptor's occurrence count is the
number of records containing it.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .errors import InputError
from .records import RecordSet


def match_key(raw: str) -> str:
    """Normalized lookup key: NFC composition, casefold, collapse whitespace."""
    return " ".join(unicodedata.normalize("NFC", raw).casefold().split())


@dataclass(frozen=True)
class MappingTable:
    """Match-key -> canonical descriptor. Many-to-one merges are fine."""

    entries: dict[str, str]

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, key: str) -> str | None:
        return self.entries.get(key)


@dataclass(frozen=True)
class OccurrenceIndex:
    """Per-record descriptor sets plus global occurrence totals.

    ``unmapped`` tallies keywords (by match-key) that had no mapping entry,
    whether or not passthrough let them become descriptors. ``token_count``
    is the number of keyword tokens before within-record deduplication, kept
    so both readings of "occurrences" stay checkable.
    """

    per_record: dict[str, frozenset[str]]
    totals: dict[str, int]
    unmapped: dict[str, int]
    token_count: int
    provenance: tuple[str, ...] = ()


@dataclass(frozen=True)
class CoverageStats:
    n_descriptors_total: int
    n_occurrences_total: int
    n_descriptors_retained: int
    n_occurrences_retained: int
    percent_retained: int
    no_occurrences: bool = False


def load_mapping(path: str | Path) -> MappingTable:
    """Read a mapping file of ``raw -> canonical`` lines.

    Canonical targets implicitly map to themselves, which is what makes
    normalization idempotent; a file that remaps one entry's canonical form
    to something else is therefore rejected.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read mapping file {path}: {exc}") from exc

    entries: dict[str, str] = {}
    first_line: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        raw, sep, canonical = stripped.partition("->")
        if not sep:
            raise InputError(f"{path}:{lineno}: expected 'raw -> canonical', got {stripped!r}")
        raw = raw.strip()
        canonical = canonical.strip()
        if not raw:
            raise InputError(f"{path}:{lineno}: empty raw keyword")
        if not canonical:
            raise InputError(f"{path}:{lineno}: empty canonical descriptor")
        key = match_key(raw)
        if key in entries and entries[key] != canonical:
            raise InputError(
                f"{path}:{lineno}: match-key '{key}' already maps to "
                f"'{entries[key]}' (line {first_line[key]}), conflicting with '{canonical}'"
            )
        if key not in entries:
            entries[key] = canonical
            first_line[key] = lineno

    for canonical in list(entries.values()):
        key = match_key(canonical)
        if key in entries:
            if entries[key] != canonical:
                raise InputError(
                    f"{path}:{first_line[key]}: canonical descriptor '{canonical}' is itself "
                    f"remapped to '{entries[key]}'; chains make normalization non-idempotent"
                )
        else:
            entries[key] = canonical
    return MappingTable(entries)


def normalize(rs: RecordSet, table: MappingTable, passthrough: bool = True) -> OccurrenceIndex:
    """Apply the mapping table to every record's raw keywords.

    Mapped keywords become their canonical descriptor. Unmapped keywords
    become their own match-key when ``passthrough`` is on, and are dropped
    from the descriptor sets otherwise; either way they are tallied in
    ``unmapped``. Duplicates within a record collapse to one.
    """
    per_record: dict[str, frozenset[str]] = {}
    totals: Counter[str] = Counter()
    unmapped: Counter[str] = Counter()
    tokens = 0
    for record in rs:
        found = set()
        for raw in record.raw_keywords:
            key = match_key(raw)
            canonical = table.get(key)
            if canonical is None:
                unmapped[key] += 1
                if not passthrough:
                    continue
                canonical = key
            tokens += 1
            found.add(canonical)
        per_record[record.id] = frozenset(found)
        totals.update(found)
    provenance = rs.provenance + (
        f"normalize: {len(totals)} descriptors, {sum(totals.values())} occurrences, "
        f"{tokens} tokens before dedup, passthrough={'on' if passthrough else 'off'}",
    )
    return OccurrenceIndex(per_record, dict(totals), dict(unmapped), tokens, provenance)


def descriptor_frequencies(idx: OccurrenceIndex, n: int | None = None) -> list[tuple[str, int]]:
    """Descriptors ranked by count descending, ties lexicographic; top n if given."""
    ranked = sorted(idx.totals.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked if n is None else ranked[:n]


def coverage_stats(idx: OccurrenceIndex, min_occ: int) -> CoverageStats:
    """How much of the occurrence universe survives a frequency threshold."""
    if min_occ < 1:
        raise ValueError(f"min_occ must be >= 1, got {min_occ}")
    total_desc = len(idx.totals)
    total_occ = sum(idx.totals.values())
    retained = {d: c for d, c in idx.totals.items() if c >= min_occ}
    retained_occ = sum(retained.values())
    if total_occ == 0:
        return CoverageStats(total_desc, 0, len(retained), 0, 0, no_occurrences=True)
    percent = (200 * retained_occ + total_occ) // (2 * total_occ)
    return CoverageStats(total_desc, total_occ, len(retained), retained_occ, percent)
