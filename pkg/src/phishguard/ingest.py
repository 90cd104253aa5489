"""Loading and merging of labeled email corpora stored as CSV files.

Every dataset arrives as a CSV with a text column and a label column plus a
schema that maps raw label values onto the two classes. Sources are merged
without deduplication so that corpus counts stay exactly additive; exact
duplicates are surfaced as a diagnostic instead.
"""

from __future__ import annotations

import csv
import json
import sys
from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Sequence


class IngestError(Exception):
    """Unreadable file, bad schema, or inconsistent merge input."""


class ClassLabel(IntEnum):
    """Binary email class. Numeric codes appear in all persisted artifacts."""

    LEGITIMATE = 0
    PHISHING = 1


@dataclass(frozen=True)
class RawEmail:
    """One labeled email record: body text, class, and dataset of origin."""

    text: str
    label: ClassLabel
    source: str


@dataclass(frozen=True)
class DatasetSchema:
    """Column mapping for one dataset CSV.

    label_map sends raw label cell values (compared after stripping
    surrounding whitespace) to the numeric class codes 0/1. A row whose
    label is not in the map is dropped, not an error.
    """

    text_column: str
    label_column: str
    label_map: dict[str, int]
    source_column: str | None = None

    def __post_init__(self) -> None:
        if not self.text_column or not self.label_column:
            raise IngestError("schema must name both a text and a label column")
        bad = {v for v in self.label_map.values() if v not in (0, 1)}
        if bad:
            raise IngestError(f"label_map values must be 0 or 1, got {sorted(bad)}")

    @classmethod
    def from_file(cls, path: str | Path) -> "DatasetSchema":
        path = Path(path)
        if not path.is_file():
            raise IngestError(f"schema file not found: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise IngestError(f"cannot parse schema file {path}: {exc}") from exc
        try:
            return cls(
                text_column=raw["text_column"],
                label_column=raw["label_column"],
                label_map={str(k): int(v) for k, v in raw["label_map"].items()},
                source_column=raw.get("source_column"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise IngestError(f"invalid schema file {path}: {exc}") from exc


#: Schema of CSVs written by save_csv; loading one restores records exactly.
CANONICAL_SCHEMA = DatasetSchema(
    text_column="text",
    label_column="label",
    label_map={"0": 0, "1": 1},
    source_column="source",
)


@dataclass
class LoadDiagnostics:
    """Row accounting for one load_csv call."""

    rows_read: int = 0
    dropped_empty_text: int = 0
    dropped_unmappable_label: int = 0

    @property
    def dropped(self) -> int:
        return self.dropped_empty_text + self.dropped_unmappable_label


@dataclass
class CorpusStats:
    """Per-source class counts for a merged corpus."""

    per_source: dict[str, tuple[int, int]] = field(default_factory=dict)
    dropped_rows: int = 0

    @property
    def legitimate(self) -> int:
        return sum(c[0] for c in self.per_source.values())

    @property
    def phishing(self) -> int:
        return sum(c[1] for c in self.per_source.values())

    @property
    def total(self) -> int:
        return self.legitimate + self.phishing


def load_csv(
    path: str | Path,
    schema: DatasetSchema,
    source: str | None = None,
) -> tuple[list[RawEmail], LoadDiagnostics]:
    """Read one dataset CSV into RawEmail records, in file order.

    Rows with empty (after trimming) text or labels missing from the
    schema's label_map are skipped and counted in the diagnostics. Input
    is decoded as UTF-8 with invalid sequences replaced, since real email
    corpora mix encodings. The source tag defaults to the file stem unless
    the schema names a source column.
    """
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"dataset file not found: {path}")
    default_source = source if source is not None else path.stem

    records: list[RawEmail] = []
    diag = LoadDiagnostics()
    with open(path, encoding="utf-8", errors="replace", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in (schema.text_column, schema.label_column):
            if column not in header:
                raise IngestError(f"{path}: declared column {column!r} not in header {header}")
        if schema.source_column is not None and schema.source_column not in header:
            raise IngestError(f"{path}: declared column {schema.source_column!r} not in header")
        for row in reader:
            diag.rows_read += 1
            text = row.get(schema.text_column) or ""
            if not text.strip():
                diag.dropped_empty_text += 1
                continue
            raw_label = (row.get(schema.label_column) or "").strip()
            if raw_label not in schema.label_map:
                diag.dropped_unmappable_label += 1
                continue
            row_source = row[schema.source_column] if schema.source_column else default_source
            records.append(RawEmail(text, ClassLabel(schema.label_map[raw_label]), row_source))
    return records, diag


def save_csv(records: Iterable[RawEmail], path: str | Path) -> None:
    """Write records in the canonical text,label,source layout (RFC-4180)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["text", "label", "source"])
        for record in records:
            writer.writerow([record.text, int(record.label), record.source])


def merge(
    corpora: Sequence[Sequence[RawEmail]],
    dropped_rows: int = 0,
) -> tuple[list[RawEmail], CorpusStats]:
    """Concatenate per-source record lists, preserving order within each.

    Each non-empty input list must be internally single-source and the
    source tags must be distinct across lists. No deduplication happens
    here; per-class totals stay exactly additive.
    """
    merged: list[RawEmail] = []
    stats = CorpusStats(dropped_rows=dropped_rows)
    for records in corpora:
        if not records:
            continue
        sources = {r.source for r in records}
        if len(sources) != 1:
            raise IngestError(f"merge input mixes sources: {sorted(sources)}")
        source = next(iter(sources))
        if source in stats.per_source:
            raise IngestError(f"duplicate source identifier: {source!r}")
        counts = Counter(r.label for r in records)
        stats.per_source[source] = (
            counts[ClassLabel.LEGITIMATE],
            counts[ClassLabel.PHISHING],
        )
        merged.extend(records)
    return merged, stats


def duplicate_text_stats(records: Iterable[RawEmail]) -> tuple[int, int]:
    """Count exact-duplicate bodies without removing anything.

    Returns (number of records beyond the first occurrence of their text,
    number of distinct texts that occur more than once).
    """
    counts = Counter(r.text for r in records)
    extra = sum(c - 1 for c in counts.values() if c > 1)
    repeated = sum(1 for c in counts.values() if c > 1)
    return extra, repeated
