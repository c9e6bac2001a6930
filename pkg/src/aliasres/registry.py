"""The annotated alias table (``alias_resolution.csv``) and its metadata column.

Metadata is stored one ``Key=Value`` pair per row in the ``metadata`` column
of the first four data rows, keys in the order Title, Annotator, Guidelines,
Updated. Several annotators are joined with ``;``. A table with fewer than
four records gets padding rows whose first four cells are empty.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

from ._io import atomic_write
from .listing import ENTITY_HEADER, EntityKey, EntityRecord, make_key

VERSION_RE = re.compile(r"^\d+\.\d+\.\d+$")
METADATA_KEYS = ("Title", "Annotator", "Guidelines", "Updated")
DEFAULT_FILENAME = "alias_resolution.csv"


class AliasTableError(ValueError):
    pass


@dataclass(frozen=True)
class Metadata:
    title: str
    annotators: tuple[str, ...]
    guidelines_version: str
    updated: dt.date

    def __post_init__(self):
        if not VERSION_RE.match(self.guidelines_version):
            raise ValueError(f"guidelines version must look like major.minor.patch, got {self.guidelines_version!r}")
        if isinstance(self.annotators, str):
            raise TypeError("annotators must be a sequence of names")
        for name in self.annotators:
            if ";" in name or not name.strip():
                raise ValueError(f"invalid annotator name {name!r}")
        if not isinstance(self.updated, dt.date):
            raise TypeError("updated must be a date")

    def cells(self) -> list[str]:
        return [
            f"Title={self.title}",
            f"Annotator={';'.join(self.annotators)}",
            f"Guidelines={self.guidelines_version}",
            f"Updated={self.updated.isoformat()}",
        ]


@dataclass(frozen=True)
class AliasTable:
    records: tuple[EntityRecord, ...]
    metadata: Optional[Metadata] = None

    def __post_init__(self):
        seen = {}
        for i, r in enumerate(self.records):
            if r.key in seen:
                raise AliasTableError(f"duplicate entity {r.key} at records {seen[r.key] + 1} and {i + 1}")
            seen[r.key] = i

    def by_key(self) -> dict[EntityKey, EntityRecord]:
        return {r.key: r for r in self.records}

    def keys(self) -> list[EntityKey]:
        return [r.key for r in self.records]


def set_metadata(t: AliasTable, m: Metadata) -> AliasTable:
    if not VERSION_RE.match(m.guidelines_version):
        raise ValueError(f"invalid guidelines version {m.guidelines_version!r}")
    return replace(t, metadata=m)


def _parse_metadata(cells: Sequence[tuple[int, str]]) -> Optional[Metadata]:
    if not cells:
        return None
    fields = {}
    for lineno, cell in cells:
        key, sep, value = cell.partition("=")
        if not sep or key not in METADATA_KEYS:
            raise AliasTableError(f"line {lineno}: malformed metadata pair {cell!r}")
        if key in fields:
            raise AliasTableError(f"line {lineno}: metadata key {key} given twice")
        fields[key] = value
    missing = [k for k in METADATA_KEYS if k not in fields]
    if missing:
        raise AliasTableError(f"incomplete metadata, missing {', '.join(missing)}")
    try:
        return Metadata(
            title=fields["Title"],
            annotators=tuple(a for a in fields["Annotator"].split(";") if a) if fields["Annotator"] else (),
            guidelines_version=fields["Guidelines"],
            updated=dt.date.fromisoformat(fields["Updated"]),
        )
    except (ValueError, TypeError) as e:
        raise AliasTableError(f"invalid metadata: {e}") from None


def parse_alias_table(text: str, source: str = "<string>") -> AliasTable:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise AliasTableError(f"{source}: empty file") from None
    if header != ENTITY_HEADER:
        raise AliasTableError(f"{source}: expected header {','.join(ENTITY_HEADER)}, got {','.join(header)}")

    records = []
    rows_of = {}
    meta_cells = []
    for row in reader:
        lineno = reader.line_num
        if not row:
            continue
        if len(row) != len(ENTITY_HEADER):
            raise AliasTableError(f"{source}:{lineno}: expected {len(ENTITY_HEADER)} columns, found {len(row)}")
        name, etype, freq, canonical, meta = row
        if meta:
            meta_cells.append((lineno, meta))
        if not (name or etype or freq or canonical):
            continue  # metadata padding row
        try:
            key = make_key(name, etype)
        except ValueError as e:
            raise AliasTableError(f"{source}:{lineno}: {e}") from None
        try:
            frequency = int(freq)
        except ValueError:
            raise AliasTableError(f"{source}:{lineno}: frequency {freq!r} is not an integer") from None
        if key in rows_of:
            raise AliasTableError(f"{source}: duplicate entity {key} on lines {rows_of[key]} and {lineno}")
        rows_of[key] = lineno
        try:
            records.append(EntityRecord(key, frequency, canonical if canonical.strip() else None))
        except ValueError as e:
            raise AliasTableError(f"{source}:{lineno}: {e}") from None
    try:
        metadata = _parse_metadata(meta_cells)
    except AliasTableError as e:
        raise AliasTableError(f"{source}: {e}") from None
    return AliasTable(tuple(records), metadata)


def load_alias_table(path) -> AliasTable:
    path = Path(path)
    return parse_alias_table(path.read_text(encoding="utf-8"), str(path))


def render_alias_table(t: AliasTable) -> str:
    meta = t.metadata.cells() if t.metadata else []
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ENTITY_HEADER)
    for i, r in enumerate(t.records):
        w.writerow([r.surface, r.etype.value, r.frequency, r.canonical or "", meta[i] if i < len(meta) else ""])
    for cell in meta[len(t.records) :]:
        w.writerow(["", "", "", "", cell])
    return buf.getvalue()


def save_alias_table(t: AliasTable, path) -> Path:
    return atomic_write(path, render_alias_table(t))


def annotate_identity(records) -> AliasTable:
    """Table whose canonical forms repeat each surface form unchanged."""
    return AliasTable(tuple(replace(r, canonical=r.surface) for r in records))


def carry_over(records, source: AliasTable) -> AliasTable:
    """Table of ``records`` with canonicals copied from ``source`` by entity key."""
    known = source.by_key()
    return AliasTable(
        tuple(replace(r, canonical=known[r.key].canonical if r.key in known else None) for r in records),
        source.metadata,
    )
