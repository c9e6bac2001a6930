"""Entity and mention inventories derived from a parsed corpus."""

from __future__ import annotations

import csv
import io
import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .conll import Corpus, EntityType, Mention

ENTITY_HEADER = ["name", "type", "frequency", "canonical", "metadata"]
MENTION_HEADER = ["name", "type", "chapter", "line", "token_start", "token_end"]


class EntityKey(NamedTuple):
    surface: str
    etype: EntityType

    def __str__(self):
        return f"{self.surface}[{self.etype}]"


def make_key(surface: str, etype) -> EntityKey:
    surface = unicodedata.normalize("NFC", surface)
    if not surface:
        raise ValueError("entity surface must be non-empty")
    return EntityKey(surface, EntityType.parse(str(etype)))


@dataclass(frozen=True)
class EntityRecord:
    key: EntityKey
    frequency: int
    canonical: Optional[str] = None

    def __post_init__(self):
        if self.frequency < 1:
            raise ValueError(f"{self.key}: frequency must be >= 1, got {self.frequency}")
        if self.canonical is not None and not self.canonical.strip():
            raise ValueError(f"{self.key}: canonical must be non-blank when present")

    @property
    def surface(self) -> str:
        return self.key.surface

    @property
    def etype(self) -> EntityType:
        return self.key.etype


def collation_key(key: EntityKey):
    """Name case-insensitively, then case-sensitively, then type alphabetically."""
    return (key.surface.casefold(), key.surface, key.etype.value)


def count_keys(mentions: Iterable[Mention]) -> Counter:
    return Counter(EntityKey(m.surface, m.etype) for m in mentions)


def build_entity_list(corpus: Corpus) -> list[EntityRecord]:
    counts = count_keys(corpus.mentions)
    return [EntityRecord(k, counts[k]) for k in sorted(counts, key=collation_key)]


def build_mention_list(corpus: Corpus) -> list[Mention]:
    return sorted(corpus.mentions, key=Mention.position)


def _csv_writer(buf):
    return csv.writer(buf, lineterminator="\n")


def entity_list_csv(records: Iterable[EntityRecord]) -> str:
    buf = io.StringIO()
    w = _csv_writer(buf)
    w.writerow(ENTITY_HEADER)
    for r in records:
        w.writerow([r.surface, r.etype.value, r.frequency, r.canonical or "", ""])
    return buf.getvalue()


def mention_list_csv(mentions: Iterable[Mention]) -> str:
    buf = io.StringIO()
    w = _csv_writer(buf)
    w.writerow(MENTION_HEADER)
    for m in mentions:
        w.writerow([m.surface, m.etype.value, m.chapter, m.line, m.token_start, m.token_end])
    return buf.getvalue()
