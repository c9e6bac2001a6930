"""Bundled synthetic corpora with golden outputs.

Each fixture directory holds ``chapters/chapter_NN.conll``, the golden
``entity_list.csv`` and ``mention_list.csv`` produced by ``extract``, the
annotated ``alias_table.csv``, and the expected findings of ``validate`` and
``lint`` in text form. ``defects`` also ships ``alias_table_v2.csv`` and the
expected ``diff`` output between the two tables.

clean            every entity type, no findings anywhere
case-variant     clean, except one canonical written as 'god'
musketeers-mini  character tables only, for the cluster resolver
defects          at least one seeded defect per finding code
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .conll import Corpus, parse_corpus
from .registry import AliasTable, parse_alias_table

FIXTURE_ROOT = Path(__file__).parent / "fixtures"
FIXTURE_NAMES = ("case-variant", "clean", "defects", "musketeers-mini")


@dataclass(frozen=True)
class Fixture:
    name: str
    root: Path
    corpus: Corpus
    entity_csv: str
    mention_csv: str
    table: AliasTable
    validate_golden: str
    lint_golden: str
    table_v2: Optional[AliasTable] = None
    diff_golden: Optional[str] = None

    @property
    def chapters_dir(self) -> Path:
        return self.root / "chapters"

    @property
    def table_path(self) -> Path:
        return self.root / "alias_table.csv"

    @property
    def table_v2_path(self) -> Optional[Path]:
        p = self.root / "alias_table_v2.csv"
        return p if p.exists() else None


def _read(path: Path) -> str:
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


def load_fixture(name: str) -> Fixture:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")
    root = FIXTURE_ROOT / name
    v2_path = root / "alias_table_v2.csv"
    diff_path = root / "diff.txt"
    return Fixture(
        name=name,
        root=root,
        corpus=parse_corpus(root / "chapters"),
        entity_csv=_read(root / "entity_list.csv"),
        mention_csv=_read(root / "mention_list.csv"),
        table=parse_alias_table(_read(root / "alias_table.csv"), str(root / "alias_table.csv")),
        validate_golden=_read(root / "validate.txt"),
        lint_golden=_read(root / "lint.txt"),
        table_v2=parse_alias_table(_read(v2_path), str(v2_path)) if v2_path.exists() else None,
        diff_golden=_read(diff_path) if diff_path.exists() else None,
    )
