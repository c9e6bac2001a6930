"""Reading and writing per-chapter CoNLL NER files.

File layout: one ``chapter_NN.conll`` per chapter, UTF-8. Each token line
holds two whitespace-separated columns (token, IOB2 tag); a blank line ends
a sentence; lines starting with ``#`` are comments. A file is well-formed
when sentences are separated by exactly one blank line, there is no leading
blank line, every token line uses the same single delimiter, the text is
NFC-normalized and the file ends with one newline. Well-formed files
round-trip byte for byte through :func:`parse_chapter` and
:func:`serialize_chapter`; other valid files are normalized to that layout.
"""

from __future__ import annotations

import enum
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from . import findings as fnd

CHAPTER_RE = re.compile(r"^chapter_(\d+)\.conll$")
TAG_RE = re.compile(r"^(?:O|([BI])-([A-Z]+))$")


class EntityType(str, enum.Enum):
    CHR = "CHR"
    LOC = "LOC"
    ORG = "ORG"
    GRP = "GRP"
    MSC = "MSC"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, value: str) -> "EntityType":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown entity type {value!r} (expected one of CHR, LOC, ORG, GRP, MSC)") from None


class ConllError(ValueError):
    """Unrecoverable problem in a CoNLL file, tied to a file and line number."""

    def __init__(self, path, lineno: int, reason: str):
        self.path = str(path)
        self.lineno = lineno
        self.reason = reason
        super().__init__(f"{path}:{lineno}: {reason}")


class BoundsError(IndexError):
    pass


def split_tag(tag: str) -> tuple[str, Optional[EntityType]]:
    """Return ``(prefix, type)``; prefix is ``O``, ``B`` or ``I``."""
    m = TAG_RE.match(tag)
    if m is None:
        raise ValueError(f"malformed tag {tag!r}")
    if m.group(1) is None:
        return "O", None
    return m.group(1), EntityType.parse(m.group(2))


@dataclass(frozen=True)
class Token:
    text: str
    tag: str

    def __post_init__(self):
        if not self.text or any(c.isspace() for c in self.text):
            raise ValueError(f"token text must be non-empty and whitespace-free: {self.text!r}")
        split_tag(self.tag)


@dataclass(frozen=True)
class Chapter:
    index: int
    source_path: str
    sentences: tuple[tuple[Token, ...], ...]
    # (output line number, raw text) pairs, 0-based, in file order
    comments: tuple[tuple[int, str], ...] = ()
    delimiter: str = "\t"

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("chapter index is 1-based")
        if not self.sentences:
            raise ValueError(f"chapter {self.index} ({self.source_path}) has no sentences")
        for i, sent in enumerate(self.sentences, 1):
            if not sent:
                raise ValueError(f"chapter {self.index}: sentence {i} is empty")
        if self.delimiter not in ("\t", " "):
            raise ValueError("delimiter must be a tab or a single space")

    def sentence_text(self, line: int) -> str:
        return " ".join(t.text for t in self.sentences[line - 1])


@dataclass(frozen=True)
class Mention:
    surface: str
    etype: EntityType
    chapter: int
    line: int
    token_start: int
    token_end: int

    def __post_init__(self):
        if not self.surface:
            raise ValueError("mention surface must be non-empty")
        if self.token_start > self.token_end:
            raise ValueError("token_start must not exceed token_end")

    @property
    def key(self):
        from .listing import EntityKey

        return EntityKey(self.surface, self.etype)

    def position(self) -> tuple[int, int, int]:
        return (self.chapter, self.line, self.token_start)


@dataclass(frozen=True)
class Corpus:
    chapters: tuple[Chapter, ...]
    mentions: tuple[Mention, ...]
    findings: tuple[fnd.Finding, ...] = field(default=())

    def __post_init__(self):
        indices = [ch.index for ch in self.chapters]
        if indices != list(range(1, len(indices) + 1)):
            raise ValueError(f"chapter indices must run 1..{len(indices)}, got {indices}")

    def chapter(self, index: int) -> Chapter:
        if not 1 <= index <= len(self.chapters):
            raise BoundsError(f"chapter {index} out of range 1..{len(self.chapters)}")
        return self.chapters[index - 1]


def _is_comment(line: str) -> bool:
    if not line.startswith("#"):
        return False
    cols = line.split()
    if len(cols) == 2 and TAG_RE.match(cols[1]):
        return False  # a literal "#" token
    return True


def parse_chapter(text: str, index: int = 1, source_path: str = "<string>") -> Chapter:
    text = unicodedata.normalize("NFC", text)
    sentences: list[tuple[Token, ...]] = []
    comments: list[tuple[int, str]] = []
    current: list[Token] = []
    delimiter = None
    out_line = 0  # line number in the normalized output

    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            if current:
                sentences.append(tuple(current))
                current = []
                out_line += 1
            continue
        if _is_comment(line):
            comments.append((out_line, line))
            out_line += 1
            continue
        cols = line.split()
        if len(cols) != 2:
            raise ConllError(source_path, lineno, f"expected 2 columns, found {len(cols)}")
        if delimiter is None:
            delimiter = "\t" if "\t" in line else " "
        try:
            current.append(Token(cols[0], cols[1]))
        except ValueError as e:
            raise ConllError(source_path, lineno, str(e)) from None
        out_line += 1
    if current:
        sentences.append(tuple(current))
    if not sentences:
        raise ConllError(source_path, 0, "file contains no sentences")
    return Chapter(index, source_path, tuple(sentences), tuple(comments), delimiter or "\t")


def extract_mentions(chapter: Chapter) -> tuple[list[Mention], list[fnd.Finding]]:
    """Turn maximal B-/I- runs into mentions, repairing orphan I- tags as B-."""
    mentions = []
    problems = []
    for line, sent in enumerate(chapter.sentences, 1):
        start = etype = orphan = None

        def close(end):
            surface = " ".join(t.text for t in sent[start : end + 1])
            m = Mention(surface, etype, chapter.index, line, start, end)
            mentions.append(m)
            if orphan is not None:
                problems.append(fnd.make("IOB-ORPHAN", orphan, m.key, (chapter.index, line)))

        for i, tok in enumerate(sent):
            prefix, ttype = split_tag(tok.tag)
            if prefix == "I" and start is not None and ttype == etype:
                continue
            if start is not None:
                close(i - 1)
                start = None
            if prefix == "O":
                continue
            orphan = None
            if prefix == "I":
                orphan = f"token {i} {tok.text!r} tagged {tok.tag} without an open {ttype} span; read as B-{ttype}"
            start, etype = i, ttype
        if start is not None:
            close(len(sent) - 1)
    return mentions, problems


def serialize_chapter(ch: Chapter) -> str:
    body = []
    for i, sent in enumerate(ch.sentences):
        if i:
            body.append("")
        body.extend(f"{t.text}{ch.delimiter}{t.tag}" for t in sent)

    out = []
    pending = list(ch.comments)
    it = iter(body)
    remaining = len(body)
    while remaining or pending:
        if pending and pending[0][0] <= len(out):
            out.append(pending.pop(0)[1])
        elif remaining:
            out.append(next(it))
            remaining -= 1
        else:
            out.append("")  # blank line between the last sentence and a trailing comment
    return "\n".join(out) + "\n"


def chapter_paths(directory) -> list[Path]:
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {directory}")
    paths = sorted(p for p in directory.iterdir() if CHAPTER_RE.match(p.name))
    if not paths:
        raise FileNotFoundError(f"no chapter_NN.conll files in {directory}")
    return paths


def parse_corpus(directory) -> Corpus:
    """Parse every chapter file of a directory, in filename order."""
    chapters = [
        parse_chapter(path.read_text(encoding="utf-8"), index, str(path))
        for index, path in enumerate(chapter_paths(directory), 1)
    ]
    return corpus_from_chapters(chapters)


def corpus_from_chapters(chapters: Iterable[Chapter]) -> Corpus:
    chapters = tuple(chapters)
    mentions = []
    problems = []
    for ch in chapters:
        ms, found = extract_mentions(ch)
        mentions.extend(ms)
        problems.extend(found)
    return Corpus(chapters, tuple(mentions), tuple(problems))


def write_corpus(corpus: Corpus, directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    width = max(2, len(str(len(corpus.chapters))))
    paths = []
    for ch in corpus.chapters:
        p = directory / f"chapter_{ch.index:0{width}d}.conll"
        p.write_text(serialize_chapter(ch), encoding="utf-8")
        paths.append(p)
    return paths


def locate_mention(corpus: Corpus, chapter: int, line: int, surface: str) -> list[tuple[Mention, str]]:
    """Find mentions of ``surface`` on a sentence, with one sentence of context each side."""
    ch = corpus.chapter(chapter)
    if not 1 <= line <= len(ch.sentences):
        raise BoundsError(f"line {line} out of range 1..{len(ch.sentences)} for chapter {chapter}")
    surface = unicodedata.normalize("NFC", surface)
    lo, hi = max(1, line - 1), min(len(ch.sentences), line + 1)
    snippet = "\n".join(ch.sentence_text(i) for i in range(lo, hi + 1))
    return [
        (m, snippet)
        for m in corpus.mentions
        if m.chapter == chapter and m.line == line and m.surface == surface
    ]
