"""Validation and lint results shared by every checking module.

Rule catalogue (code -> default severity):

    IOB-ORPHAN              ERROR  I- tag without an open span of the same type
    COVERAGE-BLANK          ERROR  record has no canonical form
    UNICITY-VARIANT         WARN   one canonical identity written several ways
    SUSPECT-CHARS           WARN   surface contains characters outside the name alphabet
    SUSPECT-TRAILING-PUNCT  WARN   surface ends with punctuation
    SUSPECT-LOWERCASE       WARN   CHR surface is entirely lowercase
    SUSPECT-TRUNCATED       WARN   surface is another surface minus one trailing letter
    CONSIST-MISSING         ERROR  corpus key absent from the table
    CONSIST-STALE           ERROR  table key absent from the corpus
    CONSIST-FREQ            ERROR  table frequency differs from the corpus count
    DIFF-MISMATCH           ERROR  v1 and v2 canonicals differ
    DIFF-ONLY-V1            ERROR  key only present in v1
    DIFF-ONLY-V2            ERROR  key only present in v2
    CHR-HONORIFIC           WARN   character canonical starts with an avoidable honorific
    CHR-MONARCH             WARN   monarch canonical without a realm
    GRP-HOUSE               WARN   family group canonical without the group marker
    GRP-PLURAL              WARN   singular group canonical while plural variants exist
    ORG-NATURE              WARN   organization canonical does not state its nature
    MSC-LANG                WARN   language canonical equal to a demonym stem
    XTYPE-COLLIDE           WARN   same canonical used under several entity types

Text format, one finding per line::

    SEVERITY CODE key — message

where ``key`` renders as ``surface[TYPE]`` (``-`` when absent) and the
location, if any, is appended to the message as ``(chapter C, line L)``.
The report format is JSON Lines with the keys ``severity``, ``code``,
``name``, ``type``, ``chapter``, ``line`` and ``message``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional


class Severity(enum.Enum):
    ERROR = "ERROR"
    WARN = "WARN"
    INFO = "INFO"

    @property
    def rank(self) -> int:
        return _SEVERITY_RANK[self]


_SEVERITY_RANK = {Severity.ERROR: 0, Severity.WARN: 1, Severity.INFO: 2}

RULE_CODES = {
    "IOB-ORPHAN": Severity.ERROR,
    "COVERAGE-BLANK": Severity.ERROR,
    "UNICITY-VARIANT": Severity.WARN,
    "SUSPECT-CHARS": Severity.WARN,
    "SUSPECT-TRAILING-PUNCT": Severity.WARN,
    "SUSPECT-LOWERCASE": Severity.WARN,
    "SUSPECT-TRUNCATED": Severity.WARN,
    "CONSIST-MISSING": Severity.ERROR,
    "CONSIST-STALE": Severity.ERROR,
    "CONSIST-FREQ": Severity.ERROR,
    "DIFF-MISMATCH": Severity.ERROR,
    "DIFF-ONLY-V1": Severity.ERROR,
    "DIFF-ONLY-V2": Severity.ERROR,
    "CHR-HONORIFIC": Severity.WARN,
    "CHR-MONARCH": Severity.WARN,
    "GRP-HOUSE": Severity.WARN,
    "GRP-PLURAL": Severity.WARN,
    "ORG-NATURE": Severity.WARN,
    "MSC-LANG": Severity.WARN,
    "XTYPE-COLLIDE": Severity.WARN,
}

LINT_CODES = frozenset(
    ["CHR-HONORIFIC", "CHR-MONARCH", "GRP-HOUSE", "GRP-PLURAL", "ORG-NATURE", "MSC-LANG", "XTYPE-COLLIDE"]
)


class Location(NamedTuple):
    chapter: int
    line: int


@dataclass(frozen=True)
class Finding:
    severity: Severity
    code: str
    message: str
    key: Optional[tuple] = None  # an EntityKey; typed loosely to avoid an import cycle
    location: Optional[Location] = None

    def __post_init__(self):
        if self.code not in RULE_CODES:
            raise ValueError(f"unknown rule code {self.code!r}")
        if not self.message:
            raise ValueError("finding message must be non-empty")

    def sort_key(self):
        key = self.key if self.key is not None else ("", "")
        key = (key[0], str(key[1]))
        loc = self.location or (0, 0)
        return (self.severity.rank, self.code, key, tuple(loc), self.message)


def make(code: str, message: str, key=None, location=None) -> Finding:
    """Build a finding with the catalogue severity for ``code``."""
    if location is not None:
        location = Location(*location)
    return Finding(RULE_CODES[code], code, message, key, location)


def sort_findings(findings: Iterable[Finding]) -> list[Finding]:
    return sorted(findings, key=Finding.sort_key)


def has_errors(findings: Iterable[Finding]) -> bool:
    return any(f.severity is Severity.ERROR for f in findings)


def _render_key(key) -> str:
    if key is None:
        return "-"
    return f"{key[0]}[{key[1]}]"


def format_finding(f: Finding) -> str:
    msg = f.message
    if f.location is not None:
        msg += f" (chapter {f.location.chapter}, line {f.location.line})"
    return f"{f.severity.value} {f.code} {_render_key(f.key)} — {msg}"


def finding_to_dict(f: Finding) -> dict:
    return {
        "severity": f.severity.value,
        "code": f.code,
        "name": None if f.key is None else f.key[0],
        "type": None if f.key is None else str(f.key[1]),
        "chapter": None if f.location is None else f.location.chapter,
        "line": None if f.location is None else f.location.line,
        "message": f.message,
    }


def render_report(findings: Iterable[Finding]) -> str:
    """JSON Lines report, one object per finding."""
    return "".join(json.dumps(finding_to_dict(f), ensure_ascii=False, sort_keys=True) + "\n" for f in findings)
