"""Checks run on an annotated entity list: coverage, unicity, suspect names,
corpus consistency, and the v1/v2 comparison that ends the annotation loop.
"""

from __future__ import annotations

import re
import unicodedata
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import findings as fnd
from .canon import HonorificLexicon
from .conll import Corpus, EntityType
from .findings import Finding
from .listing import EntityKey, EntityRecord, build_entity_list, collation_key, count_keys
from .registry import AliasTable, carry_over

_NAME_PUNCT = frozenset("'’-.")
_TRAILING = frozenset("'’-")


def check_coverage(t: AliasTable) -> list[Finding]:
    return fnd.sort_findings(
        fnd.make("COVERAGE-BLANK", "no canonical form assigned", r.key)
        for r in t.records
        if r.canonical is None or not r.canonical.strip()
    )


def unicity_form(canonical: str) -> str:
    s = unicodedata.normalize("NFC", canonical).casefold().strip()
    return re.sub(r"\s+", " ", s)


def check_unicity(t: AliasTable) -> list[Finding]:
    groups = defaultdict(set)
    for r in t.records:
        if r.canonical:
            groups[unicity_form(r.canonical)].add(r.canonical)
    out = []
    for variants in groups.values():
        if len(variants) >= 2:
            listed = ", ".join(repr(v) for v in sorted(variants))
            out.append(fnd.make("UNICITY-VARIANT", f"one canonical form written {len(variants)} ways: {listed}"))
    return fnd.sort_findings(out)


def _suspect_reasons(rec: EntityRecord, longer: dict, lex: HonorificLexicon) -> list[tuple[str, str]]:
    s = rec.surface
    reasons = []
    bad = sorted({c for c in s if not (c.isalpha() or c == " " or c in _NAME_PUNCT)})
    if bad:
        reasons.append(("SUSPECT-CHARS", f"contains non-alphabetic characters {''.join(bad)!r}"))
    last = s.split()[-1]
    if s[-1] in _TRAILING or (
        s[-1] == "." and len(last.rstrip(".")) > 3 and lex.match([last], 0)[0] == 0
    ):
        reasons.append(("SUSPECT-TRAILING-PUNCT", f"ends with punctuation {s[-1]!r}"))
    if rec.etype is EntityType.CHR and s == s.lower() and any(c.isalpha() for c in s):
        reasons.append(("SUSPECT-LOWERCASE", "character name is entirely lowercase"))
    for full in longer.get(s, ()):
        reasons.append(("SUSPECT-TRUNCATED", f"looks incomplete next to {full!r}"))
        break
    return reasons


def check_suspect_names(records: Iterable[EntityRecord], lex: Optional[HonorificLexicon] = None) -> list[Finding]:
    """One WARN per record whose surface looks like an NER annotation error.

    The code names the first matching reason in the order chars, trailing
    punctuation, lowercase, truncation; the message lists all of them.
    """
    records = list(records)
    lex = lex or HonorificLexicon.default()
    by_type = defaultdict(set)
    for r in records:
        by_type[r.etype].add(r.surface)
    longer = {}
    for etype, surfaces in by_type.items():
        table = defaultdict(list)
        for t in surfaces:
            if len(t) < 2 or not t[-1].isalpha() or t[:-1] not in surfaces:
                continue
            if etype is not EntityType.CHR and t[-1] == "s":
                continue  # plural inflection, not a truncation
            table[t[:-1]].append(t)
        longer[etype] = table
    out = []
    for r in records:
        reasons = _suspect_reasons(r, longer[r.etype], lex)
        if reasons:
            out.append(fnd.make(reasons[0][0], f"{r.surface!r} " + "; ".join(m for _, m in reasons), r.key))
    return fnd.sort_findings(out)


def check_consistency(corpus: Corpus, t: AliasTable) -> list[Finding]:
    counts = count_keys(corpus.mentions)
    table = t.by_key()
    out = []
    for key, n in counts.items():
        rec = table.get(key)
        if rec is None:
            out.append(fnd.make("CONSIST-MISSING", f"present in the corpus ({n} mentions) but not in the table", key))
        elif rec.frequency != n:
            out.append(fnd.make("CONSIST-FREQ", f"table frequency {rec.frequency}, corpus count {n}", key))
    for key in table:
        if key not in counts:
            out.append(fnd.make("CONSIST-STALE", "in the table but no longer in the corpus", key))
    return fnd.sort_findings(out)


@dataclass(frozen=True)
class DiffReport:
    mismatches: tuple[tuple[EntityKey, Optional[str], Optional[str]], ...] = ()
    only_in_v1: tuple[EntityKey, ...] = ()
    only_in_v2: tuple[EntityKey, ...] = ()

    def is_empty(self) -> bool:
        return not (self.mismatches or self.only_in_v1 or self.only_in_v2)

    def findings(self) -> list[Finding]:
        out = [
            fnd.make("DIFF-MISMATCH", f"v1 canonical {c1!r} != v2 canonical {c2!r}", k)
            for k, c1, c2 in self.mismatches
        ]
        out += [fnd.make("DIFF-ONLY-V1", "entity only in v1", k) for k in self.only_in_v1]
        out += [fnd.make("DIFF-ONLY-V2", "entity only in v2", k) for k in self.only_in_v2]
        return fnd.sort_findings(out)


def diff_tables(v1: AliasTable, v2: AliasTable) -> DiffReport:
    """Compare two tables key by key (not row by row).

    A blank canonical on one side and a filled one on the other counts as a
    mismatch, so the report is empty exactly when both tables agree.
    """
    a, b = v1.by_key(), v2.by_key()
    both = sorted(a.keys() & b.keys(), key=collation_key)
    return DiffReport(
        tuple((k, a[k].canonical, b[k].canonical) for k in both if a[k].canonical != b[k].canonical),
        tuple(sorted(a.keys() - b.keys(), key=collation_key)),
        tuple(sorted(b.keys() - a.keys(), key=collation_key)),
    )


def validate(corpus: Corpus, t: AliasTable) -> list[Finding]:
    """Full check of a table against its corpus; suspect names are judged on the regenerated list."""
    out = list(corpus.findings)
    out += check_coverage(t)
    out += check_unicity(t)
    out += check_suspect_names(build_entity_list(corpus))
    out += check_consistency(corpus, t)
    return fnd.sort_findings(out)


@dataclass(frozen=True)
class VerifyResult:
    report: DiffReport
    drift: tuple[Finding, ...] = field(default=())  # v1 rows whose counts no longer match the corpus
    v2: Optional[AliasTable] = None

    @property
    def fixpoint(self) -> bool:
        return self.report.is_empty() and not self.drift

    def findings(self) -> list[Finding]:
        return fnd.sort_findings(list(self.report.findings()) + list(self.drift))


def verify(corpus: Corpus, v1: AliasTable, v2: Optional[AliasTable] = None) -> VerifyResult:
    """One iteration of the regenerate-and-compare loop.

    The entity list is rebuilt from the corpus. Without ``v2`` its canonicals
    are carried over from ``v1`` by key, so the comparison exposes entities
    that appeared or vanished since v1. A supplied ``v2`` (the re-annotated
    regenerated list) is compared cell by cell instead.
    """
    regenerated = build_entity_list(corpus)
    counts = {r.key: r.frequency for r in regenerated}
    drift = [
        fnd.make("CONSIST-FREQ", f"v1 frequency {r.frequency}, corpus count {counts[r.key]}", r.key)
        for r in v1.records
        if r.key in counts and counts[r.key] != r.frequency
    ]
    if v2 is None:
        v2 = carry_over(regenerated, v1)
    else:
        drift += check_consistency(corpus, v2)
    return VerifyResult(diff_tables(v1, v2), tuple(fnd.sort_findings(drift)), v2)
