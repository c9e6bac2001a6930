"""Canonical-form conventions: honorific stripping, demonym majority rule, lint rules.

All rules are advisory. They only flag patterns that can be decided from the
alias table itself; conventions that need outside knowledge (full historical
names, nicknames, which part of a location matters) are left to the annotator.
"""

from __future__ import annotations

import configparser
import re
import unicodedata
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional

from . import findings as fnd
from .conll import EntityType

DEFAULT_HONORIFICS = (
    "Mr.", "Mrs.", "Ms.", "M.", "Mme.", "Madame", "Mademoiselle", "Monsieur", "Monseigneur",
    "Lord", "Lady", "Sir", "Dame", "Dr.", "St.", "Saint", "Comte", "Comtesse", "Duc",
    "Duchesse", "Cardinal", "Captain", "Milady",
)
# Titles that identify the person when no given name is known ("Comte de Wardes").
DEFAULT_RANKS = ("Comte", "Comtesse", "Duc", "Duchesse", "Cardinal", "Captain", "St.", "Saint")
# Articles swallowed between two honorifics ("Monsieur le Comte", "Monseigneur the Cardinal").
ARTICLES = frozenset(["le", "la", "the", "l'"])
PARTICLES = frozenset(["de", "du", "des", "la", "le", "les", "d'", "von", "van", "of", "the", "ter", "al"])

DEFAULT_GENDER_SUFFIXES = {"woman": "feminine", "women": "feminine", "man": "masculine", "men": "masculine"}
DEFAULT_PLURAL_SUFFIXES = frozenset(["men", "women", "s", "people"])

ROMAN_NUMERALS = frozenset(
    "I II III IV V VI VII VIII IX X XI XII XIII XIV XV XVI XVII XVIII XIX XX".split()
)

_EDGE_PUNCT = ",;:!?\"()[]"


def _fold(s: str) -> str:
    return unicodedata.normalize("NFC", s).casefold()


@dataclass(frozen=True)
class HonorificLexicon:
    entries: frozenset
    ranks: frozenset = frozenset()

    def __post_init__(self):
        if not self.entries:
            raise ValueError("honorific lexicon must not be empty")
        object.__setattr__(self, "_seqs", {tuple(_fold(e).split()) for e in self.entries})
        object.__setattr__(self, "_rank_seqs", {tuple(_fold(e).split()) for e in self.ranks if e in self.entries})
        object.__setattr__(self, "_longest", max(len(s) for s in self._seqs))

    @classmethod
    def default(cls) -> "HonorificLexicon":
        return cls(frozenset(DEFAULT_HONORIFICS), frozenset(DEFAULT_RANKS))

    def match(self, tokens: list[str], i: int) -> tuple[int, bool]:
        """Length of the longest entry starting at ``tokens[i]`` and whether it is a rank."""
        for n in range(min(self._longest, len(tokens) - i), 0, -1):
            seq = tuple(_fold(t) for t in tokens[i : i + n])
            if seq in self._seqs:
                return n, seq in self._rank_seqs
        return 0, False

    def with_changes(self, add=(), remove=(), ranks_add=(), ranks_remove=()) -> "HonorificLexicon":
        entries = (set(self.entries) | set(add) | set(ranks_add)) - set(remove)
        ranks = (set(self.ranks) | set(ranks_add)) - set(ranks_remove) - set(remove)
        return HonorificLexicon(frozenset(entries), frozenset(ranks))


@dataclass(frozen=True)
class LintConfig:
    honorifics: HonorificLexicon = field(default_factory=HonorificLexicon.default)
    group_marker: str = "House"
    gender_suffixes: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_GENDER_SUFFIXES))
    plural_suffixes: frozenset = DEFAULT_PLURAL_SUFFIXES
    enabled: frozenset = fnd.LINT_CODES
    particles: frozenset = PARTICLES
    min_part_length: int = 3

    def __post_init__(self):
        if not self.group_marker.strip():
            raise ValueError("group_marker must be non-empty")
        unknown = set(self.enabled) - fnd.LINT_CODES
        if unknown:
            raise ValueError(f"unknown lint rule codes: {', '.join(sorted(unknown))}")
        if self.min_part_length < 1:
            raise ValueError("min_part_length must be positive")


def _split_list(value: str) -> list[str]:
    return [v.strip() for v in re.split(r"[,\n]", value) if v.strip()]


def load_config(path) -> LintConfig:
    """Read a lint config file.

    INI syntax with a single ``[aliasres]`` section; list values are comma-
    or newline-separated::

        [aliasres]
        group_marker = Family
        honorifics_add = Don, Señor
        honorifics_remove = Captain
        ranks_add = Marquis
        disable = GRP-HOUSE
        particles_add = y
        min_part_length = 3
    """
    parser = configparser.ConfigParser(interpolation=None)
    with open(path, encoding="utf-8") as f:
        parser.read_file(f)
    if not parser.has_section("aliasres"):
        raise ValueError(f"{path}: missing [aliasres] section")
    sec = parser["aliasres"]
    known = {
        "group_marker", "honorifics_add", "honorifics_remove", "ranks_add", "ranks_remove",
        "enable", "disable", "particles_add", "particles_remove", "min_part_length",
    }
    extra = set(sec) - known
    if extra:
        raise ValueError(f"{path}: unknown config keys {', '.join(sorted(extra))}")

    cfg = LintConfig()
    lex = cfg.honorifics.with_changes(
        add=_split_list(sec.get("honorifics_add", "")),
        remove=_split_list(sec.get("honorifics_remove", "")),
        ranks_add=_split_list(sec.get("ranks_add", "")),
        ranks_remove=_split_list(sec.get("ranks_remove", "")),
    )
    enabled = set(_split_list(sec["enable"])) if "enable" in sec else set(cfg.enabled)
    enabled -= set(_split_list(sec.get("disable", "")))
    particles = (set(cfg.particles) | {_fold(p) for p in _split_list(sec.get("particles_add", ""))}) - {
        _fold(p) for p in _split_list(sec.get("particles_remove", ""))
    }
    return replace(
        cfg,
        honorifics=lex,
        group_marker=sec.get("group_marker", cfg.group_marker),
        enabled=frozenset(enabled),
        particles=frozenset(particles),
        min_part_length=sec.getint("min_part_length", cfg.min_part_length),
    )


def _honorific_prefix(tokens: list[str], lex: HonorificLexicon) -> tuple[int, Optional[tuple[int, int]]]:
    """Length of the leading honorific run and the span of its last rank, if any."""
    i = 0
    last_rank = None
    while i < len(tokens):
        n, is_rank = lex.match(tokens, i)
        if n:
            if is_rank:
                last_rank = (i, i + n)
            i += n
        elif _fold(tokens[i]) in ARTICLES and i + 1 < len(tokens) and lex.match(tokens, i + 1)[0]:
            i += 1
        else:
            break
    return i, last_rank


def name_tokens(tokens: Iterable[str], particles=PARTICLES) -> list[str]:
    out = []
    for t in tokens:
        t = t.strip(_EDGE_PUNCT)
        if t and _fold(t) not in particles:
            out.append(t)
    return out


def strip_honorifics(name: str, lex: Optional[HonorificLexicon] = None) -> str:
    """Drop leading honorifics, keeping the main rank when no given name would remain."""
    if not name.strip():
        raise ValueError("name must be non-empty")
    lex = lex or HonorificLexicon.default()
    tokens = name.split()
    n, last_rank = _honorific_prefix(tokens, lex)
    rest = tokens[n:]
    if n == 0 or not rest:
        return name
    if last_rank is not None and len(name_tokens(rest)) <= 1:
        return " ".join(tokens[last_rank[0] : last_rank[1]] + rest)
    return " ".join(rest)


def remove_honorifics(name: str, lex: HonorificLexicon) -> list[str]:
    """Tokens left after removing the whole leading honorific run, ranks included."""
    tokens = name.split()
    n, _ = _honorific_prefix(tokens, lex)
    return tokens[n:]


def gender_class(word: str, suffixes: Mapping[str, str] = DEFAULT_GENDER_SUFFIXES) -> str:
    w = _fold(word)
    for suf in sorted(suffixes, key=len, reverse=True):
        if w.endswith(_fold(suf)):
            return suffixes[suf]
    return "neutral"


def is_plural(word: str, plural_suffixes=DEFAULT_PLURAL_SUFFIXES) -> bool:
    w = _fold(word)
    return any(w.endswith(s) for s in plural_suffixes)


def demonym_canonical(
    variants: Iterable[tuple[str, int]],
    suffixes: Mapping[str, str] = DEFAULT_GENDER_SUFFIXES,
    plural_suffixes=DEFAULT_PLURAL_SUFFIXES,
) -> str:
    """Pick the canonical form of a demonym cluster by the majority rule.

    Variants are grouped into gender classes by suffix; the class with the
    largest total frequency wins (ties: larger single variant, then
    alphabetical), and its plural variant is returned when present, else its
    most frequent variant.
    """
    variants = list(variants)
    if not variants:
        raise ValueError("demonym_canonical needs at least one variant")
    classes = defaultdict(list)
    for surface, freq in variants:
        last = surface.split()[-1] if surface.split() else surface
        classes[gender_class(last, suffixes)].append((surface, freq))

    def class_rank(members):
        return (-sum(f for _, f in members), -max(f for _, f in members), min(s for s, _ in members))

    winner = min(classes.values(), key=class_rank)
    plurals = [(s, f) for s, f in winner if is_plural(s.split()[-1] if s.split() else s, plural_suffixes)]
    pool = plurals or winner
    return min(pool, key=lambda sf: (-sf[1], sf[0]))[0]


# lint


def _demonym_stems(word: str) -> set[str]:
    w = _fold(word)
    stems = {w}
    for suf in ("women", "woman", "men", "man"):
        if w.endswith(suf) and len(w) > len(suf):
            stems.add(w[: -len(suf)])
            break
    else:
        if w.endswith("s") and len(w) > 3:
            stems.add(w[:-1])
    return stems


class LintContext:
    """Table-wide lookups shared by every per-record lint check."""

    def __init__(self, table, cfg: LintConfig):
        self.cfg = cfg
        self.cluster = defaultdict(list)  # (type, canonical) -> records
        self.types_of = defaultdict(set)  # canonical -> types
        self.surnames = set()
        self.stems = set()
        for r in table.records:
            if r.canonical is None:
                continue
            self.cluster[(r.etype, r.canonical)].append(r)
            self.types_of[r.canonical].add(r.etype)
            if r.etype is EntityType.CHR:
                head = r.canonical.split(",")[0]
                names = name_tokens(remove_honorifics(head, cfg.honorifics), cfg.particles)
                if names:
                    self.surnames.add(_fold(names[-1]))
            elif r.etype is EntityType.GRP:
                for text in (r.surface, r.canonical):
                    words = text.split()
                    if words and _fold(words[-1]) == "people":
                        words = words[:-1]
                    if len(words) == 1:
                        self.stems |= _demonym_stems(words[0])


def _check_chr_honorific(rec, ctx):
    lex = ctx.cfg.honorifics
    tokens = rec.canonical.split()
    n, _ = _honorific_prefix(tokens, lex)
    if n == 0:
        return None
    title = " ".join(tokens[:n])
    stripped = strip_honorifics(rec.canonical, lex)
    if stripped != rec.canonical and len(stripped.split()) >= 2:
        return fnd.make(
            "CHR-HONORIFIC",
            f"canonical {rec.canonical!r} starts with honorific {title!r}; without it: {stripped!r}",
            rec.key,
        )
    # a lone family name keeps its title unless the cluster shows a fuller name
    candidates = [rec.canonical] + [r.surface for r in ctx.cluster[(rec.etype, rec.canonical)]]
    for text in candidates:
        head = text.split(",")[0]
        if len(name_tokens(remove_honorifics(head, lex), ctx.cfg.particles)) >= 2:
            return fnd.make(
                "CHR-HONORIFIC",
                f"canonical {rec.canonical!r} starts with honorific {title!r} "
                f"although a fuller name is attested ({text!r})",
                rec.key,
            )
    return None


def _check_chr_monarch(rec, ctx):
    tokens = rec.canonical.split()
    if len(tokens) >= 2 and tokens[-1] in ROMAN_NUMERALS:
        return fnd.make(
            "CHR-MONARCH",
            f"monarch canonical {rec.canonical!r} lacks its realm (e.g. '{rec.canonical} of <kingdom>')",
            rec.key,
        )
    return None


def _check_grp_house(rec, ctx):
    tokens = rec.canonical.split()
    if _fold(ctx.cfg.group_marker) in {_fold(t) for t in tokens}:
        return None
    names = name_tokens(tokens, ctx.cfg.particles)
    if len(names) == 1 and _fold(names[0]) in ctx.surnames:
        return fnd.make(
            "GRP-HOUSE",
            f"group canonical {rec.canonical!r} is a character family name; "
            f"use '{ctx.cfg.group_marker} {names[0]}'",
            rec.key,
        )
    return None


def _check_grp_plural(rec, ctx):
    tokens = rec.canonical.split()
    if _fold(ctx.cfg.group_marker) in {_fold(t) for t in tokens}:
        return None  # a family, not a demonym
    if is_plural(tokens[-1], ctx.cfg.plural_suffixes):
        return None
    members = ctx.cluster[(rec.etype, rec.canonical)]
    if any(is_plural(r.surface.split()[-1], ctx.cfg.plural_suffixes) for r in members):
        best = demonym_canonical(
            [(r.surface, r.frequency) for r in members], ctx.cfg.gender_suffixes, ctx.cfg.plural_suffixes
        )
        return fnd.make(
            "GRP-PLURAL",
            f"group canonical {rec.canonical!r} is singular while plural variants exist; majority rule gives {best!r}",
            rec.key,
        )
    return None


def _check_org_nature(rec, ctx):
    if len(rec.canonical.split()) == 1:
        return fnd.make(
            "ORG-NATURE",
            f"organization canonical {rec.canonical!r} does not state the organization's nature "
            "(e.g. 'Kingdom of …', 'Inn of …')",
            rec.key,
        )
    return None


def _check_msc_lang(rec, ctx):
    words = rec.canonical.split()
    if _fold(words[-1]) == "language":
        return None
    if len(words) == 1 and _fold(words[0]) in ctx.stems:
        return fnd.make(
            "MSC-LANG",
            f"canonical {rec.canonical!r} matches a demonym; write '{rec.canonical} language' for a language",
            rec.key,
        )
    return None


def _check_xtype(rec, ctx):
    types = ctx.types_of[rec.canonical]
    if len(types) > 1:
        others = sorted(t.value for t in types if t is not rec.etype)
        return fnd.make(
            "XTYPE-COLLIDE",
            f"canonical {rec.canonical!r} is also used for type {', '.join(others)}",
            rec.key,
        )
    return None


_RULES = {
    EntityType.CHR: [("CHR-HONORIFIC", _check_chr_honorific), ("CHR-MONARCH", _check_chr_monarch)],
    EntityType.GRP: [("GRP-HOUSE", _check_grp_house), ("GRP-PLURAL", _check_grp_plural)],
    EntityType.ORG: [("ORG-NATURE", _check_org_nature)],
    EntityType.MSC: [("MSC-LANG", _check_msc_lang)],
    EntityType.LOC: [],
}


def lint_canonical(rec, table, cfg: Optional[LintConfig] = None, context: Optional[LintContext] = None):
    if rec.canonical is None:
        raise ValueError(f"{rec.key} has no canonical form to lint")
    cfg = cfg or LintConfig()
    ctx = context or LintContext(table, cfg)
    out = []
    for code, check in _RULES[rec.etype] + [("XTYPE-COLLIDE", _check_xtype)]:
        if code in cfg.enabled:
            f = check(rec, ctx)
            if f is not None:
                out.append(f)
    return out


def lint_table(table, cfg: Optional[LintConfig] = None) -> list:
    """Lint every annotated record; a rule hit on a shared canonical is reported once."""
    cfg = cfg or LintConfig()
    ctx = LintContext(table, cfg)
    seen = set()
    out = []
    for rec in table.records:
        if rec.canonical is None:
            continue
        for f in lint_canonical(rec, table, cfg, ctx):
            ident = (f.code, rec.etype, rec.canonical)
            if ident not in seen:
                seen.add(ident)
                out.append(f)
    return fnd.sort_findings(out)
