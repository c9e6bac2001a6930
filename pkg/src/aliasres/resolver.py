"""Alias cluster suggestions by shared name parts, and scoring against gold annotations."""

from __future__ import annotations

import csv
import io
import unicodedata
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .canon import LintConfig, name_tokens, remove_honorifics
from .listing import EntityKey, EntityRecord, collation_key

SUGGESTION_HEADER = ["cluster_id", "name", "type", "candidate_canonical"]


class UnionFind:
    def __init__(self, elements):
        self.parent = {e: e for e in elements}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> list[list]:
        out = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return list(out.values())


def name_parts(surface: str, cfg: LintConfig) -> frozenset:
    """Linking parts of a surface: honorifics and particles removed, case-folded.

    A surface made only of honorifics ("Milady") keeps its own tokens.
    """
    rest = remove_honorifics(surface, cfg.honorifics) or surface.split()
    parts = name_tokens(rest, cfg.particles)
    return frozenset(
        p
        for p in (unicodedata.normalize("NFC", t).casefold() for t in parts)
        if len(p) >= cfg.min_part_length
    )


def linked(a: str, b: str, cfg: LintConfig) -> bool:
    return bool(name_parts(a, cfg) & name_parts(b, cfg))


@dataclass(frozen=True)
class ClusterSet:
    clusters: tuple[frozenset, ...]
    candidates: tuple[str, ...]

    def __post_init__(self):
        if len(self.clusters) != len(self.candidates):
            raise ValueError("one candidate per cluster")
        for members, cand in zip(self.clusters, self.candidates):
            if cand not in {k.surface for k in members}:
                raise ValueError(f"candidate {cand!r} is not a member of its cluster")

    def keys(self) -> set:
        return set().union(*self.clusters) if self.clusters else set()

    def cluster_of(self) -> dict:
        return {k: i for i, c in enumerate(self.clusters) for k in c}


def _candidate(members: list[EntityRecord], cfg: LintConfig) -> str:
    best = min(members, key=lambda r: (-len(name_parts(r.surface, cfg)), -r.frequency, r.surface))
    return best.surface


def suggest_clusters(records: Iterable[EntityRecord], cfg: Optional[LintConfig] = None) -> ClusterSet:
    """Group same-type names sharing a name part; suggest the fullest name per group."""
    records = list(records)
    cfg = cfg or LintConfig()
    types = {r.etype for r in records}
    if len(types) > 1:
        raise ValueError(f"records mix entity types: {', '.join(sorted(t.value for t in types))}")
    uf = UnionFind(range(len(records)))
    first_with = {}
    for i, r in enumerate(records):
        for part in name_parts(r.surface, cfg):
            if part in first_with:
                uf.union(first_with[part], i)
            else:
                first_with[part] = i
    groups = [[records[i] for i in g] for g in uf.groups()]
    cands = [_candidate(g, cfg) for g in groups]
    order = sorted(range(len(groups)), key=lambda i: (cands[i].casefold(), cands[i]))
    return ClusterSet(
        tuple(frozenset(r.key for r in groups[i]) for i in order),
        tuple(cands[i] for i in order),
    )


def suggest_all(records: Iterable[EntityRecord], cfg: Optional[LintConfig] = None) -> ClusterSet:
    """Cluster a mixed-type list type by type and concatenate the results."""
    by_type = defaultdict(list)
    for r in records:
        by_type[r.etype].append(r)
    clusters, cands = [], []
    for etype in sorted(by_type, key=lambda t: t.value):
        cs = suggest_clusters(by_type[etype], cfg)
        clusters += cs.clusters
        cands += cs.candidates
    return ClusterSet(tuple(clusters), tuple(cands))


def suggestions_csv(cs: ClusterSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUGGESTION_HEADER)
    for cid, (members, cand) in enumerate(zip(cs.clusters, cs.candidates), 1):
        for key in sorted(members, key=collation_key):
            w.writerow([cid, key.surface, key.etype.value, cand])
    return buf.getvalue()


@dataclass(frozen=True)
class ClusterMetrics:
    pairwise_precision: float
    pairwise_recall: float
    pairwise_f1: float
    b3_precision: float
    b3_recall: float
    b3_f1: float

    def as_text(self) -> str:
        return "".join(f"{name}={getattr(self, name):.6f}\n" for name in self.__dataclass_fields__)


def f1(p: float, r: float) -> float:
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def gold_clusters(gold, keys) -> dict:
    """Map each key to its gold cluster id: same type and identical canonical string."""
    recs = gold.by_key()
    out = {}
    for k in keys:
        rec = recs.get(k)
        if rec is None:
            raise ValueError(f"predicted key {k} is absent from the gold table")
        out[k] = (k.etype, rec.canonical) if rec.canonical is not None else (k.etype, None, k.surface)
    return out


def _pairs(assign: dict) -> set:
    groups = defaultdict(list)
    for k, c in assign.items():
        groups[c].append(k)
    return {frozenset(p) for members in groups.values() for p in combinations(members, 2)}


def evaluate_clusters(predicted: ClusterSet, gold) -> ClusterMetrics:
    """Pairwise and B-cubed scores over the predicted keys.

    Pairwise precision is 1 when no pair is predicted, recall 1 when gold has no pair.
    """
    keys = sorted(predicted.keys(), key=collation_key)
    pred = predicted.cluster_of()
    gold_of = gold_clusters(gold, keys)

    pp, gp = _pairs({k: pred[k] for k in keys}), _pairs(gold_of)
    hit = len(pp & gp)
    p_prec = hit / len(pp) if pp else 1.0
    p_rec = hit / len(gp) if gp else 1.0

    pred_members = defaultdict(set)
    gold_members = defaultdict(set)
    for k in keys:
        pred_members[pred[k]].add(k)
        gold_members[gold_of[k]].add(k)
    if keys:
        b_prec = sum(len(pred_members[pred[k]] & gold_members[gold_of[k]]) / len(pred_members[pred[k]]) for k in keys) / len(keys)
        b_rec = sum(len(pred_members[pred[k]] & gold_members[gold_of[k]]) / len(gold_members[gold_of[k]]) for k in keys) / len(keys)
    else:
        b_prec = b_rec = 1.0
    return ClusterMetrics(p_prec, p_rec, f1(p_prec, p_rec), b_prec, b_rec, f1(b_prec, b_rec))
