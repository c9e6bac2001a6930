"""Character co-occurrence networks whose vertices are canonical names.

Two characters co-occur when both are mentioned inside one window of
``window`` consecutive sentences of a chapter. Every window position adds 1
to the weight of each pair of distinct canonicals present in it, however
many times each is mentioned there. A chapter shorter than the window counts
as a single window. Windows never cross chapter boundaries.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from xml.sax.saxutils import quoteattr

from ._io import atomic_write
from .conll import Corpus, EntityType

DEFAULT_WINDOW = 10
GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


class CoverageError(ValueError):
    pass


@dataclass(frozen=True)
class CharacterGraph:
    vertices: frozenset = frozenset()
    edges: dict = field(default_factory=dict)  # frozenset({a, b}) -> weight

    def __post_init__(self):
        for pair, w in self.edges.items():
            if len(pair) != 2:
                raise ValueError(f"self-loop or malformed edge {sorted(pair)}")
            if w < 1:
                raise ValueError(f"edge weight must be >= 1, got {w}")
            if not pair <= self.vertices:
                raise ValueError(f"edge endpoint not a vertex: {sorted(pair)}")

    def weight(self, a: str, b: str) -> int:
        return self.edges.get(frozenset((a, b)), 0)

    def sorted_edges(self) -> list[tuple[str, str, int]]:
        return sorted((*sorted(pair), w) for pair, w in self.edges.items())


def build_cooccurrence(corpus: Corpus, table, window: int = DEFAULT_WINDOW) -> CharacterGraph:
    if window < 1:
        raise ValueError("window must be a positive number of sentences")
    canon = {r.key: r.canonical for r in table.records if r.canonical is not None}
    missing = sorted({str(m.key) for m in corpus.mentions if m.etype is EntityType.CHR and m.key not in canon})
    if missing:
        raise CoverageError("no canonical form for character(s): " + ", ".join(missing))

    per_chapter = {ch.index: [[] for _ in ch.sentences] for ch in corpus.chapters}
    vertices = set()
    for m in corpus.mentions:
        if m.etype is EntityType.CHR:
            c = canon[m.key]
            per_chapter[m.chapter][m.line - 1].append(c)
            vertices.add(c)

    edges = Counter()
    for sentences in per_chapter.values():
        n = len(sentences)
        present = Counter()
        for i in range(min(window, n)):
            present.update(set(sentences[i]))
        for start in range(max(1, n - window + 1)):
            if start:
                present.subtract(set(sentences[start - 1]))
                present.update(set(sentences[start + window - 1]))
            live = sorted(c for c, k in present.items() if k > 0)
            for a, b in combinations(live, 2):
                edges[frozenset((a, b))] += 1
    return CharacterGraph(frozenset(vertices), dict(edges))


def edgelist_text(g: CharacterGraph) -> str:
    return "".join(f"{a}\t{b}\t{w}\n" for a, b, w in g.sorted_edges())


def graphml_text(g: CharacterGraph) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<graphml xmlns="{GRAPHML_NS}">',
        '  <key id="w" for="edge" attr.name="weight" attr.type="int"/>',
        '  <graph id="G" edgedefault="undirected">',
    ]
    for v in sorted(g.vertices):
        lines.append(f"    <node id={quoteattr(v)}/>")
    for a, b, w in g.sorted_edges():
        lines.append(f'    <edge source={quoteattr(a)} target={quoteattr(b)}><data key="w">{w}</data></edge>')
    lines += ["  </graph>", "</graphml>"]
    return "\n".join(lines) + "\n"


def render_graph(g: CharacterGraph, fmt: str) -> str:
    fmt = fmt.lower()
    if fmt == "graphml":
        return graphml_text(g)
    if fmt == "edgelist":
        return edgelist_text(g)
    raise ValueError(f"unknown graph format {fmt!r} (expected graphml or edgelist)")


def write_graph(g: CharacterGraph, fmt: str, path) -> Path:
    return atomic_write(path, render_graph(g, fmt))


def read_graphml(path) -> CharacterGraph:
    root = ET.parse(path).getroot()
    ns = {"g": GRAPHML_NS}
    graph = root.find("g:graph", ns)
    vertices = frozenset(n.get("id") for n in graph.findall("g:node", ns))
    edges = {}
    for e in graph.findall("g:edge", ns):
        data = e.find("g:data[@key='w']", ns)
        edges[frozenset((e.get("source"), e.get("target")))] = int(data.text)
    return CharacterGraph(vertices, edges)

