import unicodedata

import pytest
from hypothesis import strategies as st

from aliasres.conll import EntityType, corpus_from_chapters, parse_chapter
from aliasres.fixtures import load_fixture

TYPES = [t.value for t in EntityType]

_token_chars = st.characters(
    blacklist_categories=("Z", "C", "Cs"),
    blacklist_characters="  ",
)
token_text = st.text(_token_chars, min_size=1, max_size=8).filter(
    lambda s: unicodedata.normalize("NFC", s) == s and len(s.split()) == 1 and s.split()[0] == s
)


@st.composite
def tagged_sentence(draw, max_len=8):
    n = draw(st.integers(1, max_len))
    tags = []
    open_type = None
    for _ in range(n):
        choices = ["O", "B"] + (["I"] if open_type else [])
        kind = draw(st.sampled_from(choices))
        if kind == "O":
            tags.append("O")
            open_type = None
        elif kind == "B":
            open_type = draw(st.sampled_from(TYPES))
            tags.append(f"B-{open_type}")
        else:
            tags.append(f"I-{open_type}")
    return [(draw(token_text), tag) for tag in tags]


@st.composite
def conll_text(draw, max_sentences=6):
    """A well-formed chapter file: one delimiter, single blank lines, NFC, comments anywhere."""
    delim = draw(st.sampled_from(["\t", " "]))
    sents = draw(st.lists(tagged_sentence(), min_size=1, max_size=max_sentences))
    body = []
    for i, s in enumerate(sents):
        if i:
            body.append("")
        body.extend(f"{t}{delim}{g}" for t, g in s)
    words = st.text(st.sampled_from("abcdefghij =:"), min_size=0, max_size=12)
    n_comments = draw(st.integers(0, 3))
    for _ in range(n_comments):
        pos = draw(st.integers(0, len(body)))
        body.insert(pos, "#" + draw(words))
    return "\n".join(body) + "\n"


def make_chapter(sentences, index=1, comments=()):
    """Build a chapter from [[(token, tag), ...], ...] through the parser."""
    lines = list(comments)
    for i, s in enumerate(sentences):
        if i:
            lines.append("")
        lines.extend(f"{t}\t{g}" for t, g in s)
    return parse_chapter("\n".join(lines) + "\n", index)


def corpus_of(*chapters_sentences):
    return corpus_from_chapters(make_chapter(s, i) for i, s in enumerate(chapters_sentences, 1))


@pytest.fixture(scope="session")
def clean():
    return load_fixture("clean")


@pytest.fixture(scope="session")
def defects():
    return load_fixture("defects")


@pytest.fixture(scope="session")
def mini():
    return load_fixture("musketeers-mini")


def pytest_terminal_summary(terminalreporter):
    """One verdict line per acceptance criterion, in criterion order."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" and outcome != "error":
                continue
            if "test_acceptance.py::test_criterion_" not in rep.nodeid:
                continue
            name = rep.nodeid.split("::test_criterion_")[1]
            verdict = "PASS" if outcome == "passed" else "FAIL"
            lines.append((name, f"{verdict}  criterion {int(name[:2])}: {name[3:].replace('_', ' ')}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
