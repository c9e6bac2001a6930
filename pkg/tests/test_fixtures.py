import pytest

from aliasres.canon import lint_table
from aliasres.findings import RULE_CODES, format_finding
from aliasres.fixtures import FIXTURE_NAMES, load_fixture
from aliasres.graph import build_cooccurrence
from aliasres.listing import build_entity_list, build_mention_list, entity_list_csv, mention_list_csv
from aliasres.resolver import suggest_all
from aliasres.validation import diff_tables, validate


def text(found):
    return "".join(format_finding(f) + "\n" for f in found)


def test_names():
    assert FIXTURE_NAMES == ("case-variant", "clean", "defects", "musketeers-mini")


def test_unknown_fixture():
    with pytest.raises(KeyError, match="available"):
        load_fixture("nope")


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_is_self_consistent(name):
    fx = load_fixture(name)
    assert len(fx.corpus.chapters) == 3
    assert entity_list_csv(build_entity_list(fx.corpus)) == fx.entity_csv
    assert mention_list_csv(build_mention_list(fx.corpus)) == fx.mention_csv
    assert text(validate(fx.corpus, fx.table)) == fx.validate_golden
    assert text(lint_table(fx.table)) == fx.lint_golden
    assert suggest_all(fx.table.records).clusters


@pytest.mark.parametrize("name", ["case-variant", "clean", "musketeers-mini"])
def test_annotated_fixtures_graph(name):
    fx = load_fixture(name)
    g = build_cooccurrence(fx.corpus, fx.table, 5)
    assert g.vertices == {r.canonical for r in fx.table.records if r.etype.value == "CHR"}


def test_defects_cover_every_code(defects):
    found = validate(defects.corpus, defects.table) + lint_table(defects.table)
    found += diff_tables(defects.table, defects.table_v2).findings()
    assert {f.code for f in found} == set(RULE_CODES)


def test_only_defects_ships_a_second_table():
    assert [n for n in FIXTURE_NAMES if load_fixture(n).table_v2 is not None] == ["defects"]
    assert load_fixture("clean").table_v2_path is None
