import csv
import datetime as dt
import io
import os
import stat

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aliasres.listing import EntityRecord, make_key
from aliasres.registry import (
    AliasTable,
    AliasTableError,
    Metadata,
    annotate_identity,
    carry_over,
    load_alias_table,
    parse_alias_table,
    render_alias_table,
    save_alias_table,
    set_metadata,
)

HEADER = "name,type,frequency,canonical,metadata\n"
META = Metadata("The Three Musketeers", ("A. Reader", "B. Reader"), "1.0.0", dt.date(2024, 5, 2))


def rec(surface, etype="CHR", freq=1, canonical=None):
    return EntityRecord(make_key(surface, etype), freq, canonical)


def test_three_filled_rows():
    text = HEADER + "Athos,CHR,3,Athos,\nParis,LOC,2,Paris,\nBible,MSC,1,Bible,\n"
    t = parse_alias_table(text)
    assert [(r.surface, r.frequency, r.canonical) for r in t.records] == [
        ("Athos", 3, "Athos"), ("Paris", 2, "Paris"), ("Bible", 1, "Bible"),
    ]
    assert t.metadata is None


def test_same_surface_two_types_loads():
    text = (
        HEADER
        + 'Chalais,CHR,1,"Henri de Talleyrand, marquis de Chalais",\n'
        + "Chalais,MSC,1,Chalais's conspiracy,\n"
    )
    t = parse_alias_table(text)
    assert [r.canonical for r in t.records] == ["Henri de Talleyrand, marquis de Chalais", "Chalais's conspiracy"]


def test_duplicate_key_names_both_lines():
    text = HEADER + "Athos,CHR,3,Athos,\nParis,LOC,1,Paris,\nAthos,CHR,1,Athos,\n"
    with pytest.raises(AliasTableError, match=r"lines 2 and 4"):
        parse_alias_table(text, "t.csv")


@pytest.mark.parametrize("text, fragment", [
    ("name,type,frequency,canonical\nAthos,CHR,1,Athos\n", "header"),
    (HEADER + "Athos,CHR,1,Athos\n", "5 columns"),
    (HEADER + "Athos,CHR,1,Athos,,\n", "5 columns"),
    (HEADER + "Athos,CHR,three,Athos,\n", "not an integer"),
    (HEADER + "Athos,CHR,1,Athos,Title\n", "malformed metadata"),
    (HEADER + "Athos,CHR,1,Athos,Colour=blue\n", "malformed metadata"),
    (HEADER + "Athos,PER,1,Athos,\n", "type"),
    ("", "empty"),
])
def test_malformed_tables(text, fragment):
    with pytest.raises(AliasTableError, match=fragment):
        parse_alias_table(text)


def test_whitespace_canonical_reads_as_blank():
    t = parse_alias_table(HEADER + "Athos,CHR,1,   ,\n")
    assert t.records[0].canonical is None


def test_metadata_cells_in_first_four_rows():
    t = set_metadata(AliasTable(tuple(rec(s) for s in ["A", "B", "C", "D", "E"])), META)
    rows = list(csv.reader(io.StringIO(render_alias_table(t))))[1:]
    assert [r[4] for r in rows] == [
        "Title=The Three Musketeers",
        "Annotator=A. Reader;B. Reader",
        "Guidelines=1.0.0",
        "Updated=2024-05-02",
        "",
    ]
    assert parse_alias_table(render_alias_table(t)).metadata == META


def test_metadata_padding_rows_for_short_tables():
    t = set_metadata(AliasTable((rec("Athos", canonical="Athos"),)), META)
    text = render_alias_table(t)
    rows = list(csv.reader(io.StringIO(text)))[1:]
    assert len(rows) == 4
    assert rows[1][:4] == ["", "", "", ""]
    back = parse_alias_table(text)
    assert back == t


def test_no_metadata_means_empty_column():
    t = AliasTable((rec("Athos", canonical="Athos"), rec("Paris", "LOC")))
    rows = list(csv.reader(io.StringIO(render_alias_table(t))))[1:]
    assert all(r[4] == "" for r in rows)


def test_incomplete_metadata_rejected():
    text = HEADER + "Athos,CHR,1,Athos,Title=X\n"
    with pytest.raises(AliasTableError, match="missing"):
        parse_alias_table(text)


def test_version_pattern():
    assert set_metadata(AliasTable(()), META).metadata.guidelines_version == "1.0.0"
    with pytest.raises(ValueError):
        Metadata("T", ("a",), "1.0", dt.date(2024, 1, 1))
    with pytest.raises(ValueError):
        Metadata("T", ("a;b",), "1.0.0", dt.date(2024, 1, 1))


def test_set_metadata_leaves_records_alone():
    t = AliasTable((rec("Athos", canonical="Athos"),))
    assert set_metadata(t, META).records == t.records


def test_save_load_round_trip_and_permissions(tmp_path):
    t = set_metadata(AliasTable((rec("Athos", canonical="Olivier de La Fère, dit Athos"), rec("Paris", "LOC"))), META)
    p = save_alias_table(t, tmp_path / "alias_resolution.csv")
    assert load_alias_table(p) == t
    assert stat.S_IMODE(os.stat(p).st_mode) == 0o644
    assert [q.name for q in tmp_path.iterdir()] == ["alias_resolution.csv"]


def test_identity_annotation_and_carry_over():
    records = [rec("Athos", freq=3), rec("Paris", "LOC")]
    ident = annotate_identity(records)
    assert [r.canonical for r in ident.records] == ["Athos", "Paris"]
    source = AliasTable((rec("Athos", freq=9, canonical="Olivier de La Fère, dit Athos"),))
    moved = carry_over(records, source)
    assert [(r.frequency, r.canonical) for r in moved.records] == [(3, "Olivier de La Fère, dit Athos"), (1, None)]


def test_duplicate_records_rejected_in_memory():
    with pytest.raises(AliasTableError):
        AliasTable((rec("Athos"), rec("Athos", freq=2)))


_text = st.text(st.characters(blacklist_categories=("C",)), min_size=1, max_size=20).filter(lambda s: s.strip())
_records = st.lists(
    st.tuples(
        _text.filter(lambda s: s == s.strip() and "  " not in s),
        st.sampled_from(["CHR", "GRP", "LOC", "MSC", "ORG"]),
        st.integers(1, 500),
        st.one_of(st.none(), _text),
    ),
    max_size=8,
    unique_by=lambda r: (r[0], r[1]),
)
_meta = st.one_of(
    st.none(),
    st.builds(
        Metadata,
        _text,
        st.lists(_text.filter(lambda s: ";" not in s), max_size=3).map(tuple),
        st.from_regex(r"\A\d{1,2}\.\d{1,2}\.\d{1,2}\Z"),
        st.dates(),
    ),
)


@settings(max_examples=120, deadline=None)
@given(_records, _meta)
def test_render_parse_identity(rows, meta):
    import unicodedata

    records = []
    seen = set()
    for s, t, f, c in rows:
        key = make_key(s, t)
        if key in seen:
            continue
        seen.add(key)
        records.append(EntityRecord(key, f, c if c is None else unicodedata.normalize("NFC", c)))
    table = AliasTable(tuple(records), meta)
    text = render_alias_table(table)
    assert parse_alias_table(text) == table
    assert render_alias_table(parse_alias_table(text)) == text
