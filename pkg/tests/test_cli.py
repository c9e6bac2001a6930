import csv
import io
import json
import os
import shutil
import subprocess
import sys

import pytest

from aliasres.cli import EXIT_ERROR, EXIT_FINDINGS, EXIT_OK, run
from aliasres.registry import load_alias_table


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_extract_writes_golden_lists(clean, tmp_path):
    code, out, _ = call("extract", clean.chapters_dir, tmp_path / "lists")
    assert code == EXIT_OK
    assert (tmp_path / "lists" / "entity_list.csv").read_text(encoding="utf-8") == clean.entity_csv
    assert (tmp_path / "lists" / "mention_list.csv").read_text(encoding="utf-8") == clean.mention_csv
    assert "entities" in out


def test_extract_notes_repaired_tags(defects, tmp_path):
    code, _, err = call("extract", defects.chapters_dir, tmp_path)
    assert code == EXIT_OK and "repaired" in err


def test_validate_clean_and_defects(clean, defects, tmp_path):
    assert call("validate", clean.chapters_dir, clean.table_path)[:2] == (EXIT_OK, "")
    report = tmp_path / "r.jsonl"
    code, out, _ = call("validate", defects.chapters_dir, defects.table_path, "--report", report)
    assert code == EXIT_FINDINGS
    assert out == defects.validate_golden
    rows = [json.loads(line) for line in report.read_text(encoding="utf-8").splitlines()]
    assert len(rows) == len(out.splitlines())
    assert {"severity", "code", "message"} <= set(rows[0])


def test_lint_warnings_only_exit_zero(defects):
    code, out, _ = call("lint", defects.table_path)
    assert code == EXIT_OK and out == defects.lint_golden


def test_lint_with_config(defects, tmp_path):
    cfg = tmp_path / "lint.ini"
    cfg.write_text("[aliasres]\ndisable = XTYPE-COLLIDE, GRP-HOUSE\n", encoding="utf-8")
    code, out, _ = call("lint", defects.table_path, "--config", cfg)
    assert "XTYPE-COLLIDE" not in out and "GRP-HOUSE" not in out and "ORG-NATURE" in out


def test_diff(defects, clean):
    code, out, _ = call("diff", defects.table_path, defects.table_v2_path)
    assert code == EXIT_FINDINGS
    assert out.startswith(defects.diff_golden)
    assert "2 mismatch(es), 1 only in v1, 1 only in v2" in out
    assert call("diff", clean.table_path, clean.table_path)[:2] == (EXIT_OK, "tables agree\n")


def test_verify_fixpoint_and_mutation(clean, tmp_path):
    v1 = tmp_path / "v1.csv"
    call("extract", clean.chapters_dir, tmp_path)
    shutil.copy(tmp_path / "entity_list.csv", v1)
    code, out, _ = call("verify", clean.chapters_dir, v1)
    # unannotated v1 carries over to an identical v2
    assert code == EXIT_OK and "fixpoint reached" in out

    v2 = tmp_path / "v2.csv"
    code, _, _ = call("verify", clean.chapters_dir, clean.table_path, "--out", v2)
    assert code == EXIT_OK and load_alias_table(v2) == clean.table


def test_suggest(mini, tmp_path):
    code, out, err = call("suggest", mini.table_path, "--gold", mini.table_path)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "cluster_id,name,type,candidate_canonical"
    assert len(list(csv.reader(io.StringIO(out)))) == len(mini.table.records) + 1
    assert "b3_f1=0.794078" in err
    sug, met = tmp_path / "s.csv", tmp_path / "m.txt"
    assert call("suggest", mini.table_path, "--out", sug, "--gold", mini.table_path, "--metrics", met)[0] == EXIT_OK
    assert "pairwise_f1=0.598425" in met.read_text(encoding="utf-8")
    assert call("suggest", mini.table_path, "--metrics", met)[0] == EXIT_ERROR


def test_finalize(clean, defects, tmp_path):
    args = ["--title", "The Three Musketeers", "--annotator", "A. Reader", "--annotator", "B. Reader",
            "--guidelines", "1.0.0", "--updated", "2024-05-02"]
    target = tmp_path / "alias_resolution.csv"
    code, out, _ = call("finalize", clean.table_path, *args, "--out", target)
    assert code == EXIT_OK
    t = load_alias_table(target)
    assert t.metadata.annotators == ("A. Reader", "B. Reader") and t.records == clean.table.records
    code, out, _ = call("finalize", defects.table_path, *args, "--out", tmp_path / "x.csv")
    assert code == EXIT_FINDINGS and "COVERAGE-BLANK" in out and not (tmp_path / "x.csv").exists()
    bad_date = [a if a != "2024-05-02" else "May 2" for a in args]
    assert call("finalize", clean.table_path, *bad_date, "--out", target)[0] == EXIT_ERROR


def test_graph(mini, tmp_path):
    code, out, _ = call("graph", mini.chapters_dir, mini.table_path, "--window", 5, "--format", "edgelist")
    assert code == EXIT_OK and out and all(len(line.split("\t")) == 3 for line in out.splitlines())
    p = tmp_path / "g.graphml"
    assert call("graph", mini.chapters_dir, mini.table_path, "--out", p)[0] == EXIT_OK
    assert p.read_text(encoding="utf-8").startswith("<?xml")
    assert call("graph", mini.chapters_dir, mini.table_path, "--window", 0)[0] == EXIT_ERROR


def test_graph_uncovered_is_an_error(defects):
    code, _, err = call("graph", defects.chapters_dir, defects.table_path)
    assert code == EXIT_ERROR and "canonical" in err


def test_locate(defects):
    code, out, _ = call("locate", defects.chapters_dir, 1, 5, "timetable")
    assert code == EXIT_OK and "chapter 1 line 5" in out
    assert call("locate", defects.chapters_dir, 99, 1, "x")[0] == EXIT_ERROR


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["validate", "only-one-arg"]])
def test_usage_errors(argv):
    assert call(*argv)[0] == EXIT_ERROR


def test_missing_files(tmp_path):
    assert call("lint", tmp_path / "nope.csv")[0] == EXIT_ERROR
    assert call("extract", tmp_path / "nope", tmp_path / "out")[0] == EXIT_ERROR


def test_malformed_table(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("name,type\nAthos,CHR\n", encoding="utf-8")
    code, _, err = call("lint", p)
    assert code == EXIT_ERROR and "header" in err


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_read_only_output(clean, tmp_path):
    ro = tmp_path / "ro"
    ro.mkdir()
    ro.chmod(0o555)
    try:
        assert call("extract", clean.chapters_dir, ro)[0] == EXIT_ERROR
    finally:
        ro.chmod(0o755)


def test_output_path_is_a_directory(clean, tmp_path):
    (tmp_path / "entity_list.csv").mkdir()
    assert call("extract", clean.chapters_dir, tmp_path)[0] == EXIT_ERROR


def test_help_exits_zero():
    assert call("--help")[0] == EXIT_OK


def test_module_entry_point(clean):
    proc = subprocess.run([sys.executable, "-m", "aliasres", "validate", str(clean.chapters_dir), str(clean.table_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == ""
