"""Command line front end: one subcommand per step of the annotation workflow.

Exit status: 0 clean, 1 ERROR findings or differences reported, 2 usage,
parse or I/O error. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import datetime as dt
import sys
from pathlib import Path

from . import findings as fnd
from ._io import atomic_write
from .canon import LintConfig, lint_table, load_config
from .conll import BoundsError, locate_mention, parse_corpus
from .graph import DEFAULT_WINDOW, CoverageError, build_cooccurrence, render_graph
from .listing import build_entity_list, build_mention_list, entity_list_csv, mention_list_csv
from .registry import DEFAULT_FILENAME, Metadata, load_alias_table, render_alias_table, set_metadata
from .resolver import evaluate_clusters, suggest_all, suggestions_csv
from .validation import check_coverage, diff_tables, validate, verify

EXIT_OK, EXIT_FINDINGS, EXIT_ERROR = 0, 1, 2

ENTITY_LIST_NAME = "entity_list.csv"
MENTION_LIST_NAME = "mention_list.csv"


class UsageError(Exception):
    pass


def _config(args) -> LintConfig:
    return load_config(args.config) if args.config else LintConfig()


def _emit(findings, args, out) -> None:
    for f in findings:
        print(fnd.format_finding(f), file=out)
    if getattr(args, "report", None):
        atomic_write(args.report, fnd.render_report(findings))


def _write_or_print(text: str, path, out) -> None:
    if path:
        atomic_write(path, text)
    else:
        out.write(text)


def cmd_extract(args, out, err):
    corpus = parse_corpus(args.corpus_dir)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entities = build_entity_list(corpus)
    mentions = build_mention_list(corpus)
    atomic_write(out_dir / ENTITY_LIST_NAME, entity_list_csv(entities))
    atomic_write(out_dir / MENTION_LIST_NAME, mention_list_csv(mentions))
    print(f"{out_dir / ENTITY_LIST_NAME}: {len(entities)} entities", file=out)
    print(f"{out_dir / MENTION_LIST_NAME}: {len(mentions)} mentions", file=out)
    if corpus.findings:
        print(f"note: {len(corpus.findings)} tagging error(s) repaired while reading; run validate", file=err)
    return EXIT_OK


def cmd_validate(args, out, err):
    corpus = parse_corpus(args.corpus_dir)
    found = validate(corpus, load_alias_table(args.alias_csv))
    _emit(found, args, out)
    return EXIT_FINDINGS if fnd.has_errors(found) else EXIT_OK


def cmd_diff(args, out, err):
    report = diff_tables(load_alias_table(args.v1_csv), load_alias_table(args.v2_csv))
    found = report.findings()
    _emit(found, args, out)
    if report.is_empty():
        print("tables agree", file=out)
        return EXIT_OK
    print(
        f"{len(report.mismatches)} mismatch(es), {len(report.only_in_v1)} only in v1, "
        f"{len(report.only_in_v2)} only in v2",
        file=out,
    )
    return EXIT_FINDINGS


def cmd_verify(args, out, err):
    corpus = parse_corpus(args.corpus_dir)
    v1 = load_alias_table(args.v1_csv)
    v2 = load_alias_table(args.v2) if args.v2 else None
    result = verify(corpus, v1, v2)
    found = result.findings()
    _emit(found, args, out)
    if args.out:
        atomic_write(args.out, render_alias_table(result.v2))
    if result.fixpoint:
        print("fixpoint reached", file=out)
        return EXIT_OK
    print(f"fixpoint not reached: {len(found)} difference(s)", file=out)
    return EXIT_FINDINGS


def cmd_lint(args, out, err):
    found = lint_table(load_alias_table(args.alias_csv), _config(args))
    _emit(found, args, out)
    return EXIT_FINDINGS if fnd.has_errors(found) else EXIT_OK


def cmd_suggest(args, out, err):
    if args.metrics and not args.gold:
        raise UsageError("--metrics requires --gold")
    table = load_alias_table(args.entity_csv)
    cfg = _config(args)
    clusters = suggest_all(table.records, cfg)
    _write_or_print(suggestions_csv(clusters), args.out, out)
    if args.gold:
        metrics = evaluate_clusters(clusters, load_alias_table(args.gold))
        _write_or_print(metrics.as_text(), args.metrics, out if args.out else err)
    return EXIT_OK


def cmd_finalize(args, out, err):
    table = load_alias_table(args.alias_csv)
    blanks = check_coverage(table)
    if blanks:
        _emit(blanks, args, out)
        print("not finalized: every entity needs a canonical form", file=out)
        return EXIT_FINDINGS
    try:
        updated = dt.date.fromisoformat(args.updated)
    except ValueError:
        raise UsageError(f"--updated must be an ISO date (YYYY-MM-DD), got {args.updated!r}") from None
    meta = Metadata(args.title, tuple(args.annotator), args.guidelines, updated)
    target = Path(args.out) if args.out else Path(args.alias_csv).parent / DEFAULT_FILENAME
    atomic_write(target, render_alias_table(set_metadata(table, meta)))
    print(f"wrote {target}", file=out)
    return EXIT_OK


def cmd_graph(args, out, err):
    corpus = parse_corpus(args.corpus_dir)
    g = build_cooccurrence(corpus, load_alias_table(args.alias_csv), args.window)
    _write_or_print(render_graph(g, args.format), args.out, out)
    return EXIT_OK


def cmd_locate(args, out, err):
    corpus = parse_corpus(args.corpus_dir)
    hits = locate_mention(corpus, args.chapter, args.line, args.surface)
    if not hits:
        print(f"no mention {args.surface!r} at chapter {args.chapter}, line {args.line}", file=out)
        return EXIT_OK
    for m, snippet in hits:
        print(f"chapter {m.chapter} line {m.line} tokens {m.token_start}-{m.token_end} {m.surface} [{m.etype}]", file=out)
        for ctx_line in snippet.splitlines():
            print(f"    {ctx_line}", file=out)
    return EXIT_OK


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="lint/resolver config file")
    report = argparse.ArgumentParser(add_help=False)
    report.add_argument("--report", metavar="PATH", help="also write findings as JSON Lines")

    parser = argparse.ArgumentParser(prog="aliasres", description="Alias-resolution annotation tooling.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("extract", parents=[common], help="write entity and mention lists")
    p.add_argument("corpus_dir")
    p.add_argument("out_dir")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("validate", parents=[common, report], help="check an alias table against its corpus")
    p.add_argument("corpus_dir")
    p.add_argument("alias_csv")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("diff", parents=[common, report], help="compare two alias tables")
    p.add_argument("v1_csv")
    p.add_argument("v2_csv")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("verify", parents=[common, report], help="regenerate the entity list and compare to v1")
    p.add_argument("corpus_dir")
    p.add_argument("v1_csv")
    p.add_argument("--v2", metavar="PATH", help="re-annotated regenerated list to compare instead of carrying v1 over")
    p.add_argument("--out", metavar="PATH", help="write the regenerated v2 table here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lint", parents=[common, report], help="check canonical forms against the naming rules")
    p.add_argument("alias_csv")
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("suggest", parents=[common], help="suggest alias clusters")
    p.add_argument("entity_csv")
    p.add_argument("--out", metavar="PATH", help="suggestion CSV (default: stdout)")
    p.add_argument("--gold", metavar="PATH", help="annotated table to score the suggestions against")
    p.add_argument("--metrics", metavar="PATH", help="metrics file (default: stdout with --out, else stderr)")
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("finalize", parents=[common], help="stamp metadata and write alias_resolution.csv")
    p.add_argument("alias_csv")
    p.add_argument("--title", required=True)
    p.add_argument("--annotator", required=True, action="append", help="repeat for several annotators")
    p.add_argument("--guidelines", required=True, help="guidelines version, major.minor.patch")
    p.add_argument("--updated", required=True, help="date of last update, YYYY-MM-DD")
    p.add_argument("--out", metavar="PATH", help=f"default: {DEFAULT_FILENAME} next to the input")
    p.set_defaults(func=cmd_finalize)

    p = sub.add_parser("graph", parents=[common], help="export the character co-occurrence network")
    p.add_argument("corpus_dir")
    p.add_argument("alias_csv")
    p.add_argument("--window", type=_positive_int, default=DEFAULT_WINDOW, help="sentences per window")
    p.add_argument("--format", choices=["graphml", "edgelist"], default="graphml")
    p.add_argument("--out", metavar="PATH", help="default: stdout")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("locate", parents=[common], help="show a mention in context")
    p.add_argument("corpus_dir")
    p.add_argument("chapter", type=int)
    p.add_argument("line", type=int)
    p.add_argument("surface")
    p.set_defaults(func=cmd_locate)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    try:
        return args.func(args, out, err)
    except UsageError as e:
        parser.print_usage(err)
        print(f"aliasres: error: {e}", file=err)
    except (OSError, ValueError, BoundsError, CoverageError) as e:
        print(f"aliasres: error: {e}", file=err)
    return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
