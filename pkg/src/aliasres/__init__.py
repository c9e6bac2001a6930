"""Tooling for alias-resolution annotation of CoNLL-annotated novels."""

from .canon import LintConfig, demonym_canonical, lint_canonical, lint_table, strip_honorifics
from .conll import Chapter, Corpus, EntityType, Mention, Token, locate_mention, parse_corpus, serialize_chapter
from .findings import Finding, Severity
from .fixtures import Fixture, load_fixture
from .graph import CharacterGraph, build_cooccurrence, write_graph
from .listing import EntityKey, EntityRecord, build_entity_list, build_mention_list
from .registry import AliasTable, Metadata, load_alias_table, save_alias_table, set_metadata
from .resolver import ClusterMetrics, ClusterSet, evaluate_clusters, suggest_clusters
from .validation import (
    DiffReport,
    check_consistency,
    check_coverage,
    check_suspect_names,
    check_unicity,
    diff_tables,
    validate,
    verify,
)

__version__ = "0.1.0"
