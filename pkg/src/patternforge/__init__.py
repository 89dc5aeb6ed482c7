"""Typed property graphs, a conjunctive pattern language, three matching
strategies, a planted-instance generator and the benchmark harness around them."""

from .engine import (
    MatchResult, MatchStats, check_witness, match, match_bruteforce, match_subpattern,
    match_unified,
)
from .errors import PatternForgeError
from .generator import GenConfig, GenReport, generate, mutate_to_distractor, plant_minimal
from .graph import (
    DEFAULT_SCHEMA, EdgeRecord, EdgeType, GraphStore, Schema, ValidationReport, VertexRecord,
    VertexType,
)
from .io_formats import (
    export_prolog, load_columnar, load_facts, save_columnar, save_facts, write_metrics_csv,
)
from .metrics import BenchRow, cycles_per_edge, cycles_per_inference, lips
from .pattern import Pattern, builtin_agile_lite, parse_pattern, unparse, validate_pattern

__version__ = "0.1.0"

__all__ = [
    "BenchRow", "DEFAULT_SCHEMA", "EdgeRecord", "EdgeType", "GenConfig", "GenReport", "GraphStore",
    "MatchResult", "MatchStats", "Pattern", "PatternForgeError", "Schema", "ValidationReport",
    "VertexRecord", "VertexType", "builtin_agile_lite", "check_witness", "cycles_per_edge",
    "cycles_per_inference", "export_prolog", "generate", "lips", "load_columnar", "load_facts",
    "match", "match_bruteforce", "match_subpattern", "match_unified", "mutate_to_distractor",
    "parse_pattern", "plant_minimal", "save_columnar", "save_facts", "unparse", "validate_pattern",
    "write_metrics_csv",
]
