"""Pattern-based column validation and tagging over a corpus index."""

from ._core import (
    Index,
    PatlakeError,
    Program,
    build_index,
    chi_squared_yates,
    drift_check,
    fisher_exact,
    generate_patterns,
    index_corpus,
    learn,
    matches,
    pattern_to_regex,
    run_cli,
    segment,
    suggest,
)

__all__ = [
    "Index",
    "PatlakeError",
    "Program",
    "build_index",
    "chi_squared_yates",
    "drift_check",
    "fisher_exact",
    "generate_patterns",
    "index_corpus",
    "learn",
    "matches",
    "pattern_to_regex",
    "run_cli",
    "segment",
    "suggest",
]
