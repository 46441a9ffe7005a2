"""SPARQL-subset query language: SELECT over basic graph patterns with
prefix declarations, predicate lists, OPTIONAL and FILTER NOT EXISTS."""

from .ast import (
    FilterNotExists,
    GroupPattern,
    OptionalGroup,
    SelectQuery,
    SolutionTable,
    TriplePattern,
    Variable,
)
from .evaluator import eval_group, evaluate
from .parser import parse_query

__all__ = [
    "FilterNotExists",
    "GroupPattern",
    "OptionalGroup",
    "SelectQuery",
    "SolutionTable",
    "TriplePattern",
    "Variable",
    "eval_group",
    "evaluate",
    "parse_query",
]
