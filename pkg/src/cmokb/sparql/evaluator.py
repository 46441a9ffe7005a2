"""Query evaluation over an immutable graph.

Groups fold left to right over incoming partial solutions: triple
patterns extend solutions with compatible matches, OPTIONAL keeps the
row unchanged when its body has no match (left outer join), and FILTER
NOT EXISTS drops rows whose body has any compatible solution
(anti-join).  Duplicates are removed only after the final projection;
rows are then ordered by their serialized bindings so the same graph
and query always produce byte-identical output.
"""

from __future__ import annotations

from typing import Iterable, Optional

from ..model import Graph, Term
from .ast import (
    FilterNotExists,
    GroupPattern,
    OptionalGroup,
    Row,
    SelectQuery,
    SolutionTable,
    TriplePattern,
    Variable,
    sort_rows,
)

Solution = dict[str, Term]


def _resolve(term, solution: Solution) -> Optional[Term]:
    """Ground value for a pattern position, or None when still unbound."""
    if isinstance(term, Variable):
        return solution.get(term.name)
    return term


def _match_pattern(graph: Graph, pattern: TriplePattern, solution: Solution) -> list[Solution]:
    s = _resolve(pattern.subject, solution)
    p = _resolve(pattern.predicate, solution)
    o = _resolve(pattern.object, solution)
    out: list[Solution] = []
    for triple in graph.match(s, p, o):
        extended = dict(solution)
        ok = True
        for pos, value in (
            (pattern.subject, triple.subject),
            (pattern.predicate, triple.predicate),
            (pattern.object, triple.object),
        ):
            if isinstance(pos, Variable):
                bound = extended.get(pos.name)
                if bound is None:
                    extended[pos.name] = value
                elif bound != value:
                    ok = False
                    break
        if ok:
            out.append(extended)
    return out


def eval_group(graph: Graph, group: GroupPattern, inbound: Iterable[Solution]) -> list[Solution]:
    solutions = list(inbound)
    for element in group.elements:
        if not solutions:
            return []
        if isinstance(element, TriplePattern):
            solutions = [ext for sol in solutions for ext in _match_pattern(graph, element, sol)]
        elif isinstance(element, OptionalGroup):
            joined: list[Solution] = []
            for sol in solutions:
                extensions = eval_group(graph, element.group, [sol])
                joined.extend(extensions if extensions else [sol])
            solutions = joined
        elif isinstance(element, FilterNotExists):
            solutions = [sol for sol in solutions if not eval_group(graph, element.group, [sol])]
        else:  # pragma: no cover - exhaustive over AST
            raise TypeError(f"unknown group element: {element!r}")
    return solutions


def evaluate(graph: Graph, query: SelectQuery) -> SolutionTable:
    header = query.header()
    solutions = eval_group(graph, query.where, [{}])
    projected: list[Row] = [tuple(sol.get(var) for var in header) for sol in solutions]
    distinct = sort_rows(list(set(projected)))
    return SolutionTable(header, tuple(distinct))
