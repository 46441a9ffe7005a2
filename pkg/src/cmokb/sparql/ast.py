"""Query AST and result table."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

from ..model import Blank, Iri, Literal, PrefixMap, Term, term_key
from ..namespaces import DEFAULT_PREFIXES, XSD_STRING


@dataclass(frozen=True, slots=True)
class Variable:
    name: str


PatternTerm = Union[Term, Variable]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def variables(self) -> list[str]:
        return [t.name for t in (self.subject, self.predicate, self.object) if isinstance(t, Variable)]


@dataclass(frozen=True, slots=True)
class OptionalGroup:
    group: "GroupPattern"


@dataclass(frozen=True, slots=True)
class FilterNotExists:
    group: "GroupPattern"


GroupElement = Union[TriplePattern, OptionalGroup, FilterNotExists]


@dataclass(frozen=True, slots=True)
class GroupPattern:
    elements: tuple[GroupElement, ...] = ()

    def in_scope_variables(self) -> list[str]:
        """Variables this group can bind, in first-use order.

        FILTER NOT EXISTS bodies test for matches but never bind outward,
        so their variables are excluded.
        """
        seen: list[str] = []

        def walk(group: "GroupPattern"):
            for el in group.elements:
                if isinstance(el, TriplePattern):
                    for name in el.variables():
                        if name not in seen:
                            seen.append(name)
                elif isinstance(el, OptionalGroup):
                    walk(el.group)

        walk(self)
        return seen

    def all_variables(self) -> set[str]:
        names: set[str] = set()

        def walk(group: "GroupPattern"):
            for el in group.elements:
                if isinstance(el, TriplePattern):
                    names.update(el.variables())
                else:
                    walk(el.group)

        walk(self)
        return names


@dataclass(frozen=True)
class SelectQuery:
    prefixes: PrefixMap
    projection: Optional[tuple[str, ...]]  # None means SELECT *
    where: GroupPattern
    warnings: tuple[str, ...] = ()

    def header(self) -> tuple[str, ...]:
        if self.projection is None:
            return tuple(self.where.in_scope_variables())
        return self.projection


Row = tuple[Optional[Term], ...]


def _term_json(term: Term) -> dict:
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, Blank):
        return {"type": "bnode", "value": term.node_id}
    out: dict = {"type": "literal", "value": term.lexical}
    if term.lang:
        out["xml:lang"] = term.lang
    elif term.datatype != XSD_STRING:
        out["datatype"] = term.datatype
    return out


def display_term(term: Optional[Term], null_label: str = "—") -> str:
    if term is None:
        return null_label
    if isinstance(term, Iri):
        compact = PrefixMap(dict(DEFAULT_PREFIXES)).compact(term.value)
        return compact if compact else term.n3()
    if isinstance(term, Literal):
        return term.lexical
    return term.n3()


@dataclass(frozen=True)
class SolutionTable:
    header: tuple[str, ...]
    rows: tuple[Row, ...]

    def to_json(self) -> dict:
        bindings = []
        for row in self.rows:
            entry = {}
            for var, cell in zip(self.header, row):
                if cell is not None:
                    entry[var] = _term_json(cell)
            bindings.append(entry)
        return {"head": {"vars": list(self.header)}, "results": {"bindings": bindings}}

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=2)

    def to_text(self, null_label: str = "—") -> str:
        headers = [f"?{v}" for v in self.header]
        table = [headers] + [
            [display_term(cell, null_label) for cell in row] for row in self.rows
        ]
        if not self.header:
            return f"({len(self.rows)} rows)\n"
        widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
        lines = []
        for idx, r in enumerate(table):
            lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(r)).rstrip())
            if idx == 0:
                lines.append("  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"

    def column(self, var: str) -> list[Optional[Term]]:
        idx = self.header.index(var)
        return [row[idx] for row in self.rows]


def sort_rows(rows: list[Row]) -> list[Row]:
    return sorted(rows, key=lambda row: tuple(term_key(c) for c in row))
