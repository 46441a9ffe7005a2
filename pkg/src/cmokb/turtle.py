"""Turtle-subset documents: parsing with ';'/',' abbreviations and a
canonical serializer (sorted prefixes, one sorted statement per line).

Parsing also normalizes knowledge-base quirks, with warnings:
the possedeUneCompetence alias becomes possedeCompetence, day-first
dates become ISO, and French duration phrases become ISO durations.
Canonical output never contains those forms, so parse(serialize(g)) is
the identity on graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dates import parse_dayfirst_date, parse_french_duration
from .errors import DateParseError, DurationParseError, TurtleSyntaxError
from .lex import Token, TokKind, tokenize
from .model import Blank, Graph, Iri, Literal, PrefixMap, Term, Triple
from .namespaces import DEFAULT_PREFIXES, RDF_TYPE, XSD_DATE, XSD_DECIMAL, XSD_DURATION, XSD_INTEGER, XSD_STRING
from .schema import (
    A_DATE_DEBUT,
    A_DATE_EMISSION,
    A_DATE_FIN,
    A_DUREE,
    A_DUREE_DE_VALIDITE,
    POSSEDE_COMPETENCE,
    POSSEDE_UNE_COMPETENCE,
)

_DATE_PREDICATES = {A_DATE_EMISSION, A_DATE_DEBUT, A_DATE_FIN}
_DURATION_PREDICATES = {A_DUREE, A_DUREE_DE_VALIDITE}


@dataclass
class ParseResult:
    graph: Graph
    prefixes: PrefixMap
    warnings: list[str] = field(default_factory=list)


class _TurtleParser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.prefixes = PrefixMap()
        self.warnings: list[str] = []
        self.triples: list[Triple] = []

    def peek(self) -> Token:
        return self.tokens.get(self.pos)

    def advance(self) -> Token:
        tok = self.tokens.get(self.pos)
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token, expected: tuple[str, ...] = ()):
        raise TurtleSyntaxError(message, tok.line, tok.column, expected)

    def expect(self, kind: TokKind) -> Token:
        tok = self.advance()
        if tok.kind is not kind:
            self.error(f"expected {kind.value}, got {tok.describe()}", tok, (kind.value,))
        return tok

    def parse(self) -> ParseResult:
        while self.peek().kind is not TokKind.EOF:
            tok = self.peek()
            if tok.kind is TokKind.LANGTAG and tok.value == "prefix":
                self.advance()
                self._prefix_decl()
            elif tok.kind is TokKind.WORD and tok.value.upper() == "PREFIX":
                self.advance()
                self._prefix_decl(sparql_style=True)
            else:
                self._statement()
        return ParseResult(Graph(self.triples), self.prefixes, self.warnings)

    def _prefix_decl(self, sparql_style: bool = False):
        tok = self.expect(TokKind.PNAME)
        prefix, local = tok.value
        if local:
            self.error("expected prefix declaration ending in ':'", tok)
        iri = self.expect(TokKind.IRIREF)
        existing = self.prefixes.bindings.get(prefix)
        if existing is not None and existing != iri.value:
            self.error(f"conflicting rebinding of prefix {prefix!r}", iri)
        self.prefixes.bind(prefix, iri.value)
        if not sparql_style:
            self.expect(TokKind.DOT)

    def _statement(self):
        subject = self._resource("subject")
        while True:
            predicate = self._verb()
            while True:
                obj = self._object(predicate)
                predicate, obj = self._normalize(predicate, obj)
                self.triples.append(Triple(subject, predicate, obj))
                if self.peek().kind is TokKind.COMMA:
                    self.advance()
                    continue
                break
            if self.peek().kind is TokKind.SEMICOLON:
                self.advance()
                if self.peek().kind in (TokKind.DOT, TokKind.EOF):
                    break
                continue
            break
        self.expect(TokKind.DOT)

    def _verb(self) -> Iri:
        tok = self.peek()
        if tok.kind is TokKind.WORD and tok.value == "a":
            self.advance()
            return Iri(RDF_TYPE)
        term = self._resource("predicate")
        if not isinstance(term, Iri):
            self.error("predicate must be an IRI", tok)
        return term

    def _resource(self, position: str) -> Term:
        tok = self.advance()
        if tok.kind is TokKind.IRIREF:
            return Iri(tok.value)
        if tok.kind is TokKind.PNAME:
            prefix, local = tok.value
            if prefix == "_":
                return Blank(local)
            ns = self.prefixes.bindings.get(prefix)
            if ns is None:
                self.error(f"unknown prefix: {prefix!r}", tok)
            return Iri(ns + local)
        self.error(f"expected a {position}, got {tok.describe()}", tok)
        raise AssertionError("unreachable")

    def _object(self, predicate: Iri) -> Term:
        tok = self.peek()
        if tok.kind is TokKind.STRING:
            self.advance()
            return self._literal_tail(tok.value)
        if tok.kind is TokKind.NUMBER:
            self.advance()
            dt = XSD_DECIMAL if "." in tok.value else XSD_INTEGER
            return Literal(tok.value, dt)
        return self._resource("object")

    def _literal_tail(self, value: str) -> Literal:
        tok = self.peek()
        if tok.kind is TokKind.LANGTAG:
            self.advance()
            return Literal(value, lang=tok.value)
        if tok.kind is TokKind.CARETS:
            self.advance()
            dtok = self.advance()
            if dtok.kind is TokKind.IRIREF:
                return Literal(value, dtok.value)
            if dtok.kind is TokKind.PNAME:
                prefix, local = dtok.value
                ns = self.prefixes.bindings.get(prefix)
                if ns is None:
                    self.error(f"unknown prefix: {prefix!r}", dtok)
                return Literal(value, ns + local)
            self.error(f"expected datatype IRI, got {dtok.describe()}", dtok)
        return Literal(value)

    def _normalize(self, predicate: Iri, obj: Term) -> tuple[Iri, Term]:
        if predicate == POSSEDE_UNE_COMPETENCE:
            self.warnings.append(
                "possedeUneCompetence normalized to possedeCompetence"
            )
            predicate = POSSEDE_COMPETENCE
        if isinstance(obj, Literal):
            if predicate in _DATE_PREDICATES and "/" in obj.lexical:
                try:
                    iso = parse_dayfirst_date(obj.lexical).isoformat()
                except DateParseError:
                    return predicate, obj
                self.warnings.append(f"date {obj.lexical!r} normalized to {iso}")
                return predicate, Literal(iso, XSD_DATE)
            if predicate in _DURATION_PREDICATES and not obj.lexical.startswith("P"):
                try:
                    iso = parse_french_duration(obj.lexical).iso()
                except DurationParseError:
                    return predicate, obj
                self.warnings.append(f"duration {obj.lexical!r} normalized to {iso}")
                return predicate, Literal(iso, XSD_DURATION)
        return predicate, obj


def parse(text: str) -> ParseResult:
    return _TurtleParser(text).parse()


def parse_document(text: str) -> Graph:
    return parse(text).graph


_CANONICAL_PREFIXES = PrefixMap(dict(DEFAULT_PREFIXES))


def _format_term(term: Term) -> str:
    if isinstance(term, Iri):
        compact = _CANONICAL_PREFIXES.compact(term.value)
        return compact if compact else term.n3()
    if isinstance(term, Literal):
        if term.lang or term.datatype == XSD_STRING:
            return term.n3()
        compact = _CANONICAL_PREFIXES.compact(term.datatype)
        quoted = term.n3().rsplit("^^", 1)[0]
        return f"{quoted}^^{compact}" if compact else term.n3()
    return term.n3()


def serialize_graph(graph: Graph) -> str:
    """Canonical form: fixed sorted prefix block, then one statement per
    line in term order.  Equal graphs serialize to equal bytes."""
    lines = [
        f"@prefix {prefix}: <{ns}> ."
        for prefix, ns in sorted(_CANONICAL_PREFIXES.bindings.items())
    ]
    lines.append("")
    for t in graph:
        lines.append(f"{_format_term(t.subject)} {_format_term(t.predicate)} {_format_term(t.object)} .")
    return "\n".join(lines) + "\n"
