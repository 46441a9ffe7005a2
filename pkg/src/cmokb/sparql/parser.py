"""Recursive-descent parser for the SELECT query subset.

Grammar:

    query     := prefix* "SELECT" (var+ | "*") "WHERE" group
    prefix    := "PREFIX" PNAME(empty local) IRIREF
    group     := "{" (triples | optional | notexists)* "}"
    triples   := term verb objectlist (";" verb objectlist)* "."?
    optional  := "OPTIONAL" group
    notexists := "FILTER" "NOT" "EXISTS" group

Prefixed names are expanded eagerly so unknown prefixes fail with a
position.  Unsupported SPARQL keywords produce an error naming the
feature rather than a generic parse failure.
"""

from __future__ import annotations

from ..errors import QuerySyntaxError, UnknownPrefixError
from ..lex import Token, TokKind, tokenize
from ..model import Iri, Literal, PrefixMap
from ..namespaces import RDF_TYPE, XSD_DECIMAL, XSD_INTEGER
from .ast import (
    FilterNotExists,
    GroupElement,
    GroupPattern,
    OptionalGroup,
    PatternTerm,
    SelectQuery,
    TriplePattern,
    Variable,
)

_UNSUPPORTED = {
    "UNION", "BIND", "ORDER", "LIMIT", "OFFSET", "GROUP", "HAVING", "VALUES",
    "MINUS", "ASK", "CONSTRUCT", "DESCRIBE", "DISTINCT", "REDUCED", "GRAPH",
    "SERVICE", "INSERT", "DELETE",
}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.prefixes = PrefixMap()

    def peek(self) -> Token:
        return self.tokens.get(self.pos)

    def advance(self) -> Token:
        tok = self.tokens.get(self.pos)
        self.pos += 1
        return tok

    def prev(self) -> Token:
        return self.tokens.get(self.pos - 1)

    def error(self, message: str, tok: Token, expected: tuple[str, ...] = ()):
        raise QuerySyntaxError(message, tok.line, tok.column, expected)

    def expect_word(self, word: str) -> Token:
        tok = self.advance()
        if tok.kind is not TokKind.WORD or tok.value.upper() != word:
            self.error(f"expected {word}, got {tok.describe()}", tok, (word,))
        return tok

    def expect(self, kind: TokKind) -> Token:
        tok = self.advance()
        if tok.kind is not kind:
            self.error(f"expected {kind.value}, got {tok.describe()}", tok, (kind.value,))
        return tok

    def at_word(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind is TokKind.WORD and tok.value.upper() == word

    def check_unsupported(self, tok: Token):
        if tok.kind is TokKind.WORD and tok.value.upper() in _UNSUPPORTED:
            self.error(f"unsupported feature: {tok.value.upper()}", tok)

    # ------------------------------------------------------------------

    def parse(self) -> SelectQuery:
        while self.at_word("PREFIX"):
            self.advance()
            tok = self.expect(TokKind.PNAME)
            prefix, local = tok.value
            if local:
                self.error("expected prefix declaration ending in ':'", tok)
            iri = self.expect(TokKind.IRIREF)
            self.prefixes.bind(prefix, iri.value)
        self.check_unsupported(self.peek())
        self.expect_word("SELECT")
        self.check_unsupported(self.peek())
        projection = self._projection()
        self.expect_word("WHERE")
        where = self._group()
        tail = self.peek()
        if tail.kind is not TokKind.EOF:
            self.check_unsupported(tail)
            self.error(f"unexpected {tail.describe()} after query", tail)
        warnings = []
        if projection is not None:
            known = where.all_variables()
            for name in projection:
                if name not in known:
                    warnings.append(f"projected variable ?{name} never occurs in WHERE")
        return SelectQuery(self.prefixes, projection, where, tuple(warnings))

    def _projection(self) -> tuple[str, ...] | None:
        if self.peek().kind is TokKind.STAR:
            self.advance()
            return None
        names: list[str] = []
        while self.peek().kind is TokKind.VAR:
            names.append(self.advance().value)
        if not names:
            self.error(f"expected variables or '*', got {self.peek().describe()}", self.peek())
        return tuple(names)

    def _group(self) -> GroupPattern:
        self.expect(TokKind.LBRACE)
        elements: list[GroupElement] = []
        while True:
            tok = self.peek()
            if tok.kind is TokKind.RBRACE:
                self.advance()
                return GroupPattern(tuple(elements))
            if tok.kind is TokKind.EOF:
                self.error("unterminated group: expected '}'", tok, ("}",))
            if self.at_word("OPTIONAL"):
                self.advance()
                elements.append(OptionalGroup(self._group()))
                continue
            if self.at_word("FILTER"):
                self.advance()
                if not self.at_word("NOT"):
                    self.error("unsupported FILTER expression (only NOT EXISTS)", self.peek())
                self.advance()
                self.expect_word("EXISTS")
                elements.append(FilterNotExists(self._group()))
                continue
            if tok.kind is TokKind.LBRACE:
                self.error("unsupported feature: bare nested groups (UNION)", tok)
            self.check_unsupported(tok)
            elements.extend(self._triples_block())
            if self.peek().kind is TokKind.DOT:
                self.advance()

    def _triples_block(self) -> list[TriplePattern]:
        subject = self._term(position="subject")
        if isinstance(subject, Literal):
            self.error("literal cannot be a subject", self.prev())
        patterns: list[TriplePattern] = []
        while True:
            predicate = self._verb()
            obj = self._term(position="object")
            patterns.append(TriplePattern(subject, predicate, obj))
            if self.peek().kind is TokKind.SEMICOLON:
                self.advance()
                # a dangling ';' before '.' or '}' is tolerated
                if self.peek().kind in (TokKind.DOT, TokKind.RBRACE):
                    break
                continue
            break
        return patterns

    def _verb(self) -> PatternTerm:
        tok = self.peek()
        if tok.kind is TokKind.WORD and tok.value == "a":
            self.advance()
            return Iri(RDF_TYPE)
        term = self._term(position="predicate")
        if isinstance(term, Literal):
            self.error("literal cannot be a predicate", tok)
        return term

    def _term(self, position: str) -> PatternTerm:
        tok = self.advance()
        if tok.kind is TokKind.VAR:
            return Variable(tok.value)
        if tok.kind is TokKind.IRIREF:
            return Iri(tok.value)
        if tok.kind is TokKind.PNAME:
            prefix, local = tok.value
            if prefix == "_":
                self.error("blank nodes are not supported in queries", tok)
            try:
                return self.prefixes.expand(f"{prefix}:{local}")
            except UnknownPrefixError as exc:
                raise QuerySyntaxError(str(exc), tok.line, tok.column) from exc
        if tok.kind is TokKind.STRING:
            return self._literal_tail(tok.value)
        if tok.kind is TokKind.NUMBER:
            dt = XSD_DECIMAL if "." in tok.value else XSD_INTEGER
            return Literal(tok.value, dt)
        self.check_unsupported(tok)
        self.error(f"expected a {position} term, got {tok.describe()}", tok)
        raise AssertionError("unreachable")

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
                try:
                    return Literal(value, self.prefixes.expand(f"{prefix}:{local}").value)
                except UnknownPrefixError as exc:
                    raise QuerySyntaxError(str(exc), dtok.line, dtok.column) from exc
            self.error(f"expected datatype IRI, got {dtok.describe()}", dtok)
        return Literal(value)


def parse_query(text: str) -> SelectQuery:
    return _Parser(text).parse()
