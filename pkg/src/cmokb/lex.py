"""Shared tokenizer for the query language and the Turtle subset.

Tokens carry line/column positions (1-based) so parsers can raise
positioned syntax errors.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum

from .errors import QuerySyntaxError


class TokKind(Enum):
    IRIREF = "iriref"
    PNAME = "pname"         # prefixed name, value = (prefix, local)
    WORD = "word"           # bare word: keywords, "a"
    VAR = "var"             # ?name
    STRING = "string"       # unescaped value
    NUMBER = "number"       # lexical form
    LANGTAG = "langtag"     # @word (also @prefix in Turtle; parser decides)
    CARETS = "carets"       # ^^
    DOT = "."
    SEMICOLON = ";"
    COMMA = ","
    LBRACE = "{"
    RBRACE = "}"
    LPAREN = "("
    RPAREN = ")"
    STAR = "*"
    EOF = "eof"


@dataclass(frozen=True)
class Token:
    kind: TokKind
    value: object
    line: int
    column: int

    def describe(self) -> str:
        if self.kind is TokKind.EOF:
            return "end of input"
        if self.kind is TokKind.PNAME:
            prefix, local = self.value
            return f"{prefix}:{local}"
        return str(self.value)


_PUNCT = {
    ".": TokKind.DOT,
    ";": TokKind.SEMICOLON,
    ",": TokKind.COMMA,
    "{": TokKind.LBRACE,
    "}": TokKind.RBRACE,
    "(": TokKind.LPAREN,
    ")": TokKind.RPAREN,
    "*": TokKind.STAR,
}

_STRING_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


def _is_word_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_word_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_-"


def _is_local_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_.-"


class Lexer:
    def __init__(self, text: str):
        self.text = text
        self._line_starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                self._line_starts.append(i + 1)

    def position(self, offset: int) -> tuple[int, int]:
        line = bisect_right(self._line_starts, offset)
        return line, offset - self._line_starts[line - 1] + 1

    def error(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        line, col = self.position(offset)
        raise QuerySyntaxError(message, line, col, expected)

    def tokens(self) -> list[Token]:
        out = []
        for tok in self.scan():
            out.append(tok)
            if tok.kind is TokKind.EOF:
                break
        return out

    def scan(self):
        """Lazily yield tokens; errors surface only when the bad spot is
        actually reached, letting parsers report unsupported constructs
        by name before stumbling over their innards."""
        text = self.text
        n = len(text)
        i = 0
        out: list[Token] = []

        def emit(kind: TokKind, value, start: int):
            line, col = self.position(start)
            out.append(Token(kind, value, line, col))

        while i < n:
            while out:
                yield out.pop(0)
            ch = text[i]
            if ch in " \t\r\n":
                i += 1
                continue
            if ch == "#":
                while i < n and text[i] != "\n":
                    i += 1
                continue
            start = i
            if ch == "<":
                j = i + 1
                while j < n and text[j] != ">":
                    if text[j] in ' \t\r\n"{}':
                        self.error("whitespace or bad character inside IRI", j)
                    j += 1
                if j >= n:
                    self.error("unterminated IRI", start)
                emit(TokKind.IRIREF, text[i + 1:j], start)
                i = j + 1
                continue
            if ch == '"':
                value, i = self._scan_string(i)
                emit(TokKind.STRING, value, start)
                continue
            if ch == "?":
                j = i + 1
                if j >= n or not _is_word_start(text[j]):
                    self.error("expected variable name after '?'", i)
                k = j
                while k < n and (text[k].isalnum() or text[k] == "_"):
                    k += 1
                emit(TokKind.VAR, text[j:k], start)
                i = k
                continue
            if ch == "@":
                j = i + 1
                k = j
                while k < n and (text[k].isalnum() or text[k] == "-"):
                    k += 1
                if k == j:
                    self.error("expected tag after '@'", i)
                emit(TokKind.LANGTAG, text[j:k], start)
                i = k
                continue
            if ch == "^":
                if i + 1 < n and text[i + 1] == "^":
                    emit(TokKind.CARETS, "^^", start)
                    i += 2
                    continue
                self.error("expected '^^'", i)
            if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
                j = i + 1
                while j < n and text[j].isdigit():
                    j += 1
                if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                    j += 1
                    while j < n and text[j].isdigit():
                        j += 1
                emit(TokKind.NUMBER, text[i:j], start)
                i = j
                continue
            if ch in _PUNCT:
                emit(_PUNCT[ch], ch, start)
                i += 1
                continue
            if _is_word_start(ch) or ch == ":":
                j = i
                while j < n and _is_word_char(text[j]):
                    j += 1
                if j < n and text[j] == ":":
                    prefix = text[i:j]
                    k = j + 1
                    while k < n and _is_local_char(text[k]):
                        k += 1
                    # A trailing dot belongs to the statement, not the name.
                    while k > j + 1 and text[k - 1] == ".":
                        k -= 1
                    emit(TokKind.PNAME, (prefix, text[j + 1:k]), start)
                    i = k
                    continue
                emit(TokKind.WORD, text[i:j], start)
                i = j
                continue
            self.error(f"unexpected character {ch!r}", i)
        while out:
            yield out.pop(0)
        line, col = self.position(n)
        while True:
            yield Token(TokKind.EOF, None, line, col)

    def _scan_string(self, start: int) -> tuple[str, int]:
        text = self.text
        n = len(text)
        i = start + 1
        parts: list[str] = []
        while i < n:
            ch = text[i]
            if ch == '"':
                return "".join(parts), i + 1
            if ch == "\n":
                self.error("unterminated string literal", start)
            if ch == "\\":
                if i + 1 >= n:
                    self.error("unterminated escape", i)
                esc = text[i + 1]
                if esc in _STRING_ESCAPES:
                    parts.append(_STRING_ESCAPES[esc])
                    i += 2
                    continue
                if esc == "u" and i + 5 < n:
                    try:
                        parts.append(chr(int(text[i + 2:i + 6], 16)))
                    except ValueError:
                        self.error("bad \\u escape", i)
                    i += 6
                    continue
                self.error(f"unknown escape \\{esc}", i)
            parts.append(ch)
            i += 1
        self.error("unterminated string literal", start)
        raise AssertionError("unreachable")


class TokenStream:
    """Random-access view over lazily produced tokens."""

    def __init__(self, text: str):
        self._gen = Lexer(text).scan()
        self._buf: list[Token] = []

    def get(self, index: int) -> Token:
        while len(self._buf) <= index:
            self._buf.append(next(self._gen))
        return self._buf[index]


def tokenize(text: str) -> TokenStream:
    return TokenStream(text)
