"""Tokenizer for spec (``.prs``) and model (``.pm``) files."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from ..errors import LexError

KEYWORDS = frozenset(
    """on at facing completely ahead of by from with in aligned beyond toward
    towards left right behind above below top bottom front back relative to
    class V3D along""".split()
)

PUNCT = {
    "(": "LPAREN",
    ")": "RPAREN",
    ",": "COMMA",
    "+": "PLUS",
    "-": "MINUS",
    "=": "EQUALS",
    ":": "COLON",
}

_NUMBER = re.compile(r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Token:
    kind: str  # KW, IDENT, NUMBER, STRING, NEWLINE, EOF or a PUNCT name
    value: str
    line: int
    col: int

    def __repr__(self):
        return f"{self.kind}({self.value!r})@{self.line}:{self.col}"


def tokenize(text: str) -> list[Token]:
    return list(_tokens(text))


def _tokens(text: str) -> Iterator[Token]:
    depth = 0
    line, line_start = 1, 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        col = i - line_start + 1
        if ch == "\n":
            if depth == 0:
                yield Token("NEWLINE", "\n", line, col)
            i += 1
            line += 1
            line_start = i
        elif ch in " \t\r\f":
            i += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "'\"":
            end = i + 1
            while end < n and text[end] != ch and text[end] != "\n":
                end += 1
            if end >= n or text[end] != ch:
                raise LexError("unterminated string literal", line, col)
            yield Token("STRING", text[i + 1:end], line, col)
            i = end + 1
        elif ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            m = _NUMBER.match(text, i)
            yield Token("NUMBER", m.group(), line, col)
            i = m.end()
        elif ch.isalpha() or ch == "_":
            m = _IDENT.match(text, i)
            word = m.group()
            yield Token("KW" if word in KEYWORDS else "IDENT", word, line, col)
            i = m.end()
        elif ch in PUNCT:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth = max(depth - 1, 0)
            yield Token(PUNCT[ch], ch, line, col)
            i += 1
        else:
            raise LexError(f"illegal character {ch!r}", line, col)
    yield Token("EOF", "", line, i - line_start + 1)
