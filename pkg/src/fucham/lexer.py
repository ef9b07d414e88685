"""A small regex tokenizer shared by the text formats."""
from __future__ import annotations

import re
from typing import NamedTuple

from .degree import Degree
from .errors import ParseError

IDENT = r"[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_']+)*"
NUMBER = r"\d+(?:\.\d+)?"


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, spec: list[tuple[str, str]]) -> list[Token]:
    """Tokens of ``text``; ``#`` comments and whitespace are dropped.

    ``spec`` is an ordered list of (kind, regex); punctuation uses kind ``"op"``.
    """
    master = re.compile("|".join(f"(?P<{k}>{rx})" for k, rx in
                                 [("skip", r"[ \t\r]+|#[^\n]*"), ("nl", r"\n"), *spec]))
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = master.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind != "skip":
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind in ("op", "ident") and t.text == text

    def at_kind(self, kind: str, k: int = 0) -> bool:
        return self.peek(k).kind == kind

    def next(self) -> Token:
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{msg}, found {found}", tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.next()

    def expect_kind(self, kind: str, what: str | None = None) -> Token:
        if not self.at_kind(kind):
            raise self.error(f"expected {what or kind}")
        return self.next()

    def degree(self) -> Degree:
        tok = self.expect_kind("number", "a degree")
        try:
            return Degree(tok.text)
        except ValueError as e:
            raise ParseError(str(e), tok.line, tok.col) from None
