"""Surface syntax of the fuzzy pi-calculus.

    P ::= 0 | prefix . P | P | P | P + P | new name P | ! P | ( P )
    prefix ::= name ( name ) | name < name > | tau
    name ::= identifier [ @ degree ]

``|`` binds loosest, then ``+``, then prefixing; ``new`` and ``!`` extend as
far right as possible.  Summands must be guarded (prefixed or 0).
"""
from __future__ import annotations

from ..errors import ParseError
from ..lexer import IDENT, NUMBER, TokenStream, tokenize
from .process import NIL, TAU, Input, Name, New, Output, Par, Repl, Sum

_SPEC = [
    ("number", NUMBER),
    ("ident", IDENT),
    ("op", r"[()<>.|+!@]"),
]
KEYWORDS = {"new", "tau"}


def _name(ts: TokenStream) -> Name:
    tok = ts.expect_kind("ident", "a name")
    if tok.text in KEYWORDS:
        raise ts.error(f"{tok.text!r} is a keyword, not a name", tok)
    if ts.at("@"):
        ts.next()
        return Name(tok.text, ts.degree())
    return Name(tok.text)


def _par(ts: TokenStream):
    p = _sum(ts)
    while ts.at("|"):
        ts.next()
        p = Par(p, _sum(ts))
    return p


def _sum(ts: TokenStream):
    first = ts.peek()
    p = _seq(ts)
    if not ts.at("+"):
        return p
    parts = [(first, p)]
    while ts.at("+"):
        ts.next()
        tok = ts.peek()
        parts.append((tok, _seq(ts)))
    branches = []
    for tok, q in parts:
        if not isinstance(q, Sum):
            raise ParseError("summands must be guarded (prefix or 0)", tok.line, tok.col)
        branches.extend(q.branches)
    return Sum(tuple(branches))


def _seq(ts: TokenStream):
    tok = ts.peek()
    if tok.kind == "number":
        if tok.text != "0":
            raise ts.error("expected a process")
        ts.next()
        return NIL
    if ts.at("new"):
        ts.next()
        x = _name(ts)
        return New(x, _par(ts))
    if ts.at("!"):
        ts.next()
        return Repl(_par(ts))
    if ts.at("("):
        ts.next()
        p = _par(ts)
        ts.expect(")")
        return p
    if ts.at("tau"):
        ts.next()
        pre = TAU
    elif tok.kind == "ident":
        ch = _name(ts)
        if ts.at("("):
            ts.next()
            b = _name(ts)
            ts.expect(")")
            pre = Input(ch, b)
        elif ts.at("<"):
            ts.next()
            z = _name(ts)
            ts.expect(">")
            pre = Output(ch, z)
        else:
            raise ts.error("expected '(' or '<' after a channel name")
    else:
        raise ts.error("expected a process")
    ts.expect(".")
    return Sum(((pre, _seq(ts)),))


def parse(text: str):
    ts = TokenStream(tokenize(text, _SPEC))
    p = _par(ts)
    if not ts.at_kind("eof"):
        raise ts.error("unexpected trailing input")
    return p


# -- printing -------------------------------------------------------------------
# ctx is the grammar level the text must parse back at ("par" > "sum" > "seq");
# tail says nothing follows, so a bare new/! cannot swallow a neighbour.

def _pp(p, ctx: str, tail: bool) -> str:
    match p:
        case Par(l, r):
            wrap = ctx != "par"
            text = f"{_pp(l, 'par', False)} | {_pp(r, 'sum', tail or wrap)}"
            return f"({text})" if wrap else text
        case Sum(()):
            return "0"
        case Sum(branches):
            wrap = len(branches) > 1 and ctx == "seq"
            last = len(branches) - 1
            inner_tail = tail or wrap
            parts = [f"{pre}.{_pp(cont, 'seq', inner_tail and i == last)}"
                     for i, (pre, cont) in enumerate(branches)]
            text = " + ".join(parts)
            return f"({text})" if wrap else text
        case New(x, body):
            text = f"new {x} {_pp(body, 'par', True)}"
            return text if tail else f"({text})"
        case Repl(body):
            text = f"!{_pp(body, 'par', True)}"
            return text if tail else f"({text})"
    raise TypeError(f"not a process: {p!r}")


def pretty(p) -> str:
    return _pp(p, "par", True)
