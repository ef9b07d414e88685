"""Machine files: parser and printer.

    option strict-context = true|false
    option strategy = max|random
    rule <name>: <pattern>, ... -> <template>, ... @ lambda=<degree>
    init { <term>@<degree>, <term> * <count>, ... }

Terms are ``ident``, ``ident(t, ...)``, ``[ t, ... ]`` and ``t <| [ ... ]``.
Rules additionally allow ``?x``, ``[ p, ... | ?rest ]`` and ``p <| ?S``.
"""
from __future__ import annotations

import re
from collections.abc import Callable
from dataclasses import dataclass

from ..degree import Degree
from ..errors import ParseError
from ..lexer import IDENT, NUMBER, TokenStream, tokenize
from .machine import MachineDef, MachineOptions, TraceStep
from .rules import ReactionRule
from .terms import (Airlock, AirlockPat, App, AppPat, Atom, AtomPat, Membrane,
                    MembranePat, Solution, Var)

_SPEC = [
    ("number", NUMBER),
    ("ident", IDENT),
    ("op", r"->|<\||[{}\[\](),*@?|:=]"),
]


@dataclass(frozen=True)
class MachineFile:
    machine: MachineDef
    init: Solution


def _stream(text: str) -> TokenStream:
    return TokenStream(tokenize(text, _SPEC))


# -- terms --------------------------------------------------------------------

def _term(ts: TokenStream, pattern: bool):
    t = _primary(ts, pattern)
    while ts.at("<|"):
        ts.next()
        if pattern:
            if not ts.at("?"):
                raise ts.error("airlock pattern tail must be a ?variable")
            t = AirlockPat(t, _var(ts))
        else:
            if not ts.at("["):
                raise ts.error("expected '[' after '<|'")
            t = Airlock(t, _membrane_body(ts))
    return t


def _var(ts: TokenStream) -> str:
    ts.expect("?")
    return ts.expect_kind("ident", "a variable name").text


def _primary(ts: TokenStream, pattern: bool):
    if ts.at("?"):
        if not pattern:
            raise ts.error("variables are only allowed in rules")
        return Var(_var(ts))
    if ts.at("["):
        if pattern:
            return _membrane_pattern(ts)
        return Membrane(_membrane_body(ts))
    name = ts.expect_kind("ident", "a term").text
    if ts.at("("):
        ts.next()
        args = []
        if not ts.at(")"):
            args.append(_term(ts, pattern))
            while ts.at(","):
                ts.next()
                args.append(_term(ts, pattern))
        ts.expect(")")
        return (AppPat if pattern else App)(name, tuple(args))
    deg = None
    if ts.at("@") and ts.at_kind("number", 1):
        ts.next()
        deg = ts.degree()
    if pattern:
        return AtomPat(name, deg)
    return Atom(name) if deg is None else Atom(name, deg)


def _items(ts: TokenStream, close: str) -> list:
    """``t [* n], ...`` up to (not including) ``close``."""
    out = []
    if ts.at(close):
        return out
    while True:
        t = _term(ts, False)
        n = 1
        if ts.at("*"):
            ts.next()
            tok = ts.expect_kind("number", "a count")
            if not tok.text.isdigit() or int(tok.text) < 1:
                raise ParseError(f"count must be a positive integer, got {tok.text}", tok.line, tok.col)
            n = int(tok.text)
        out.append((t, n))
        if not ts.at(","):
            return out
        ts.next()


def _membrane_body(ts: TokenStream) -> Solution:
    ts.expect("[")
    body = Solution.from_counts(_items(ts, "]"))
    ts.expect("]")
    return body


def _membrane_pattern(ts: TokenStream) -> MembranePat:
    ts.expect("[")
    items = []
    rest = None
    if not ts.at("]") and not ts.at("|"):
        items.append(_term(ts, True))
        while ts.at(","):
            ts.next()
            items.append(_term(ts, True))
    if ts.at("|"):
        ts.next()
        rest = _var(ts)
    ts.expect("]")
    return MembranePat(tuple(items), rest)


def _solution(ts: TokenStream) -> Solution:
    ts.expect("{")
    items = _items(ts, "}")
    ts.expect("}")
    return Solution.from_counts(items)


def _eof(ts: TokenStream):
    if not ts.at_kind("eof"):
        raise ts.error("unexpected trailing input")


def parse_solution(text: str) -> Solution:
    ts = _stream(text)
    s = _solution(ts)
    _eof(ts)
    return s


def parse_molecule(text: str):
    ts = _stream(text)
    m = _term(ts, False)
    _eof(ts)
    return m


def parse_pattern(text: str):
    ts = _stream(text)
    p = _term(ts, True)
    _eof(ts)
    return p


def parse_molecule_list(text: str) -> list:
    ts = _stream(text)
    out = []
    if not ts.at_kind("eof"):
        out.append(_term(ts, False))
        while ts.at(","):
            ts.next()
            out.append(_term(ts, False))
    _eof(ts)
    return out


# -- machine files --------------------------------------------------------------

def _rule(ts: TokenStream) -> ReactionRule:
    head = ts.expect("rule")
    name = ts.expect_kind("ident", "a rule name").text
    ts.expect(":")
    lhs = [_term(ts, True)]
    while ts.at(","):
        ts.next()
        lhs.append(_term(ts, True))
    ts.expect("->")
    rhs = []
    if not ts.at("@"):
        rhs.append(_term(ts, True))
        while ts.at(","):
            ts.next()
            rhs.append(_term(ts, True))
    ts.expect("@")
    ts.expect("lambda")
    ts.expect("=")
    lam = ts.degree()
    try:
        return ReactionRule(name, tuple(lhs), tuple(rhs), lam)
    except ValueError as e:
        raise ParseError(str(e), head.line, head.col) from None


def _option(ts: TokenStream, opts: dict):
    ts.expect("option")
    key = ts.expect_kind("ident", "an option name")
    ts.expect("=")
    val = ts.expect_kind("ident", "an option value")
    if key.text == "strict-context":
        if val.text not in ("true", "false"):
            raise ParseError("strict-context must be true or false", val.line, val.col)
        opts["strict_context"] = val.text == "true"
    elif key.text == "strategy":
        if val.text not in ("max", "random"):
            raise ParseError("strategy must be max or random", val.line, val.col)
        opts["strategy"] = val.text
    else:
        raise ParseError(f"unknown option {key.text!r}", key.line, key.col)


def parse_machine(text: str) -> MachineFile:
    ts = _stream(text)
    rules: list[ReactionRule] = []
    opts: dict = {}
    init = None
    while not ts.at_kind("eof"):
        if ts.at("option"):
            _option(ts, opts)
        elif ts.at("rule"):
            tok = ts.peek()
            r = _rule(ts)
            if any(x.name == r.name for x in rules):
                raise ParseError(f"duplicate rule name {r.name!r}", tok.line, tok.col)
            rules.append(r)
        elif ts.at("init"):
            tok = ts.next()
            if init is not None:
                raise ParseError("more than one init block", tok.line, tok.col)
            init = _solution(ts)
        else:
            raise ts.error("expected 'option', 'rule' or 'init'")
    return MachineFile(MachineDef(tuple(rules), MachineOptions(**opts)),
                       init if init is not None else Solution())


def format_machine(mf: MachineFile) -> str:
    opts = mf.machine.options
    lines = [f"option strict-context = {'true' if opts.strict_context else 'false'}",
             f"option strategy = {opts.strategy}"]
    lines += [str(r) for r in mf.machine.rules]
    lines.append(f"init {mf.init}")
    return "\n".join(lines) + "\n"


# -- traces -------------------------------------------------------------------

_TRACE = re.compile(r"step (\d+): (\S+) (\S+) lambda=(\S+) consumed=\[(.*)\] produced=\[(.*)\]")


def parse_trace_line(line: str, molecules: Callable[[str], list] = parse_molecule_list) -> TraceStep:
    """Inverse of the trace printer; the digest is not part of the text."""
    m = _TRACE.fullmatch(line.strip())
    if m is None:
        raise ParseError(f"not a trace line: {line.strip()!r}")
    idx, kind, rule, lam, consumed, produced = m.groups()
    return TraceStep(int(idx), kind, rule, Degree(lam),
                     tuple(molecules(consumed)), tuple(molecules(produced)), "")
