"""Abstract syntax of the fuzzy pi-calculus, free names and substitution.

Names are (identifier, degree) pairs and compare on both components, so
``x@0.9`` and ``x@0.8`` are different channels.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..degree import ONE, Degree


@dataclass(frozen=True, order=True)
class Name:
    ident: str
    degree: Degree = ONE

    def __str__(self):
        return self.ident if self.degree == ONE else f"{self.ident}@{self.degree}"


@dataclass(frozen=True)
class Input:
    channel: Name
    bound: Name

    def __str__(self):
        return f"{self.channel}({self.bound})"


@dataclass(frozen=True)
class Output:
    channel: Name
    payload: Name

    def __str__(self):
        return f"{self.channel}<{self.payload}>"


@dataclass(frozen=True)
class TauPrefix:
    def __str__(self):
        return "tau"


TAU = TauPrefix()


@dataclass(frozen=True)
class Sum:
    """Guarded choice; no branches is the inert process 0."""
    branches: tuple = ()


@dataclass(frozen=True)
class Par:
    left: object
    right: object


@dataclass(frozen=True)
class New:
    name: Name
    body: object


@dataclass(frozen=True)
class Repl:
    body: object


NIL = Sum(())

PROCESS_TYPES = (Sum, Par, New, Repl)


def prefix_names(pre) -> tuple:
    match pre:
        case Input(c, b):
            return (c, b)
        case Output(c, z):
            return (c, z)
    return ()


def free_names(p) -> frozenset:
    match p:
        case Sum(branches):
            out = set()
            for pre, cont in branches:
                fn = free_names(cont)
                match pre:
                    case Input(c, b):
                        out |= (fn - {b}) | {c}
                    case Output(c, z):
                        out |= fn | {c, z}
                    case _:
                        out |= fn
            return frozenset(out)
        case Par(l, r):
            return free_names(l) | free_names(r)
        case New(x, body):
            return free_names(body) - {x}
        case Repl(body):
            return free_names(body)
    raise TypeError(f"not a process: {p!r}")


def all_names(p) -> set:
    """Every name occurrence, free or binding."""
    match p:
        case Sum(branches):
            out = set()
            for pre, cont in branches:
                out.update(prefix_names(pre))
                out |= all_names(cont)
            return out
        case Par(l, r):
            return all_names(l) | all_names(r)
        case New(x, body):
            return {x} | all_names(body)
        case Repl(body):
            return all_names(body)
    raise TypeError(f"not a process: {p!r}")


def fresh_name(x: Name, avoid) -> Name:
    """``x`` primed until its identifier is unused; the degree is kept."""
    used = {n.ident for n in avoid}
    ident = x.ident + "'"
    while ident in used:
        ident += "'"
    return Name(ident, x.degree)


def _rename(n: Name, z: Name, y: Name) -> Name:
    return z if n == y else n


def _under_binder(b: Name, cont, z: Name, y: Name):
    """Substitute under binder ``b``; returns (binder, continuation)."""
    if b == y or y not in free_names(cont):
        return b, cont
    if b == z:
        b2 = fresh_name(b, all_names(cont) | {z, y})
        cont = substitute(cont, b2, b)
        b = b2
    return b, substitute(cont, z, y)


def substitute(p, z: Name, y: Name):
    """``p[z/y]``: replace free occurrences of ``y`` by ``z``, avoiding capture."""
    match p:
        case Sum(branches):
            out = []
            for pre, cont in branches:
                match pre:
                    case Input(c, b):
                        b, cont = _under_binder(b, cont, z, y)
                        out.append((Input(_rename(c, z, y), b), cont))
                    case Output(c, w):
                        out.append((Output(_rename(c, z, y), _rename(w, z, y)), substitute(cont, z, y)))
                    case _:
                        out.append((pre, substitute(cont, z, y)))
            return Sum(tuple(out))
        case Par(l, r):
            return Par(substitute(l, z, y), substitute(r, z, y))
        case New(x, body):
            x, body = _under_binder(x, body, z, y)
            return New(x, body)
        case Repl(body):
            return Repl(substitute(body, z, y))
    raise TypeError(f"not a process: {p!r}")


def process_degree(p) -> Degree:
    """Min degree over every name in the term; 1 when it has none."""
    return min((n.degree for n in all_names(p)), default=ONE)


def par_components(p) -> list:
    """Flatten nested parallel composition."""
    if isinstance(p, Par):
        return par_components(p.left) + par_components(p.right)
    return [p]


def par_of(parts) -> object:
    parts = list(parts)
    if not parts:
        return NIL
    out = parts[0]
    for q in parts[1:]:
        out = Par(out, q)
    return out
