"""Structural congruence at a threshold, decided by normal forms.

The normal form flattens ``|``, drops 0 components and sorts them, sorts
summands, renames binders to positional labels (degrees kept), and picks the
least rendering over the allowed reorderings of each ``new`` chain: two
adjacent binders may swap only when both have degree >= lambda.
"""
from __future__ import annotations

from itertools import permutations, product

from ..degree import Degree
from .process import Input, Name, New, Output, Par, Repl, Sum, par_components


def _label(depth: int, like: Name) -> Name:
    return Name(f"%{depth}", like.degree)


def _nf(p, lam: Degree, env: dict, depth: int) -> str:
    match p:
        case Par():
            parts = sorted(s for s in (_nf(q, lam, env, depth) for q in par_components(p)) if s != "0")
            if not parts:
                return "0"
            return parts[0] if len(parts) == 1 else "(" + " | ".join(parts) + ")"
        case Sum(()):
            return "0"
        case Sum(branches):
            parts = sorted(_branch(pre, cont, lam, env, depth) for pre, cont in branches)
            return parts[0] if len(parts) == 1 else "(" + " + ".join(parts) + ")"
        case New():
            return _new_chain(p, lam, env, depth)
        case Repl(body):
            return "!{" + _nf(body, lam, env, depth) + "}"
    raise TypeError(f"not a process: {p!r}")


def _branch(pre, cont, lam, env, depth) -> str:
    match pre:
        case Input(c, b):
            lab = _label(depth, b)
            return f"{env.get(c, c)}({lab}).{_nf(cont, lam, {**env, b: lab}, depth + 1)}"
        case Output(c, z):
            return f"{env.get(c, c)}<{env.get(z, z)}>.{_nf(cont, lam, env, depth)}"
    return f"tau.{_nf(cont, lam, env, depth)}"


def _new_chain(p, lam, env, depth) -> str:
    binders = []
    while isinstance(p, New):
        binders.append(p.name)
        p = p.body
    # blocks: a low binder stays put, a run of high binders may be permuted
    blocks: list[list[Name]] = []
    for x in binders:
        if x.degree >= lam and blocks and blocks[-1][0].degree >= lam:
            blocks[-1].append(x)
        else:
            blocks.append([x])
    best = None
    for choice in product(*(sorted(set(permutations(b))) for b in blocks)):
        order = [x for blk in choice for x in blk]
        env2 = dict(env)
        labels = []
        for i, x in enumerate(order):
            env2[x] = _label(depth + i, x)
            labels.append(env2[x])
        text = " ".join(f"new {lab}" for lab in labels) + " {" + _nf(p, lam, env2, depth + len(order)) + "}"
        if best is None or text < best:
            best = text
    return best


def normal_form(p, lam=Degree(0)) -> str:
    return _nf(p, Degree(lam), {}, 0)


def struct_congruent(p, q, lam) -> bool:
    lam = Degree(lam)
    return normal_form(p, lam) == normal_form(q, lam)
