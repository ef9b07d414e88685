"""Fuzzy reaction rules: matching, feasibility, rule selection and firing."""
from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from itertools import permutations, product

from ..degree import ONE, Degree, ZERO, dmin
from ..errors import InfeasibleReaction
from .terms import (Airlock, AirlockPat, App, AppPat, Atom, AtomPat, Membrane,
                    MembranePat, Solution, Var, format_pattern, molecule_degree,
                    pattern_vars)


@dataclass(frozen=True)
class ReactionRule:
    name: str
    lhs: tuple
    rhs: tuple
    feasibility: Degree = ONE

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))
        object.__setattr__(self, "feasibility", Degree(self.feasibility))
        if not self.lhs:
            raise ValueError(f"rule {self.name}: empty left-hand side")
        left: dict = {}
        for p in self.lhs:
            pattern_vars(p, left)
        right: dict = {}
        for p in self.rhs:
            pattern_vars(p, right)
        for name, sort in right.items():
            if name not in left:
                raise ValueError(f"rule {self.name}: ?{name} occurs only on the right")
            if left[name] != sort:
                raise ValueError(f"rule {self.name}: ?{name} changes sort across the arrow")

    def __str__(self):
        lhs = ", ".join(format_pattern(p) for p in self.lhs)
        rhs = ", ".join(format_pattern(p) for p in self.rhs)
        return f"rule {self.name}: {lhs} -> {rhs} @ lambda={self.feasibility}".replace("->  @", "-> @")


@dataclass(frozen=True)
class Match:
    """A substitution plus the occurrences of the solution it consumes.

    ``consumed`` lists the molecules in left-hand-side order; ``positions``
    indexes them into the solution's canonical element list.
    """
    rule: str
    bindings: tuple
    consumed: tuple
    positions: tuple = field(default=())

    @property
    def env(self) -> dict:
        return dict(self.bindings)

    @property
    def degree(self) -> Degree:
        """xi: the min similarity degree of the consumed molecules."""
        return dmin(molecule_degree(m) for m in self.consumed)


# -- matching -----------------------------------------------------------------

def _bind(env: dict, name: str, value) -> dict | None:
    if name in env:
        return env if env[name] == value else None
    out = dict(env)
    out[name] = value
    return out


def _match_term(p, m, env: dict) -> Iterator[dict]:
    match p:
        case Var(name):
            e = _bind(env, name, m)
            if e is not None:
                yield e
        case AtomPat(name, deg):
            if isinstance(m, Atom) and m.name == name and (deg is None or m.degree == deg):
                yield env
        case AppPat(ctor, args):
            if isinstance(m, App) and m.ctor == ctor and len(m.args) == len(args):
                yield from _match_args(args, m.args, env)
        case MembranePat(items, rest):
            if isinstance(m, Membrane):
                yield from _match_solution(items, rest, m.body, env)
        case AirlockPat(head, tail):
            if isinstance(m, Airlock):
                for e in _match_term(head, m.head, env):
                    e = _bind(e, tail, m.body)
                    if e is not None:
                        yield e


def _match_args(pats, mols, env) -> Iterator[dict]:
    if not pats:
        yield env
        return
    for e in _match_term(pats[0], mols[0], env):
        yield from _match_args(pats[1:], mols[1:], e)


def _match_seq(pats, avail: list[list], env) -> Iterator[tuple[dict, list]]:
    """Assign each pattern a distinct occurrence from ``avail`` (a list of
    [molecule, remaining-count] cells in canonical order)."""
    if not pats:
        yield env, []
        return
    for cell in avail:
        if cell[1] == 0:
            continue
        for e in _match_term(pats[0], cell[0], env):
            cell[1] -= 1
            for e2, used in _match_seq(pats[1:], avail, e):
                yield e2, [cell[0]] + used
            cell[1] += 1


def _match_solution(items, rest, body: Solution, env) -> Iterator[dict]:
    avail = [[m, n] for m, n in body.items()]
    for e, used in _match_seq(items, avail, env):
        leftover = body - Solution(used)
        if rest is None:
            if not leftover:
                yield e
        else:
            e2 = _bind(e, rest, leftover)
            if e2 is not None:
                yield e2


def distinct_matches(rule: ReactionRule, s: Solution) -> Iterator[tuple[dict, list]]:
    """(bindings, consumed molecules in lhs order), one per distinct choice of
    molecules; identical copies are not told apart."""
    avail = [[m, n] for m, n in s.items()]
    yield from _match_seq(rule.lhs, avail, {})


def match_rule(rule: ReactionRule, s: Solution) -> list[Match]:
    """Every way the rule's left-hand side can consume occurrences of ``s``.

    Occurrences are the solution's elements in canonical order, so identical
    copies yield separate matches (one per choice of positions).
    """
    start = {}
    pos = 0
    for m, n in s.items():
        start[m] = (pos, n)
        pos += n
    out = []
    for env, consumed in distinct_matches(rule, s):
        bindings = tuple(sorted(env.items(), key=lambda kv: kv[0]))
        slots: dict = {}
        for i, m in enumerate(consumed):
            slots.setdefault(m, []).append(i)
        per_mol = []
        for m, idxs in slots.items():
            first, n = start[m]
            per_mol.append((idxs, list(permutations(range(first, first + n), len(idxs)))))
        for choice in product(*(opts for _, opts in per_mol)):
            positions = [0] * len(consumed)
            for (idxs, _), picked in zip(per_mol, choice):
                for i, p in zip(idxs, picked):
                    positions[i] = p
            out.append(Match(rule.name, bindings, tuple(consumed), tuple(positions)))
    out.sort(key=lambda mt: (mt.positions, repr(mt.bindings)))
    return out


# -- feasibility and selection -------------------------------------------------

def feasible(rule: ReactionRule, m: Match) -> bool:
    """``min(delta(M_1), ..., delta(M_k)) >= lambda``."""
    return m.degree >= rule.feasibility


def _lambda_of(item) -> Degree:
    if isinstance(item, Degree):
        return item
    if isinstance(item, ReactionRule):
        return item.feasibility
    return item[0].feasibility


def really_applicable(rules: Sequence, xi: Degree) -> int | None:
    """1-based position of the really applicable rule, or None.

    ``rules`` holds feasibility degrees, rules, or (rule, match) pairs.  Scans
    in order keeping rules with ``xi >= lambda``; the running maximum is
    updated with ``>=``, so among equal maxima the last one scanned wins.
    """
    best_pos = None
    best = ZERO
    for i, item in enumerate(rules, 1):
        lam = _lambda_of(item)
        if xi >= lam and lam >= best:
            best, best_pos = lam, i
    return best_pos


# -- firing -------------------------------------------------------------------

def instantiate(t, env: dict, default: Degree):
    match t:
        case Var(name):
            return env[name]
        case AtomPat(name, deg):
            return Atom(name, default if deg is None else deg)
        case AppPat(ctor, args):
            return App(ctor, tuple(instantiate(a, env, default) for a in args))
        case MembranePat(items, rest):
            body = Solution(instantiate(a, env, default) for a in items)
            if rest is not None:
                body = body + env[rest]
            return Membrane(body)
        case AirlockPat(head, tail):
            return Airlock(instantiate(head, env, default), env[tail])
    raise TypeError(f"not a template: {t!r}")


def products(rule: ReactionRule, m: Match) -> list:
    """Instantiated right-hand side. Bare literal atoms inherit the min degree
    of the consumed molecules."""
    default = m.degree
    env = m.env
    return [instantiate(t, env, default) for t in rule.rhs]


def apply_reaction(rule: ReactionRule, m: Match, s: Solution) -> Solution:
    if not feasible(rule, m):
        raise InfeasibleReaction(
            f"rule {rule.name} needs degree >= {rule.feasibility}, match has {m.degree}")
    return s - Solution(m.consumed) + Solution(products(rule, m))

