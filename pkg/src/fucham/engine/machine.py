"""Step/run executor for fuzzy chemical abstract machines.

Candidate moves at one solution level, in enumeration order:

* reactions of every rule (declaration order).  A match consuming the whole
  level is a plain ``reaction``; otherwise it is a ``chemical-context`` move
  and, under strict context, every untouched molecule must have degree >= lambda;
* reactions inside membranes and airlock bodies (``membrane``), admitted when
  ``lambda <= min(degree of the inner solution, degree of the context)``;
* only when no reaction exists anywhere in the solution: ``airlock-in`` /
  ``airlock-out`` moves, at any level, that would make a reaction available
  at that level.

Selection under ``max`` takes the largest lambda, last tie wins;
under ``random`` a seeded uniform pick among the largest-lambda moves.
"""
from __future__ import annotations

import hashlib
import random
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from ..degree import ONE, Degree, dmin
from .rules import ReactionRule, distinct_matches, instantiate, really_applicable
from .terms import Airlock, App, Membrane, Solution, canon, molecule_degree

STRATEGIES = ("max", "random")


@dataclass(frozen=True)
class MachineOptions:
    strict_context: bool = True
    strategy: str = "max"

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass(frozen=True)
class MachineDef:
    rules: tuple
    options: MachineOptions = field(default_factory=MachineOptions)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        names = [r.name for r in self.rules]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise ValueError(f"duplicate rule names: {', '.join(sorted(dup))}")

    def rule(self, name: str) -> ReactionRule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)


@dataclass(frozen=True)
class Move:
    kind: str
    rule: str
    lam: Degree
    consumed: tuple
    produced: tuple
    witness: tuple = ()

    def apply(self, s: Solution) -> Solution:
        return s - Solution(self.consumed) + Solution(self.produced)

    def key(self):
        return (self.kind, self.rule, self.lam.units,
                tuple(sorted(map(canon, self.consumed))), tuple(sorted(map(canon, self.produced))))


@dataclass(frozen=True)
class TraceStep:
    index: int
    kind: str
    rule: str
    lam: Degree
    consumed: tuple
    produced: tuple
    digest: str
    witness: tuple = ()

    def __str__(self):
        return format_trace_step(self)


def digest(s: Solution) -> str:
    return hashlib.sha256(str(s).encode()).hexdigest()[:16]


def format_trace_step(t: TraceStep) -> str:
    consumed = ", ".join(canon(m) for m in t.consumed)
    produced = ", ".join(canon(m) for m in t.produced)
    return (f"step {t.index}: {t.kind} {t.rule} lambda={t.lam} "
            f"consumed=[{consumed}] produced=[{produced}]")


# -- move enumeration ---------------------------------------------------------

def _holes(m) -> Iterator[tuple[Solution, Degree, object]]:
    """(inner solution, degree of the surrounding context C(), rebuild)."""
    match m:
        case Membrane(body):
            yield body, ONE, Membrane
        case Airlock(head, body):
            yield body, molecule_degree(head), lambda b: Airlock(head, b)
            for inner, d, rb in _holes(head):
                yield inner, min(d, body.degree), lambda b, rb=rb: Airlock(rb(b), body)
        case App(ctor, args):
            for i, a in enumerate(args):
                others = dmin(molecule_degree(x) for j, x in enumerate(args) if j != i)
                for inner, d, rb in _holes(a):
                    yield inner, min(d, others), (
                        lambda b, i=i, rb=rb: App(ctor, args[:i] + (rb(b),) + args[i + 1:]))


def _moves(mdef: MachineDef, s: Solution, admin: bool) -> list[Move]:
    """Reactions at this level and inside holes; airlock moves too when ``admin``."""
    strict = mdef.options.strict_context
    moves = []
    for rule in mdef.rules:
        lam = rule.feasibility
        for env, consumed in distinct_matches(rule, s):
            xi = dmin(molecule_degree(m) for m in consumed)
            if xi < lam:
                continue
            rest = s - Solution(consumed)
            if rest and strict and rest.degree < lam:
                continue
            produced = tuple(instantiate(t, env, xi) for t in rule.rhs)
            moves.append(Move("chemical-context" if rest else "reaction", rule.name, lam,
                              tuple(consumed), produced))
    for m in s.molecules():
        outer_rest = None
        for inner, ctx, rebuild in _holes(m):
            gate = min(inner.degree, ctx)
            for mv in _moves(mdef, inner, admin):
                if mv.lam > gate:
                    continue
                if strict:
                    if outer_rest is None:
                        outer_rest = s - Solution([m])
                    if outer_rest and outer_rest.degree < mv.lam:
                        continue
                moves.append(Move("membrane", mv.rule, mv.lam, (m,), (rebuild(mv.apply(inner)),)))
    if admin:
        moves += admin_moves(mdef, s)
    return moves


def reaction_moves(mdef: MachineDef, s: Solution) -> list[Move]:
    return _moves(mdef, s, False)


def admin_moves(mdef: MachineDef, s: Solution) -> list[Move]:
    """Airlock moves at this level that would make some reaction available."""
    moves = []
    for m in s.molecules():
        rest = s - Solution([m])
        lock = Airlock(m, rest)
        if reaction_moves(mdef, Solution([lock])):
            lam = min(rest.degree, molecule_degree(m))
            moves.append(Move("airlock-in", "airlock-in", lam, tuple(s.elements()), (lock,)))
    for m in s.molecules():
        if isinstance(m, Airlock):
            freed = (m.head, *m.body.elements())
            after = s - Solution([m]) + Solution(freed)
            if reaction_moves(mdef, after):
                lam = min(m.body.degree, molecule_degree(m.head))
                moves.append(Move("airlock-out", "airlock-out", lam, (m,), freed))
    return moves


def candidate_moves(mdef: MachineDef, s: Solution) -> list[Move]:
    """Reactions anywhere; airlock moves only when no reaction exists at all."""
    moves = reaction_moves(mdef, s) or _moves(mdef, s, True)
    seen = set()
    out = []
    for mv in moves:
        k = mv.key()
        if k not in seen:
            seen.add(k)
            out.append(mv)
    return out


def select(moves: list[Move], strategy: str, rng: random.Random) -> Move:
    if strategy == "max":
        # every move is already admitted, so xi = 1 only ranks the lambdas
        return moves[really_applicable([mv.lam for mv in moves], ONE) - 1]
    top = max(mv.lam for mv in moves)
    return rng.choice([mv for mv in moves if mv.lam == top])


def _rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(0 if seed is None else seed)


def step(mdef: MachineDef, s: Solution, seed=0, index: int = 1) -> tuple[TraceStep, Solution] | None:
    moves = candidate_moves(mdef, s)
    if not moves:
        return None
    mv = select(moves, mdef.options.strategy, _rng(seed))
    new = mv.apply(s)
    return TraceStep(index, mv.kind, mv.rule, mv.lam, mv.consumed, mv.produced, digest(new),
                     mv.witness), new


def run(mdef: MachineDef, s: Solution, max_steps: int = 1000, seed=0) -> tuple[list[TraceStep], Solution]:
    rng = _rng(seed)
    trace: list[TraceStep] = []
    for i in range(1, max_steps + 1):
        res = step(mdef, s, rng, i)
        if res is None:
            break
        t, s = res
        trace.append(t)
    return trace, s


def replay(initial: Solution, trace: Iterable[TraceStep]) -> Solution:
    """Re-apply recorded deltas; raises if a digest does not line up."""
    s = initial
    for t in trace:
        s = s - Solution(t.consumed) + Solution(t.produced)
        if t.digest and digest(s) != t.digest:
            raise ValueError(f"replay diverged at step {t.index}")
    return s


# -- airlock primitives ---------------------------------------------------------

def airlock_in(s: Solution, m, body: Solution | None = None) -> Solution:
    """``[m] + S -> [m <| S]``; S defaults to everything except m."""
    rest = s - Solution([m])
    body = rest if body is None else body
    return rest - body + Solution([Airlock(m, body)])


def airlock_out(s: Solution, lock: Airlock) -> Solution:
    """``[m <| S] -> [m] + S``."""
    return s - Solution([lock]) + Solution([lock.head]) + lock.body
