"""Fuzzy labeled transition systems and strong fuzzy (bi)simulation.

Orientation used throughout: for a candidate relation S over
``states(a) x states(b)``, every move of the *first* component ``p`` must be
answered by the *second* component ``q`` ("q strongly fuzzily simulates p").

A pair (p, q) is *checked* when ``S(p, q) >= s`` and ``S(p, q) > 0``; pairs
outside the support are unrelated and never checked.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .degree import SCALE, Degree, ZERO
from .errors import DomainError, ParseError
from .fuzzy import FuzzyRelation, rel_inverse

ORIENTATION = "first-component moves are matched by the second component"

NO_MATCHING_ACTION = "no-matching-action"
DEGREE_TOO_LOW = "degree-too-low"
SUCCESSOR_TOO_LOW = "successor-relation-too-low"


@dataclass(frozen=True, order=True)
class Transition:
    source: str
    action: str
    target: str
    degree: Degree

    def __str__(self):
        return f"{self.source} -{self.action}@{self.degree}-> {self.target}"


class Flts:
    """A finite FLTS: states, actions, and degree-weighted transitions."""

    def __init__(self, states: Iterable[str], transitions: Iterable[Transition] = (),
                 actions: Iterable[str] | None = None):
        self.states = frozenset(states)
        transitions = frozenset(transitions)
        if actions is None:
            actions = {t.action for t in transitions}
        self.actions = frozenset(actions)
        seen = set()
        for t in transitions:
            if t.source not in self.states or t.target not in self.states:
                raise DomainError(f"transition {t} uses an unknown state")
            if t.action not in self.actions:
                raise DomainError(f"transition {t} uses an unknown action")
            triple = (t.source, t.action, t.target)
            if triple in seen:
                raise ValueError(f"duplicate transition {t.source} -{t.action}-> {t.target}")
            seen.add(triple)
        self.transitions = transitions
        out: dict[str, list[Transition]] = {q: [] for q in self.states}
        for t in sorted(transitions):
            out[t.source].append(t)
        self._out = {q: tuple(ts) for q, ts in out.items()}

    def moves(self, state: str) -> tuple[Transition, ...]:
        return self._out[state]

    def degrees(self) -> set[Degree]:
        return {t.degree for t in self.transitions}

    def __eq__(self, other):
        if not isinstance(other, Flts):
            return NotImplemented
        return (self.states, self.actions, self.transitions) == (
            other.states, other.actions, other.transitions)

    def __hash__(self):
        return hash((self.states, self.actions, self.transitions))

    def __repr__(self):
        return f"Flts(states={sorted(self.states)}, transitions={len(self.transitions)})"


@dataclass(frozen=True)
class CandidateSimulation:
    relation: FuzzyRelation
    threshold: Degree


@dataclass(frozen=True)
class Violation:
    pair: tuple[str, str]
    transition: Transition
    reason: str
    direction: str = "forward"

    def __str__(self):
        p, q = self.pair
        return f"[{self.direction}] ({p},{q}): {self.transition} -- {self.reason}"


@dataclass(frozen=True)
class CheckReport:
    holds: bool
    violations: tuple[Violation, ...] = ()
    orientation: str = ORIENTATION

    def violating_pairs(self) -> set[tuple[str, str]]:
        return {v.pair for v in self.violations}

    def __str__(self):
        lines = [f"# orientation: {self.orientation}",
                 "holds" if self.holds else f"fails ({len(self.violations)} violations)"]
        lines += [str(v) for v in self.violations]
        return "\n".join(lines)


def derivative_degree(f: Flts, path: Sequence[Transition]) -> Degree:
    """Plausibility of reaching the end of ``path``: the min of its degrees."""
    if not path:
        raise ValueError("a derivative needs a non-empty path")
    for i, t in enumerate(path):
        if t not in f.transitions:
            raise ValueError(f"transition {t} is not in the system")
        if i and path[i - 1].target != t.source:
            raise ValueError(f"path breaks between {path[i - 1]} and {t}")
    return min(t.degree for t in path)


def _check_domains(a: Flts, b: Flts, rel: FuzzyRelation):
    if rel.left != a.states or rel.right != b.states:
        raise DomainError("relation domains must be the state sets of the two systems")


def _is_checked(v: Degree, s: Degree) -> bool:
    return v >= s and v != ZERO


def _simulation_violations(a: Flts, b: Flts, rel: FuzzyRelation, s: Degree,
                           direction: str, flip: bool) -> list[Violation]:
    violations = []
    for (p, q), v in sorted(rel.items()):
        if not _is_checked(v, s):
            continue
        for t in a.moves(p):
            answers = [u for u in b.moves(q) if u.action == t.action]
            if not answers:
                reason = NO_MATCHING_ACTION
            elif not any(u.degree >= t.degree for u in answers):
                reason = DEGREE_TOO_LOW
            elif not any(u.degree >= t.degree and rel(t.target, u.target) >= v for u in answers):
                reason = SUCCESSOR_TOO_LOW
            else:
                continue
            pair = (q, p) if flip else (p, q)
            violations.append(Violation(pair, t, reason, direction))
    return violations


def check_strong_fuzzy_simulation(a: Flts, b: Flts, cand: CandidateSimulation) -> CheckReport:
    _check_domains(a, b, cand.relation)
    vs = _simulation_violations(a, b, cand.relation, cand.threshold, "forward", False)
    return CheckReport(not vs, tuple(vs))


def check_strong_fuzzy_bisimulation(a: Flts, b: Flts, cand: CandidateSimulation) -> CheckReport:
    _check_domains(a, b, cand.relation)
    s = cand.threshold
    vs = _simulation_violations(a, b, cand.relation, s, "forward", False)
    # backward violations are reported against the original (p, q) orientation
    vs += _simulation_violations(b, a, rel_inverse(cand.relation), s, "backward", True)
    return CheckReport(not vs, tuple(vs))


def is_simulation(a: Flts, b: Flts, relation: FuzzyRelation, s: Degree) -> bool:
    return check_strong_fuzzy_simulation(a, b, CandidateSimulation(relation, s)).holds


def is_bisimulation(a: Flts, b: Flts, relation: FuzzyRelation, s: Degree) -> bool:
    return check_strong_fuzzy_bisimulation(a, b, CandidateSimulation(relation, s)).holds


# -- greatest-fixpoint search ---------------------------------------------

def degree_lattice(a: Flts, b: Flts, *extra: Degree) -> list[Degree]:
    """{0, 1} + every transition degree of both systems + ``extra``, ascending."""
    values = {0, SCALE} | {d.units for d in a.degrees() | b.degrees()} | {d.units for d in extra}
    return [Degree.from_units(u) for u in sorted(values)]


def _index(f: Flts) -> dict[str, dict[str, list[tuple[int, str]]]]:
    idx: dict = {q: {} for q in f.states}
    for t in f.transitions:
        idx[t.source].setdefault(t.action, []).append((t.degree.units, t.target))
    return idx


def _answer_bound(moves_from, moves_to, rel) -> int:
    """Largest value v such that every move in ``moves_from`` has an answer in
    ``moves_to`` whose successor pair is related at >= v; -1 if some move has
    no admissible answer at all."""
    bound = SCALE
    for action, ts in moves_from.items():
        answers = moves_to.get(action, ())
        for d1, t1 in ts:
            best = -1
            for d2, t2 in answers:
                if d2 >= d1:
                    v = rel(t1, t2)
                    if v > best:
                        best = v
            if best < 0:
                return -1
            if best < bound:
                bound = best
    return bound


def _refine(a: Flts, b: Flts, s: Degree, both: bool) -> dict[tuple[str, str], int]:
    lattice = [d.units for d in degree_lattice(a, b, s)]
    su = s.units
    exempt = max(v for v in lattice if v < su) if su > 0 else 0
    ia, ib = _index(a), _index(b)
    pairs = sorted((p, q) for p in a.states for q in b.states)
    rel = {pq: SCALE for pq in pairs}
    fwd = lambda x, y: rel[(x, y)]
    bwd = lambda y, x: rel[(x, y)]
    changed = True
    while changed:
        changed = False
        for p, q in pairs:
            cur = rel[(p, q)]
            if cur == 0 or cur < su:
                continue
            bound = _answer_bound(ia[p], ib[q], fwd)
            if both and bound >= 0:
                bound = min(bound, _answer_bound(ib[q], ia[p], bwd))
            new = min(cur, bound) if bound >= su and bound > 0 else exempt
            if new != cur:
                rel[(p, q)] = new
                changed = True
    return rel


def _as_relation(a: Flts, b: Flts, rel: dict) -> FuzzyRelation:
    return FuzzyRelation(a.states, b.states,
                         {pq: Degree.from_units(u) for pq, u in rel.items() if u})


def greatest_simulation(a: Flts, b: Flts, s: Degree) -> FuzzyRelation:
    """Pointwise-greatest relation, valued in the degree lattice of the two
    systems, that is a strong fuzzy simulation at threshold ``s``.

    Passing relations are closed under pointwise max, so this exists; it is
    reached by lowering offending pairs from 1 until nothing changes.
    """
    return _as_relation(a, b, _refine(a, b, s, both=False))


def greatest_bisimulation(a: Flts, b: Flts, s: Degree) -> FuzzyRelation:
    return _as_relation(a, b, _refine(a, b, s, both=True))


def bisimilar_at(a: Flts, b: Flts, p: str, q: str, d: Degree) -> bool:
    """True iff some strong fuzzy bisimulation at a threshold s <= d relates
    (p, q) inside its checked zone (degree >= s and > 0)."""
    if p not in a.states or q not in b.states:
        raise DomainError(f"unknown state {p!r} or {q!r}")
    for s in degree_lattice(a, b, d):
        if s > d:
            break
        v = _refine(a, b, s, both=True)[(p, q)]
        if v and v >= s.units:
            return True
    return False


# -- fuzzy X-machines -------------------------------------------------------

def left_mult_inverse(a: str, b: str) -> str | None:
    """The x with ``a + x == b``, or None when ``a`` is not a prefix of ``b``."""
    return b[len(a):] if b.startswith(a) else None


@dataclass(frozen=True, order=True)
class LeftInverse:
    """The partial function L_a^-1 on strings."""
    prefix: str

    def __call__(self, word: str) -> str | None:
        return left_mult_inverse(self.prefix, word)

    def __str__(self):
        return f"L[{self.prefix}]^-1"


@dataclass(frozen=True)
class FuzzyAutomaton:
    underlying: Flts
    initial: frozenset = frozenset()
    final: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        if not self.initial <= self.underlying.states or not self.final <= self.underlying.states:
            raise DomainError("initial and final states must be states of the system")


@dataclass(frozen=True, order=True)
class XEdge:
    source: str
    label: LeftInverse
    target: str
    degree: Degree


@dataclass(frozen=True)
class XMachine:
    states: frozenset
    initial: frozenset
    final: frozenset
    edges: frozenset
    type: frozenset = field(default=frozenset())


def to_fuzzy_x_machine(a: FuzzyAutomaton) -> XMachine:
    f = a.underlying
    edges = frozenset(XEdge(t.source, LeftInverse(t.action), t.target, t.degree)
                      for t in f.transitions)
    return XMachine(f.states, a.initial, a.final, edges,
                    frozenset(LeftInverse(x) for x in f.actions))


# -- text formats -------------------------------------------------------------

_TRANS = re.compile(r"(\S+)\s+-([^\s@]+)@(\S+?)->\s+(\S+)")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_flts(text: str) -> Flts:
    """Read the line format::

        states: p0 p1 p2
        actions: a b          # optional; defaults to the actions used
        trans: p0 -a@0.50-> p1
    """
    states: list[str] = []
    actions: list[str] | None = None
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = _strip(line)
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in ("states", "actions", "trans"):
            raise ParseError(f"expected 'states:', 'actions:' or 'trans:', got {line!r}", lineno, 1)
        if key == "states":
            states.extend(rest.split())
        elif key == "actions":
            actions = (actions or []) + rest.split()
        else:
            m = _TRANS.fullmatch(rest.strip())
            if m is None:
                raise ParseError(f"malformed transition {rest.strip()!r}", lineno, len(key) + 2)
            src, act, deg, dst = m.groups()
            try:
                degree = Degree(deg)
            except ValueError as e:
                raise ParseError(str(e), lineno, line.index(deg) + 1) from None
            raw.append((lineno, Transition(src, act, dst, degree)))
    known = set(states)
    for lineno, t in raw:
        for s in (t.source, t.target):
            if s not in known:
                raise ParseError(f"unknown state {s!r}", lineno, 1)
    try:
        return Flts(states, [t for _, t in raw], actions)
    except (DomainError, ValueError) as e:
        raise ParseError(str(e)) from None


def format_flts(f: Flts) -> str:
    lines = ["states: " + " ".join(sorted(f.states))]
    if f.actions:
        lines.append("actions: " + " ".join(sorted(f.actions)))
    lines += [f"trans: {t}" for t in sorted(f.transitions)]
    return "\n".join(lines) + "\n"


def parse_relation(text: str, left: Iterable[str], right: Iterable[str]) -> FuzzyRelation:
    """Read one ``a b degree`` triple per line over the given domains."""
    left, right = frozenset(left), frozenset(right)
    graph = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = _strip(line)
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'left right degree', got {line!r}", lineno, 1)
        a, b, deg = parts
        if a not in left:
            raise ParseError(f"unknown left state {a!r}", lineno, 1)
        if b not in right:
            raise ParseError(f"unknown right state {b!r}", lineno, line.index(b) + 1)
        if (a, b) in graph:
            raise ParseError(f"pair ({a}, {b}) given twice", lineno, 1)
        try:
            graph[(a, b)] = Degree(deg)
        except ValueError as e:
            raise ParseError(str(e), lineno, line.rindex(deg) + 1) from None
    return FuzzyRelation(left, right, graph)


def format_relation(r: FuzzyRelation) -> str:
    return "".join(f"{a} {b} {d}\n" for (a, b), d in sorted(r.items()))
