"""Molecules, solutions and rule patterns of the fuzzy chemical abstract machine."""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import lru_cache, singledispatch

from ..degree import ONE, Degree, dmin
from ..fuzzy import FuzzyMultiset


@dataclass(frozen=True)
class Atom:
    name: str
    degree: Degree = ONE


@dataclass(frozen=True)
class App:
    ctor: str
    args: tuple = ()


@dataclass(frozen=True)
class Airlock:
    head: object
    body: "Solution"


@dataclass(frozen=True)
class Membrane:
    body: "Solution"


@singledispatch
def molecule_degree(m) -> Degree:
    """Similarity of a molecule to its archetype: the min over its atoms."""
    raise TypeError(f"not a molecule: {m!r}")


@molecule_degree.register(Atom)
def _(m):
    return m.degree


@molecule_degree.register(App)
def _(m):
    return dmin(molecule_degree(a) for a in m.args)


@molecule_degree.register(Membrane)
def _(m):
    return m.body.degree


@molecule_degree.register(Airlock)
def _(m):
    return min(molecule_degree(m.head), m.body.degree)


@singledispatch
def format_molecule(m) -> str:
    raise TypeError(f"not a molecule: {m!r}")


@format_molecule.register(Atom)
def _(m):
    return m.name if m.degree == ONE else f"{m.name}@{m.degree}"


@format_molecule.register(App)
def _(m):
    return f"{m.ctor}({', '.join(canon(a) for a in m.args)})"


@format_molecule.register(Membrane)
def _(m):
    return f"[ {m.body.format_items()} ]" if m.body else "[ ]"


@format_molecule.register(Airlock)
def _(m):
    body = f"[ {m.body.format_items()} ]" if m.body else "[ ]"
    return f"{canon(m.head)} <| {body}"


@lru_cache(maxsize=1 << 16)
def canon(m) -> str:
    """Canonical text of a molecule; also its sort key."""
    return format_molecule(m)


class Solution:
    """A fuzzy multiset of molecules, keyed by (molecule, molecule degree)."""

    __slots__ = ("contents", "_items")

    def __init__(self, molecules: Iterable = ()):
        counts: dict = {}
        for m in molecules:
            counts[m] = counts.get(m, 0) + 1
        self._set(counts)

    def _set(self, counts: Mapping):
        self.contents = FuzzyMultiset(((m, molecule_degree(m)), n) for m, n in counts.items())
        self._items = None

    @classmethod
    def from_counts(cls, counts: Mapping | Iterable) -> "Solution":
        s = cls.__new__(cls)
        items = counts.items() if isinstance(counts, Mapping) else counts
        merged: dict = {}
        for m, n in items:
            merged[m] = merged.get(m, 0) + n
        s._set(merged)
        return s

    @classmethod
    def _of_multiset(cls, ms: FuzzyMultiset) -> "Solution":
        s = cls.__new__(cls)
        s.contents = ms
        s._items = None
        return s

    def items(self) -> list[tuple[object, int]]:
        """(molecule, count) pairs in canonical order."""
        if self._items is None:
            self._items = sorted(((m, n) for (m, _), n in self.contents.items()),
                                 key=lambda mn: canon(mn[0]))
        return self._items

    def molecules(self) -> list:
        return [m for m, _ in self.items()]

    def elements(self) -> list:
        return [m for m, n in self.items() for _ in range(n)]

    def count(self, m) -> int:
        return self.contents.count(m, molecule_degree(m))

    def __contains__(self, m):
        return self.count(m) > 0

    @property
    def degree(self) -> Degree:
        return dmin(d for (_, d) in self.contents.keys())

    def __len__(self):
        return self.contents.total()

    def __bool__(self):
        return bool(self.contents)

    def __iter__(self):
        return iter(self.elements())

    def __add__(self, other: "Solution") -> "Solution":
        return Solution._of_multiset(self.contents + other.contents)

    def __sub__(self, other: "Solution") -> "Solution":
        return Solution._of_multiset(self.contents - other.contents)

    def issubset(self, other: "Solution") -> bool:
        return self.contents.issubset(other.contents)

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return self.contents == other.contents

    def __hash__(self):
        return hash(self.contents)

    def format_items(self) -> str:
        return ", ".join(canon(m) if n == 1 else f"{canon(m)} * {n}" for m, n in self.items())

    def __str__(self):
        return f"{{ {self.format_items()} }}" if self else "{ }"

    def __repr__(self):
        return f"Solution({self})"


EMPTY = Solution()


def solution_degree(s: Solution) -> Degree:
    """Min molecule degree over the solution; 1 for the empty solution."""
    return s.degree


def format_solution(s: Solution) -> str:
    return str(s)


# -- patterns -----------------------------------------------------------------
# Patterns double as right-hand-side templates: an AtomPat without a degree
# matches any degree on the left and takes the default product degree on the
# right.

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class AtomPat:
    name: str
    degree: Degree | None = None


@dataclass(frozen=True)
class AppPat:
    ctor: str
    args: tuple = ()


@dataclass(frozen=True)
class MembranePat:
    items: tuple = ()
    rest: str | None = None


@dataclass(frozen=True)
class AirlockPat:
    head: object
    tail: str


MOL, SOL = "molecule", "solution"


def pattern_vars(p, acc: dict | None = None) -> dict[str, str]:
    """Variable name -> sort (molecule or solution). Raises on a sort clash."""
    acc = {} if acc is None else acc

    def note(name, sort):
        if acc.setdefault(name, sort) != sort:
            raise ValueError(f"variable ?{name} used both as a molecule and as a solution")

    match p:
        case Var(name):
            note(name, MOL)
        case AtomPat():
            pass
        case AppPat(_, args):
            for a in args:
                pattern_vars(a, acc)
        case MembranePat(items, rest):
            for a in items:
                pattern_vars(a, acc)
            if rest is not None:
                note(rest, SOL)
        case AirlockPat(head, tail):
            pattern_vars(head, acc)
            note(tail, SOL)
        case _:
            raise TypeError(f"not a pattern: {p!r}")
    return acc


def format_pattern(p) -> str:
    match p:
        case Var(name):
            return f"?{name}"
        case AtomPat(name, None):
            return name
        case AtomPat(name, deg):
            return f"{name}@{deg}"
        case AppPat(ctor, args):
            return f"{ctor}({', '.join(format_pattern(a) for a in args)})"
        case MembranePat(items, rest):
            inner = ", ".join(format_pattern(a) for a in items)
            if rest is not None:
                inner = f"{inner} | ?{rest}" if inner else f"| ?{rest}"
            return f"[ {inner} ]" if inner else "[ ]"
        case AirlockPat(head, tail):
            return f"{format_pattern(head)} <| ?{tail}"
    raise TypeError(f"not a pattern: {p!r}")
