"""Fuzzy subsets, fuzzy multisets, fuzzy binary relations and Rosenfeld's
fuzzy subgroup test over finite groups.

All containers are immutable and kept in canonical form (no zero degrees, no
zero counts) so that ``==`` is semantic equality.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from itertools import product

from .degree import ONE, ZERO, Degree
from .errors import DomainError


class FuzzySubset:
    """A finite-support map element -> degree; absent elements have degree 0."""

    __slots__ = ("_m", "_hash")

    def __init__(self, support: Mapping | Iterable = ()):
        items = support.items() if isinstance(support, Mapping) else support
        m = {}
        for elem, deg in items:
            deg = Degree(deg)
            if deg != ZERO:
                m[elem] = deg
        self._m = m
        self._hash = None

    def __getitem__(self, elem) -> Degree:
        return self._m.get(elem, ZERO)

    def __call__(self, elem) -> Degree:
        return self._m.get(elem, ZERO)

    def support(self) -> frozenset:
        return frozenset(self._m)

    def items(self):
        return self._m.items()

    def __len__(self):
        return len(self._m)

    def __eq__(self, other):
        if not isinstance(other, FuzzySubset):
            return NotImplemented
        return self._m == other._m

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._m.items()))
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{e!r}: {d}" for e, d in sorted(self._m.items(), key=repr))
        return f"FuzzySubset({{{inner}}})"


class FuzzyMultiset:
    """Yager-style fuzzy multiset: a finite map (element, degree) -> count.

    The same element may occur at several degrees; each (element, degree)
    pair is its own key.
    """

    __slots__ = ("_m", "_hash")

    def __init__(self, entries: Mapping | Iterable = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        m: dict = {}
        for key, count in items:
            elem, deg = key
            if not isinstance(deg, Degree):
                deg = Degree(deg)
            if count < 0:
                raise ValueError(f"negative count {count} for {elem!r}")
            if count:
                k = (elem, deg)
                m[k] = m.get(k, 0) + count
        self._m = m
        self._hash = None

    @classmethod
    def _wrap(cls, m: dict) -> "FuzzyMultiset":
        ms = cls.__new__(cls)
        ms._m = m
        ms._hash = None
        return ms

    def count(self, elem, deg: Degree) -> int:
        return self._m.get((elem, deg), 0)

    def __getitem__(self, key) -> int:
        return self._m.get(key, 0)

    def __contains__(self, key):
        return key in self._m

    def keys(self):
        return self._m.keys()

    def items(self):
        return self._m.items()

    def elements(self):
        for key, n in self._m.items():
            for _ in range(n):
                yield key

    def total(self) -> int:
        return sum(self._m.values())

    def __len__(self):
        return len(self._m)

    def __bool__(self):
        return bool(self._m)

    def __add__(self, other: "FuzzyMultiset") -> "FuzzyMultiset":
        if not isinstance(other, FuzzyMultiset):
            return NotImplemented
        m = dict(self._m)
        for k, n in other._m.items():
            m[k] = m.get(k, 0) + n
        return FuzzyMultiset._wrap(m)

    def __sub__(self, other: "FuzzyMultiset") -> "FuzzyMultiset":
        """Multiset difference; ``other`` must be contained in ``self``."""
        if not isinstance(other, FuzzyMultiset):
            return NotImplemented
        m = dict(self._m)
        for k, n in other._m.items():
            have = m.get(k, 0)
            if have < n:
                raise ValueError(f"cannot remove {n} x {k!r}: only {have} present")
            if have == n:
                del m[k]
            else:
                m[k] = have - n
        return FuzzyMultiset._wrap(m)

    def issubset(self, other: "FuzzyMultiset") -> bool:
        return all(other._m.get(k, 0) >= n for k, n in self._m.items())

    def __eq__(self, other):
        if not isinstance(other, FuzzyMultiset):
            return NotImplemented
        return self._m == other._m

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._m.items()))
        return self._hash

    def __repr__(self):
        inner = ", ".join(
            f"({e!r}, {d}): {n}" for (e, d), n in sorted(self._m.items(), key=repr)
        )
        return f"FuzzyMultiset({{{inner}}})"


def msum(m1: FuzzyMultiset, m2: FuzzyMultiset) -> FuzzyMultiset:
    return m1 + m2


class FuzzyRelation:
    """A fuzzy binary relation between two finite, declared domains."""

    __slots__ = ("left", "right", "_g", "_hash")

    def __init__(self, left: Iterable, right: Iterable, graph: Mapping | Iterable = ()):
        self.left = frozenset(left)
        self.right = frozenset(right)
        items = graph.items() if isinstance(graph, Mapping) else graph
        g = {}
        for (a, b), deg in items:
            if a not in self.left or b not in self.right:
                raise DomainError(f"pair ({a!r}, {b!r}) outside the declared domains")
            deg = Degree(deg)
            if deg != ZERO:
                g[(a, b)] = deg
        self._g = g
        self._hash = None

    def __getitem__(self, pair) -> Degree:
        return self._g.get(pair, ZERO)

    def __call__(self, a, b) -> Degree:
        return self._g.get((a, b), ZERO)

    def items(self):
        return self._g.items()

    def pairs(self):
        return self._g.keys()

    def __len__(self):
        return len(self._g)

    def __eq__(self, other):
        if not isinstance(other, FuzzyRelation):
            return NotImplemented
        return self.left == other.left and self.right == other.right and self._g == other._g

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.left, self.right, frozenset(self._g.items())))
        return self._hash

    def __le__(self, other: "FuzzyRelation") -> bool:
        """Pointwise inclusion."""
        return all(d <= other(a, b) for (a, b), d in self._g.items())

    def __repr__(self):
        inner = ", ".join(f"({a!r}, {b!r}): {d}" for (a, b), d in sorted(self._g.items(), key=repr))
        return f"FuzzyRelation({{{inner}}})"


def rel_identity(domain: Iterable) -> FuzzyRelation:
    domain = frozenset(domain)
    return FuzzyRelation(domain, domain, {(q, q): ONE for q in domain})


def rel_inverse(r: FuzzyRelation) -> FuzzyRelation:
    return FuzzyRelation(r.right, r.left, {(b, a): d for (a, b), d in r.items()})


def rel_compose(r1: FuzzyRelation, r2: FuzzyRelation) -> FuzzyRelation:
    """Max-min composition: ``(r1 o r2)(p, r) = max_q min(r1(p, q), r2(q, r))``."""
    if r1.right != r2.left:
        raise DomainError("composition needs r1's right domain to equal r2's left domain")
    by_mid: dict = {}
    for (q, r), d in r2.items():
        by_mid.setdefault(q, []).append((r, d))
    g: dict = {}
    for (p, q), d1 in r1.items():
        for r, d2 in by_mid.get(q, ()):
            v = min(d1, d2)
            if v > g.get((p, r), ZERO):
                g[(p, r)] = v
    return FuzzyRelation(r1.left, r2.right, g)


def rel_union(r1: FuzzyRelation, r2: FuzzyRelation) -> FuzzyRelation:
    if r1.left != r2.left or r1.right != r2.right:
        raise DomainError("union needs relations over the same domains")
    g = dict(r1.items())
    for pair, d in r2.items():
        if d > g.get(pair, ZERO):
            g[pair] = d
    return FuzzyRelation(r1.left, r1.right, g)


class FiniteGroup:
    """A finite group given by its multiplication table.

    The group laws are checked on construction; a malformed table raises
    ``ValueError``.
    """

    def __init__(self, elements: Iterable, table: Mapping, identity):
        self.elements = frozenset(elements)
        self.table = dict(table)
        self.identity = identity
        self._validate()
        self.inverse = {
            a: next(b for b in self.elements if self.table[(a, b)] == identity)
            for a in self.elements
        }

    def _validate(self):
        els = self.elements
        if self.identity not in els:
            raise ValueError("identity is not a group element")
        for a, b in product(els, repeat=2):
            c = self.table.get((a, b))
            if c is None:
                raise ValueError(f"table has no entry for ({a!r}, {b!r})")
            if c not in els:
                raise ValueError(f"{a!r}*{b!r} = {c!r} is not a group element")
        for a in els:
            if self.table[(self.identity, a)] != a or self.table[(a, self.identity)] != a:
                raise ValueError(f"{self.identity!r} is not an identity for {a!r}")
            if not any(self.table[(a, b)] == self.identity for b in els):
                raise ValueError(f"{a!r} has no inverse")
        op = self.table
        for a, b, c in product(els, repeat=3):
            if op[(op[(a, b)], c)] != op[(a, op[(b, c)])]:
                raise ValueError(f"associativity fails at ({a!r}, {b!r}, {c!r})")

    def mul(self, a, b):
        return self.table[(a, b)]

    @classmethod
    def cyclic(cls, n: int, names=None) -> "FiniteGroup":
        names = list(names) if names is not None else list(range(n))
        if len(names) != n:
            raise ValueError("need exactly n element names")
        table = {(names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)}
        return cls(names, table, names[0])


def is_fuzzy_subgroup(g: FiniteGroup, a: FuzzySubset) -> bool:
    """Rosenfeld's test: ``min(A(x), A(y)) <= A(x * y^-1)`` for all x, y."""
    stray = a.support() - g.elements
    if stray:
        raise DomainError(f"support elements {sorted(map(repr, stray))} are not in the group")
    for x, y in product(g.elements, repeat=2):
        if min(a(x), a(y)) > a(g.mul(x, g.inverse[y])):
            return False
    return True
