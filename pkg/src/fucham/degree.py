"""Exact membership degrees in [0, 1].

A degree is stored as an integer count of millionths, so every operation the
machinery needs (ordering, min/max, +, -, absolute difference) is exact.
"""
from __future__ import annotations

import re

SCALE = 1_000_000
DIGITS = 6

_LITERAL = re.compile(r"(\d+)(?:\.(\d+))?")


class Degree:
    __slots__ = ("_u",)

    def __init__(self, value: "Degree | str | int | float" = 0):
        if isinstance(value, Degree):
            units = value._u
        elif isinstance(value, bool):
            raise TypeError("bool is not a degree")
        elif isinstance(value, int):
            units = value * SCALE
        elif isinstance(value, float):
            # repr() is the shortest round-tripping text, e.g. 0.1 -> '0.1'
            units = _parse_units(repr(value))
        elif isinstance(value, str):
            units = _parse_units(value)
        else:
            raise TypeError(f"cannot build a Degree from {type(value).__name__}")
        if not 0 <= units <= SCALE:
            raise ValueError(f"degree {value!r} outside [0, 1]")
        self._u = units

    @classmethod
    def from_units(cls, units: int) -> "Degree":
        if not 0 <= units <= SCALE:
            raise ValueError(f"{units} millionths is outside [0, 1]")
        d = cls.__new__(cls)
        d._u = units
        return d

    @property
    def units(self) -> int:
        return self._u

    def __eq__(self, other):
        if isinstance(other, Degree):
            return self._u == other._u
        return NotImplemented

    def __hash__(self):
        return hash(self._u)

    def __lt__(self, other):
        if isinstance(other, Degree):
            return self._u < other._u
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, Degree):
            return self._u <= other._u
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, Degree):
            return self._u > other._u
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, Degree):
            return self._u >= other._u
        return NotImplemented

    def __add__(self, other: "Degree") -> "Degree":
        if not isinstance(other, Degree):
            return NotImplemented
        return Degree.from_units(self._u + other._u)

    def __sub__(self, other: "Degree") -> "Degree":
        if not isinstance(other, Degree):
            return NotImplemented
        return Degree.from_units(self._u - other._u)

    def absdiff(self, other: "Degree") -> "Degree":
        return Degree.from_units(abs(self._u - other._u))

    def complement(self) -> "Degree":
        return Degree.from_units(SCALE - self._u)

    def __float__(self):
        return self._u / SCALE

    def __bool__(self):
        return self._u != 0

    def __str__(self):
        return format_units(self._u)

    def __repr__(self):
        return f"Degree('{self}')"

    def __reduce__(self):
        return (Degree.from_units, (self._u,))


def _parse_units(text: str) -> int:
    m = _LITERAL.fullmatch(text.strip())
    if m is None:
        raise ValueError(f"malformed degree literal {text!r}")
    whole, frac = m.group(1), m.group(2) or ""
    if len(frac) > DIGITS:
        raise ValueError(f"degree {text!r} has more than {DIGITS} fractional digits")
    units = int(whole) * SCALE + int(frac.ljust(DIGITS, "0") or 0)
    if units > SCALE:
        raise ValueError(f"degree {text!r} outside [0, 1]")
    return units


def format_units(units: int) -> str:
    """Fixed six-digit rendering with trailing zeros (and a bare dot) trimmed."""
    whole, frac = divmod(units, SCALE)
    text = f"{whole}.{frac:06d}".rstrip("0").rstrip(".")
    return text


def parse_degree(text: str) -> Degree:
    return Degree(text)


ZERO = Degree.from_units(0)
ONE = Degree.from_units(SCALE)


def dmin(values, default: Degree = ONE) -> Degree:
    """Minimum of an iterable of degrees; the empty minimum is 1."""
    best = None
    for v in values:
        if best is None or v._u < best._u:
            best = v
    return default if best is None else best


def process_similarity(d1: Degree, d2: Degree) -> Degree:
    """How alike two processes are, given their degrees of likeness to a common
    archetype: ``1 - |d1 - d2|``."""
    return d1.absdiff(d2).complement()
