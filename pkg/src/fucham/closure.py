"""Empirical search for closure of strong fuzzy bisimulations under max-min
composition and pointwise-max union.

For small random systems every lattice-valued relation over Q x Q is
enumerated, the passing bisimulations are kept per threshold, and sampled
pairs of them are composed/joined and re-checked at ``min(s1, s2)``.  The
report is plain JSON-able data and depends only on the seed.
"""
from __future__ import annotations

import json
import random
from itertools import product

from .degree import Degree
from .flts import (Flts, Transition, _answer_bound, _index, check_strong_fuzzy_bisimulation,
                   CandidateSimulation, format_flts, format_relation)
from .fuzzy import FuzzyRelation, rel_compose, rel_union

DEFAULT_LATTICE = ("0", "0.5", "1")


def random_flts(rng: random.Random, n_states: int, lattice, actions=("a", "b"),
                density: float = 0.3) -> Flts:
    states = [f"s{i}" for i in range(n_states)]
    trans = []
    for src, act, dst in product(states, actions, states):
        if rng.random() < density:
            trans.append(Transition(src, act, dst, Degree(rng.choice(lattice))))
    return Flts(states, trans, actions)


def passing_bisimulations(f: Flts, s: Degree, lattice) -> list[FuzzyRelation]:
    """Every relation over ``f.states`` valued in ``lattice`` that passes the
    bisimulation check at ``s``, in enumeration order."""
    idx = _index(f)
    pairs = sorted(product(sorted(f.states), repeat=2))
    units = sorted({Degree(x).units for x in lattice})
    su = s.units
    out = []
    for values in product(units, repeat=len(pairs)):
        rel = dict(zip(pairs, values))
        fwd = lambda x, y: rel[(x, y)]
        bwd = lambda y, x: rel[(x, y)]
        ok = True
        for (p, q), v in rel.items():
            if v == 0 or v < su:
                continue
            if _answer_bound(idx[p], idx[q], fwd) < v or _answer_bound(idx[q], idx[p], bwd) < v:
                ok = False
                break
        if ok:
            out.append(FuzzyRelation(f.states, f.states,
                                     {pq: Degree.from_units(v) for pq, v in rel.items() if v}))
    return out


def _record(prop, f, s1, s2, r1, r2, result, report):
    return {
        "property": prop,
        "states": len(f.states),
        "transitions": len(f.transitions),
        "system": format_flts(f),
        "s1": str(s1),
        "s2": str(s2),
        "threshold": str(min(s1, s2)),
        "S1": format_relation(r1),
        "S2": format_relation(r2),
        "result": format_relation(result),
        "violations": [str(v) for v in report.violations],
    }


def _size_key(rec):
    return (rec["states"], rec["transitions"],
            rec["S1"].count("\n") + rec["S2"].count("\n"), rec["S1"], rec["S2"], rec["system"])


def closure_search(seed: int = 0, n_systems: int = 10, max_states: int = 3,
                   lattice=DEFAULT_LATTICE, pairs_per_case: int = 150) -> dict:
    rng = random.Random(seed)
    thresholds = [Degree(x) for x in lattice]
    checked = {"composition": 0, "union": 0}
    failures = {"composition": 0, "union": 0}
    # failures split by whether the two thresholds coincide
    split = {"composition": {"equal": 0, "unequal": 0}, "union": {"equal": 0, "unequal": 0}}
    minimal: dict = {"composition": None, "union": None}
    enumerated = 0
    passing_total = 0
    for _ in range(n_systems):
        f = random_flts(rng, rng.randint(1, max_states), lattice)
        passing = {}
        for s in thresholds:
            passing[s] = passing_bisimulations(f, s, lattice)
            passing_total += len(passing[s])
        enumerated += len(lattice) ** (len(f.states) ** 2) * len(thresholds)
        for s1, s2 in product(thresholds, repeat=2):
            p1, p2 = passing[s1], passing[s2]
            combos = [(i, j) for i in range(len(p1)) for j in range(len(p2))]
            if len(combos) > pairs_per_case:
                combos = rng.sample(combos, pairs_per_case)
            s = min(s1, s2)
            for i, j in combos:
                r1, r2 = p1[i], p2[j]
                for prop, result in (("composition", rel_compose(r1, r2)),
                                     ("union", rel_union(r1, r2))):
                    checked[prop] += 1
                    report = check_strong_fuzzy_bisimulation(f, f, CandidateSimulation(result, s))
                    if report.holds:
                        continue
                    failures[prop] += 1
                    split[prop]["equal" if s1 == s2 else "unequal"] += 1
                    rec = _record(prop, f, s1, s2, r1, r2, result, report)
                    if minimal[prop] is None or _size_key(rec) < _size_key(minimal[prop]):
                        minimal[prop] = rec
    return {
        "seed": seed,
        "systems": n_systems,
        "max_states": max_states,
        "lattice": list(lattice),
        "relations_enumerated": enumerated,
        "passing_bisimulations": passing_total,
        "checked": checked,
        "failures": failures,
        "failures_by_thresholds": split,
        "confirmed": {k: failures[k] == 0 for k in failures},
        "minimal_counterexample": minimal,
    }


def write_report(report: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
