"""Running fuzzy pi-calculus processes as chemical solutions.

A process becomes a solution of molecules: every component of a top-level
parallel composition is a molecule, ``new x P`` turns into a restriction
membrane ``new x [ ... ]`` holding its own solution, and scope extension
goes through an airlock.  Moves at each level, in priority order:

    parallel-split      P | Q            ->  P, Q
    inaction-cleanup    0, ...           ->  (removed); empty restrictions too
    restriction-intro   new x P          ->  new x [ P ]
    scope-extension     new x [S], p     ->  new x [ p <| S ]   (p could talk to S)
    airlock-out         p <| S           ->  p, S
    replication         !p               ->  p, !p              (only if p could talk)
    comm / tau          x(y).p, x<z>.q   ->  p[z/y], q

Administrative moves always go first; among communications the choice is
seeded-uniform.  A communication on ``x`` needs ``degree(x) >= lambda`` and
``degree(z) - degree(y) <= lambda`` (signed).
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..degree import Degree
from ..engine.machine import Move, TraceStep, digest
from ..engine.terms import Airlock, Solution, format_molecule, molecule_degree
from .process import (NIL, Input, New, Output, Par, Repl, Sum, TauPrefix, all_names,
                      fresh_name, free_names, par_components, par_of, process_degree, substitute)
from .syntax import pretty

ADMIN = "pi-administrative"


@dataclass(frozen=True)
class Restriction:
    """``new x [ S ]``: a membrane whose solution is the scope of ``x``."""
    name: object
    body: Solution


for _cls in (Sum, Par, New, Repl):
    molecule_degree.register(_cls, process_degree)
    format_molecule.register(_cls, pretty)


@molecule_degree.register(Restriction)
def _(m):
    return min(m.name.degree, m.body.degree)


@format_molecule.register(Restriction)
def _(m):
    body = f"[ {m.body.format_items()} ]" if m.body else "[ ]"
    return f"new {m.name} {body}"


def encode(p) -> Solution:
    return Solution(par_components(p))


def decode_molecule(m):
    match m:
        case Restriction(x, body):
            return New(x, decode(body))
        case Airlock(head, body):
            return par_of([decode_molecule(head)] + ([decode(body)] if body else []))
    return m


def decode(s: Solution):
    """Inverse of the encoding (up to structural congruence)."""
    return par_of(decode_molecule(m) for m in s.elements())


def join(s: Solution):
    """Parallel join: the whole level as one molecule."""
    return Solution([decode(s)])


def eliminate(m: Restriction):
    """Restriction-membrane elimination: ``new x [ S ] -> new x P``."""
    return New(m.name, decode(m.body))


# -- substitution over solutions --------------------------------------------------

def _subst_molecule(m, z, y):
    match m:
        case Restriction(x, body):
            if x == y:
                return m
            return Restriction(x, _subst_solution(body, z, y))
        case Airlock(head, body):
            return Airlock(_subst_molecule(head, z, y), _subst_solution(body, z, y))
    return substitute(m, z, y)


def _subst_solution(s: Solution, z, y) -> Solution:
    return Solution(_subst_molecule(m, z, y) for m in s.elements())


def molecule_names(m) -> set:
    match m:
        case Restriction(x, body):
            return {x} | solution_names(body)
        case Airlock(head, body):
            return molecule_names(head) | solution_names(body)
    return all_names(m)


def solution_names(s: Solution) -> set:
    out = set()
    for m in s.molecules():
        out |= molecule_names(m)
    return out


# -- communication ---------------------------------------------------------------

def _actions(m):
    """(prefix, continuation) pairs a molecule can fire right now."""
    return m.branches if isinstance(m, Sum) else ()


def comm_ok(channel, bound, payload, lam: Degree) -> bool:
    return channel.degree >= lam and payload.degree.units - bound.degree.units <= lam.units


def comm_moves(s: Solution, lam: Degree) -> list[Move]:
    mols = s.molecules()
    out = []
    for m in mols:
        for pre, cont in _actions(m):
            if isinstance(pre, TauPrefix):
                out.append(Move("reaction", "tau", lam, (m,), (cont,)))
    for i, m1 in enumerate(mols):
        for pre1, cont1 in _actions(m1):
            if not isinstance(pre1, Input):
                continue
            for j, m2 in enumerate(mols):
                if i == j and s.count(m1) < 2:
                    continue
                for pre2, cont2 in _actions(m2):
                    if not isinstance(pre2, Output) or pre2.channel != pre1.channel:
                        continue
                    if not comm_ok(pre1.channel, pre1.bound, pre2.payload, lam):
                        continue
                    out.append(Move("reaction", "comm", lam, (m1, m2),
                                    (substitute(cont1, pre2.payload, pre1.bound), cont2),
                                    (("channel", str(pre1.channel)), ("bound", str(pre1.bound)),
                                     ("payload", str(pre2.payload)))))
    return out


def _active(m, polarity) -> set:
    """Channels on which ``m`` (or a copy of a replicated ``m``) could act."""
    if isinstance(m, Repl):
        return set().union(*(_active(q, polarity) for q in par_components(m.body)))
    return {pre.channel for pre, _ in _actions(m) if isinstance(pre, polarity)}


def _could_talk(p, r: Restriction) -> bool:
    ins, outs = _active(p, Input), _active(p, Output)
    for m in r.body.molecules():
        if (ins & _active(m, Output)) - {r.name} or (outs & _active(m, Input)) - {r.name}:
            return True
    return False


# -- administrative moves ----------------------------------------------------------

def _admin(rule, lam, consumed, produced) -> Move:
    return Move(ADMIN, rule, lam, tuple(consumed), tuple(produced))


def admin_moves(s: Solution, lam: Degree) -> list[Move]:
    mols = s.molecules()
    out = []
    for m in mols:
        if isinstance(m, Par):
            out.append(_admin("parallel-split", lam, [m], par_components(m)))
    junk = [m for m in s.elements()
            if m == NIL or (isinstance(m, Restriction) and not m.body)]
    if junk:
        out.append(_admin("inaction-cleanup", lam, junk, []))
    for m in mols:
        if isinstance(m, New):
            out.append(_admin("restriction-intro", lam, [m], [Restriction(m.name, Solution([m.body]))]))
    for r in mols:
        if not isinstance(r, Restriction):
            continue
        for p in mols:
            if not isinstance(p, (Sum, Repl)) or not _could_talk(p, r):
                continue
            x, body = r.name, r.body
            if x in free_names(p):
                # alpha-convert the restriction first, same degree so always plausible
                x2 = fresh_name(x, molecule_names(r) | all_names(p))
                body = _subst_solution(body, x2, x)
                x = x2
            out.append(_admin("scope-extension", lam, [r, p],
                              [Restriction(x, Solution([Airlock(p, body)]))]))
    for m in mols:
        if isinstance(m, Airlock):
            out.append(_admin("airlock-out", lam, [m], [m.head, *m.body.elements()]))
    if not comm_moves(s, lam):
        for m in mols:
            if isinstance(m, Repl):
                copy = par_components(m.body)
                if comm_moves(s + Solution(copy), lam):
                    out.append(_admin("replication", lam, [m], [m, *copy]))
    return out


def _lift(r: Restriction, mv: Move) -> Move:
    return Move(mv.kind, mv.rule, mv.lam, (r,), (Restriction(r.name, mv.apply(r.body)),), mv.witness)


def pi_moves(s: Solution, lam: Degree) -> tuple[list[Move], list[Move]]:
    """(administrative, communication) moves anywhere in the solution."""
    admin = admin_moves(s, lam)
    comms = comm_moves(s, lam)
    for m in s.molecules():
        if isinstance(m, Restriction):
            a, c = pi_moves(m.body, lam)
            admin += [_lift(m, mv) for mv in a]
            comms += [_lift(m, mv) for mv in c]
    return admin, comms


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(0 if seed is None else seed)


def pi_step(s: Solution, lam, seed=0, index: int = 1):
    lam = Degree(lam)
    admin, comms = pi_moves(s, lam)
    if admin:
        mv = admin[0]
    elif comms:
        mv = _rng(seed).choice(comms)
    else:
        return None
    new = mv.apply(s)
    return TraceStep(index, mv.kind, mv.rule, lam, mv.consumed, mv.produced, digest(new), mv.witness), new


def pi_run_solution(s: Solution, lam, max_steps: int = 1000, seed=0):
    rng = _rng(seed)
    trace = []
    for i in range(1, max_steps + 1):
        res = pi_step(s, lam, rng, i)
        if res is None:
            break
        t, s = res
        trace.append(t)
    return trace, s


def pi_run(p, lam, max_steps: int = 1000, seed=0):
    return pi_run_solution(encode(p), lam, max_steps, seed)


def is_quiescent(s: Solution, lam) -> bool:
    admin, comms = pi_moves(s, Degree(lam))
    return not admin and not comms
