"""Acceptance gate: one recorded PASS/FAIL line per criterion.

Each test computes every part of its criterion before asserting, so the
recorded line reflects the whole criterion even when it fails.
"""
import json
import random
from itertools import product
from pathlib import Path

from fucham.closure import closure_search, random_flts, write_report
from fucham.degree import ONE, Degree, dmin
from fucham.engine import (Airlock, AtomPat, Atom, MachineDef, MachineOptions, Membrane,
                           MembranePat, ReactionRule, Solution, Var, airlock_in, airlock_out,
                           molecule_degree, really_applicable, replay, run, step)
from fucham.engine.syntax import format_machine, parse_machine
from fucham.flts import (CandidateSimulation, check_strong_fuzzy_bisimulation,
                         check_strong_fuzzy_simulation, format_flts, format_relation,
                         greatest_bisimulation, greatest_simulation, parse_flts, parse_relation)
from fucham.fuzzy import FuzzyRelation, rel_identity, rel_inverse
from fucham.pi import parse, pi_run, pretty
from oracles import (selection_bruteforce, bisim_violating_pairs, brute_greatest_simulation,
                     sim_violating_pairs, transitions_of)
from pigen import random_process, random_program

D = Degree
ARTIFACTS = Path(__file__).resolve().parent.parent / "artifacts"


def sim_example(data_dir):
    p = parse_flts((data_dir / "sim_example_p.flts").read_text())
    q = parse_flts((data_dir / "sim_example_q.flts").read_text())
    rel = parse_relation((data_dir / "sim_example.rel").read_text(), q.states, p.states)
    return p, q, rel


# 1 -----------------------------------------------------------------------------

def test_criterion_1_sim_example(data_dir, criterion):
    p, q, rel = sim_example(data_dir)
    units = {pq: v.units for pq, v in rel.items()}
    at06 = check_strong_fuzzy_simulation(q, p, CandidateSimulation(rel, D("0.6")))
    at04 = check_strong_fuzzy_simulation(q, p, CandidateSimulation(rel, D("0.4")))
    oracle06 = sim_violating_pairs(transitions_of(q), transitions_of(p), units, D("0.6").units)
    oracle04 = sim_violating_pairs(transitions_of(q), transitions_of(p), units, D("0.4").units)
    expected = {("q0", "p0"), ("q1", "p1")}
    # the table is offered as a simulation; at every threshold that covers
    # all its nonzero entries the literal check says otherwise
    claim_refuted = all(
        not check_strong_fuzzy_simulation(q, p, CandidateSimulation(rel, D(s))).holds
        for s in ("0", "0.1", "0.4"))
    ok = (at06.holds and not oracle06 and not at04.holds
          and at04.violating_pairs() == expected == oracle04 and claim_refuted)
    criterion(1, ok, f"s=0.6 holds={at06.holds}; s=0.4 violations={sorted(at04.violating_pairs())} "
                     f"oracle={sorted(oracle04)}; claim refuted={claim_refuted}")
    assert ok


# 2 -----------------------------------------------------------------------------

QUARTERS = ("0", "0.25", "0.5", "0.75", "1")


def random_candidate(rng, f):
    pairs = list(product(sorted(f.states), repeat=2))
    return FuzzyRelation(f.states, f.states,
                         {pq: D(rng.choice(QUARTERS)) for pq in pairs if rng.random() < 0.4})


def test_criterion_2_identity_and_inverse(criterion):
    rng = random.Random(2)
    id_fail = inv_fail = inv_checked = 0
    for _ in range(500):
        f = random_flts(rng, rng.randint(1, 5), QUARTERS, density=0.2)
        trans = transitions_of(f)
        for s in map(D, QUARTERS):
            ident = rel_identity(f.states)
            if not check_strong_fuzzy_bisimulation(f, f, CandidateSimulation(ident, s)).holds:
                id_fail += 1
            passing = [greatest_bisimulation(f, f, s)]
            cand = random_candidate(rng, f)
            if not bisim_violating_pairs(trans, trans, {pq: v.units for pq, v in cand.items()}, s.units):
                passing.append(cand)
            for r in passing:
                inv_checked += 1
                if not check_strong_fuzzy_bisimulation(f, f, CandidateSimulation(rel_inverse(r), s)).holds:
                    inv_fail += 1
    ok = id_fail == 0 and inv_fail == 0
    criterion(2, ok, f"500 systems x 5 thresholds: identity failures={id_fail}, "
                     f"inverse failures={inv_fail} of {inv_checked}")
    assert ok


# 3 -----------------------------------------------------------------------------

def test_criterion_3_closure_harness(criterion):
    first = closure_search(seed=0)
    second = closure_search(seed=0)
    ARTIFACTS.mkdir(exist_ok=True)
    path = ARTIFACTS / "closure_report.json"
    write_report(first, path)
    reproducible = json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)
    reloaded = json.loads(path.read_text()) == json.loads(json.dumps(first))
    artifact_ok = all(first["confirmed"][k] or first["minimal_counterexample"][k] for k in ("composition", "union"))
    ok = reproducible and reloaded and artifact_ok
    criterion(3, ok, f"reproducible={reproducible}; checked={first['checked']}; "
                     f"failures={first['failures']} split={first['failures_by_thresholds']}; "
                     f"artifact={path.name}")
    assert ok


# 4 -----------------------------------------------------------------------------

def test_criterion_4_greatest_simulation(criterion):
    rng = random.Random(4)
    lat = ("0", "0.5", "1")
    mismatches = 0
    for _ in range(100):
        a = random_flts(rng, rng.randint(1, 3), lat)
        b = random_flts(rng, rng.randint(1, 3), lat)
        s = D(rng.choice(lat))
        ta, tb = transitions_of(a), transitions_of(b)
        values = sorted({0, ONE.units, s.units} | {t[3] for t in ta + tb})
        want = brute_greatest_simulation(a.states, b.states, ta, tb, s.units, values)
        got = greatest_simulation(a, b, s)
        if want is None or {pq: got[pq].units for pq in want} != want:
            mismatches += 1
    criterion(4, mismatches == 0, f"100 instances, mismatches={mismatches}")
    assert mismatches == 0


# 5 -----------------------------------------------------------------------------

def test_criterion_5_really_applicable(criterion):
    rng = random.Random(5)
    grid = [Degree.from_units(k * 100_000) for k in range(11)]
    mismatches = 0
    for _ in range(10_000):
        lams = [rng.choice(grid) for _ in range(rng.randint(0, 8))]
        xi = rng.choice(grid)
        if really_applicable(lams, xi) != selection_bruteforce(lams, xi):
            mismatches += 1
    fixture = really_applicable([D("0.5"), D("0.7"), D("0.7")], D("0.8"))
    ok = mismatches == 0 and fixture == 3
    criterion(5, ok, f"10000 instances, mismatches={mismatches}; (0.5,0.7,0.7)/0.8 -> {fixture}")
    assert ok


# 6 -----------------------------------------------------------------------------

ATOMS = ("a", "b", "c")
LEVELS = ("0.2", "0.5", "0.8", "1")


def random_pattern(rng, vars_left):
    k = rng.random()
    if k < 0.6:
        return AtomPat(rng.choice(ATOMS))
    if k < 0.85:
        name = f"v{len(vars_left)}"
        vars_left.append(name)
        return Var(name)
    return MembranePat((AtomPat(rng.choice(ATOMS)),), "r")


def random_machine(rng):
    rules = []
    for i in range(rng.randint(1, 3)):
        bound: list = []
        lhs = tuple(random_pattern(rng, bound) for _ in range(rng.randint(1, 2)))
        has_rest = any(isinstance(p, MembranePat) for p in lhs)
        if has_rest and sum(isinstance(p, MembranePat) for p in lhs) > 1:
            lhs = lhs[:1]
        rhs = [AtomPat(rng.choice(ATOMS)) for _ in range(rng.randint(0, 2))]
        rhs += [Var(v) for v in bound if rng.random() < 0.5 and any(isinstance(p, Var) and p.name == v for p in lhs)]
        if any(isinstance(p, MembranePat) for p in lhs):
            rhs.append(MembranePat((), "r"))
        rules.append(ReactionRule(f"r{i}", lhs, tuple(rhs), D(rng.choice(LEVELS))))
    opts = MachineOptions(rng.random() < 0.5, rng.choice(("max", "random")))
    return MachineDef(rules, opts)


def random_solution(rng, depth=1):
    mols = []
    for _ in range(rng.randint(0, 4)):
        if depth and rng.random() < 0.25:
            mols.append(Membrane(random_solution(rng, depth - 1)))
        else:
            mols.append(Atom(rng.choice(ATOMS), D(rng.choice(LEVELS))))
    return Solution(mols)


def test_criterion_6_engine_gate(criterion):
    rng = random.Random(6)
    gate_violations = airlock_failures = replay_failures = steps = 0
    for seed in range(1000):
        mdef = random_machine(rng)
        init = random_solution(rng)
        trace, final = run(mdef, init, max_steps=12, seed=seed)
        steps += len(trace)
        for t in trace:
            if dmin(molecule_degree(m) for m in t.consumed) < t.lam:
                gate_violations += 1
        try:
            if replay(init, trace) != final:
                replay_failures += 1
        except ValueError:
            replay_failures += 1
        for m in final.molecules():
            locked = airlock_in(final, m)
            (lock,) = [x for x in locked.molecules() if isinstance(x, Airlock)]
            if airlock_out(locked, lock) != final:
                airlock_failures += 1
    ok = gate_violations == airlock_failures == replay_failures == 0 and steps > 0
    criterion(6, ok, f"1000 runs, {steps} steps: gate violations={gate_violations}, "
                     f"airlock round-trip failures={airlock_failures}, replay failures={replay_failures}")
    assert ok


# 7 -----------------------------------------------------------------------------

def test_criterion_7_water(data_dir, criterion):
    mf = parse_machine((data_dir / "water.cham").read_text())
    fired = step(mf.machine, mf.init)
    (rule,) = mf.machine.rules
    harder = MachineDef([ReactionRule(rule.name, rule.lhs, rule.rhs, D("0.8"))], mf.machine.options)
    blocked = step(harder, mf.init)
    want = Solution.from_counts({Atom("H2O", D("0.75")): 2})
    ok = fired is not None and fired[1] == want and blocked is None
    criterion(7, ok, f"lambda=0.7 -> {fired[1] if fired else None}; lambda=0.8 -> "
                     f"{'blocked' if blocked is None else 'fired'}")
    assert ok


# 8 -----------------------------------------------------------------------------

LAMBDAS = ("0", "0.25", "0.5", "0.7", "0.85", "0.95", "1")


def comm_gate_ok(trace, lam):
    for t in trace:
        if t.rule == "comm":
            w = dict(t.witness)
            ch, b, z = (parse(f"{w[k]}<q>.0").branches[0][0].channel for k in ("channel", "bound", "payload"))
            # both side conditions, restated from scratch
            if not (ch.degree >= lam and z.degree.units - b.degree.units <= lam.units):
                return False
    return True


def max_payload_gap(trace):
    """Largest payload-minus-bound degree gap over the trace's communications."""
    gap = 0
    for t in trace:
        if t.rule == "comm":
            w = dict(t.witness)
            b, z = (parse(f"{w[k]}<q>.0").branches[0][0].channel for k in ("bound", "payload"))
            gap = max(gap, z.degree.units - b.degree.units)
    return gap


def test_criterion_8_pi(data_dir, criterion):
    hs = parse((data_dir / "handshake.pi").read_text())
    empty07 = pi_run(hs, D("0.7"))[1] == Solution()
    final095 = pi_run(hs, D("0.95"))[1]
    stuck095 = final095 != Solution()

    rng = random.Random(8)
    programs = [hs] + [random_program(rng) for _ in range(500)]
    gate_bad = comms = 0
    mono_bad = []
    explained = 0
    for i, p in enumerate(programs):
        empty_at = {}
        gaps = {}
        for lam in map(D, LAMBDAS):
            trace, final = pi_run(p, lam, max_steps=80, seed=i)
            comms += sum(t.rule == "comm" for t in trace)
            if not comm_gate_ok(trace, lam):
                gate_bad += 1
            empty_at[lam] = final == Solution()
            gaps[lam] = max_payload_gap(trace)
        for hi, lo in product(empty_at, repeat=2):
            if lo <= hi and empty_at[hi] and not empty_at[lo]:
                mono_bad.append((i, str(hi), str(lo)))
                # the run at hi used a communication that lo forbids by the signed rule
                explained += gaps[hi] > lo.units
    # the handshake itself: empty at 0.7, but at 0 the signed payload
    # condition 0.85 - 0.8 <= 0 is false, so it sticks
    hs_mono = [(h, l) for i, h, l in mono_bad if i == 0]
    ok = empty07 and stuck095 and gate_bad == 0 and not mono_bad
    criterion(8, ok, f"handshake empty at 0.7={empty07}, stuck at 0.95={stuck095}; "
                     f"{comms} communications, gate violations={gate_bad}; "
                     f"monotonicity violations={len(mono_bad)} in "
                     f"{len({i for i, _, _ in mono_bad})} of {len(programs)} programs, "
                     f"{explained} caused by the signed payload condition "
                     f"(handshake: {hs_mono[:3]})")
    # the first three parts are independent of the monotonicity question
    assert empty07 and stuck095 and gate_bad == 0
    assert not mono_bad, "lambda-monotonicity fails under the signed payload condition"


# 9 -----------------------------------------------------------------------------

def test_criterion_9_round_trips(data_dir, criterion):
    rng = random.Random(9)
    term_bad = 0
    for _ in range(1000):
        p = random_process(rng, rng.randint(0, 5))
        once = parse(pretty(p))
        if once != p or parse(pretty(once)) != once:
            term_bad += 1
    files_bad = []
    for f in sorted(data_dir.iterdir()):
        text = f.read_text()
        try:
            if f.suffix == ".pi":
                a = parse(text)
                same = parse(pretty(a)) == a
            elif f.suffix == ".cham":
                a = parse_machine(text)
                same = parse_machine(format_machine(a)) == a
            elif f.suffix == ".flts":
                a = parse_flts(text)
                same = parse_flts(format_flts(a)) == a
            elif f.suffix == ".rel":
                p, q, _ = sim_example(data_dir)
                a = parse_relation(text, q.states, p.states)
                same = parse_relation(format_relation(a), q.states, p.states) == a
            else:
                continue
        except Exception:
            # deliberately malformed fixtures are not part of the round-trip set
            if f.stem.startswith("bad") or "bad" in f.stem:
                continue
            raise
        if not same:
            files_bad.append(f.name)
    ok = term_bad == 0 and not files_bad
    criterion(9, ok, f"1000 terms, failures={term_bad}; fixture files failing={files_bad}")
    assert ok
