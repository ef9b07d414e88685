import pytest
from hypothesis import given, strategies as st

from fucham.degree import Degree
from fucham.engine import (Airlock, App, Atom, Membrane, Solution, format_molecule,
                           format_solution, run, step)
from fucham.engine.machine import format_trace_step
from fucham.engine.syntax import (MachineFile, format_machine, parse_machine, parse_molecule,
                                  parse_pattern, parse_solution, parse_trace_line)
from fucham.errors import ParseError

D = Degree

names = st.sampled_from(["a", "H2", "O2", "sugar", "x'", "ion-b", "_k"])
degrees = st.integers(0, 20).map(lambda k: Degree.from_units(k * 50_000))


def molecules(depth=2):
    base = st.builds(Atom, names, degrees)
    if depth == 0:
        return base
    inner = molecules(depth - 1)
    sols = st.lists(inner, max_size=3).map(Solution)
    return st.one_of(
        base,
        st.builds(lambda f, args: App(f, tuple(args)), names, st.lists(inner, min_size=1, max_size=3)),
        st.builds(Membrane, sols),
        st.builds(Airlock, inner, sols),
    )


@given(molecules())
def test_molecule_round_trip(m):
    assert parse_molecule(format_molecule(m)) == m


@given(st.lists(molecules(1), max_size=4).map(Solution))
def test_solution_round_trip(s):
    assert parse_solution(format_solution(s)) == s


def test_multiplicity_and_defaults():
    s = parse_solution("{ H2@0.9 * 2, O2 }")
    assert s == Solution([Atom("H2", D("0.9")), Atom("H2", D("0.9")), Atom("O2", D("1"))])
    assert format_solution(s) == "{ H2@0.9 * 2, O2 }"
    assert parse_solution("{ }") == Solution()


def test_airlock_is_left_associative():
    m = parse_molecule("a <| [ b ] <| [ c ]")
    assert m == Airlock(Airlock(Atom("a", D(1)), Solution([Atom("b", D(1))])), Solution([Atom("c", D(1))]))


def test_patterns():
    p = parse_pattern("[ product | ?rest ]")
    assert p.rest == "rest"
    with pytest.raises(ParseError):
        parse_pattern("a <| b")


@pytest.mark.parametrize("text", [
    "{ H2@1.5 }", "{ H2@0.5 ", "{ a * 0 }", "{ [ a | ?r ] }", "{ a } junk",
])
def test_solution_errors(text):
    with pytest.raises(ParseError):
        parse_solution(text)


def test_error_positions():
    with pytest.raises(ParseError) as e:
        parse_solution("{ a,\n  b@7 }")
    assert "2:" in str(e.value)


@pytest.mark.parametrize("name", ["water.cham", "water_inert.cham", "cell.cham"])
def test_machine_file_round_trip(data_dir, name):
    mf = parse_machine((data_dir / name).read_text())
    again = parse_machine(format_machine(mf))
    assert again == mf


def test_machine_file_errors():
    with pytest.raises(ParseError):
        parse_machine("rule r: a -> b @ lambda=1\nrule r: b -> a @ lambda=1\n")
    with pytest.raises(ParseError):
        parse_machine("init { a }\ninit { b }\n")
    with pytest.raises(ParseError):
        parse_machine("option strategy = fastest\n")
    with pytest.raises(ParseError):
        parse_machine("rule r: ?x -> ?y @ lambda=0.5\n")
    with pytest.raises(ParseError):
        parse_machine("rule r: a -> b\n")


def test_machine_defaults():
    mf = parse_machine("rule r: a -> b @ lambda=0.5\n")
    assert mf.machine.options.strict_context is True
    assert mf.machine.options.strategy == "max"
    assert mf.init == Solution()
    assert isinstance(mf, MachineFile)


def test_trace_lines_parse_back(data_dir):
    mf = parse_machine((data_dir / "cell.cham").read_text())
    trace, _ = run(mf.machine, mf.init, 50)
    assert trace
    for t in trace:
        back = parse_trace_line(format_trace_step(t))
        assert (back.index, back.kind, back.rule, back.lam) == (t.index, t.kind, t.rule, t.lam)
        assert Solution(back.consumed) == Solution(t.consumed)
        assert Solution(back.produced) == Solution(t.produced)


def test_water_fires(data_dir):
    mf = parse_machine((data_dir / "water.cham").read_text())
    t, after = step(mf.machine, mf.init)
    assert format_solution(after) == "{ H2O@0.75 * 2 }"
    assert format_trace_step(t).startswith("step 1: reaction water lambda=0.7")
