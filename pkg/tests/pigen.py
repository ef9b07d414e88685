"""Random fuzzy pi-calculus terms for property and acceptance tests."""
import random

from hypothesis import strategies as st

from fucham.degree import Degree
from fucham.pi import NIL, TAU, Input, Name, New, Output, Par, Repl, Sum

IDENTS = ("x", "y", "z", "a", "b")
DEGREES = ("0.5", "0.8", "0.9", "1")


def random_name(rng, idents=IDENTS, degrees=DEGREES):
    return Name(rng.choice(idents), Degree(rng.choice(degrees)))


def random_process(rng: random.Random, depth=3, repl=True, idents=IDENTS, degrees=DEGREES):
    def name():
        return random_name(rng, idents, degrees)

    def proc(d):
        roll = rng.random()
        if d == 0 or roll < 0.15:
            return NIL
        if roll < 0.55:
            branches = []
            for _ in range(rng.choice((1, 1, 1, 2))):
                k = rng.random()
                pre = Input(name(), name()) if k < 0.45 else Output(name(), name()) if k < 0.9 else TAU
                branches.append((pre, proc(d - 1)))
            return Sum(tuple(branches))
        if roll < 0.8:
            return Par(proc(d - 1), proc(d - 1))
        if roll < 0.92 or not repl:
            return New(name(), proc(d - 1))
        return Repl(proc(d - 1))

    return proc(depth)


processes = st.builds(lambda seed, depth: random_process(random.Random(seed), depth),
                      st.integers(0, 2**32 - 1), st.integers(0, 4))


CHANNELS = (Name("x", Degree("0.9")), Name("y", Degree("0.8")), Name("w", Degree("0.6")))


def random_program(rng: random.Random, parts=(2, 4), length=3):
    """Parallel threads over a few shared channels, so communication is common.

    Channels keep one degree each; bound names and payloads vary in degree.
    """
    def payload():
        if rng.random() < 0.4:
            return rng.choice(CHANNELS)
        return Name(rng.choice("abc"), Degree(rng.choice(DEGREES)))

    def thread(n):
        if n == 0:
            return NIL
        ch = rng.choice(CHANNELS)
        k = rng.random()
        if k < 0.45:
            pre = Input(ch, Name(rng.choice("uv"), Degree(rng.choice(DEGREES))))
        elif k < 0.9:
            pre = Output(ch, payload())
        else:
            pre = TAU
        branches = [(pre, thread(n - 1))]
        if rng.random() < 0.15:
            branches.append((Output(rng.choice(CHANNELS), payload()), NIL))
        p = Sum(tuple(branches))
        if rng.random() < 0.1:
            p = New(rng.choice(CHANNELS), p)
        return p

    threads = [thread(rng.randint(1, length)) for _ in range(rng.randint(*parts))]
    if rng.random() < 0.2:
        threads.append(Repl(thread(1)))
    out = threads[0]
    for t in threads[1:]:
        out = Par(out, t)
    return out
