import random

import pytest
from hypothesis import settings, strategies as st

from fairpi.random_terms import random_process
from fairpi.syntax import NIL, Inp, Omega, Out, Res, Rep, par

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

NAMES = ("a", "b", "c")
VARS = ("x", "y")


def processes(depth=4, width=3, replication=True, omega=False):
    """Hypothesis strategy for processes of bounded depth and width."""
    name = st.sampled_from(NAMES + VARS)
    if depth == 0:
        return st.just(NIL)
    sub = processes(depth - 1, width, replication, omega)
    options = [
        st.just(NIL),
        st.builds(Inp, name, st.sampled_from(VARS), sub),
        st.builds(Out, name, name, sub),
        st.lists(sub, min_size=2, max_size=width).map(lambda cs: par(*cs)),
        st.builds(Res, st.sampled_from(NAMES + VARS), sub),
    ]
    if replication:
        options.append(sub.map(Rep))
    if omega:
        options.append(sub.map(Omega))
    return st.one_of(options)


def seeded_processes(**kwargs):
    """Processes from the library generator, indexed by a drawn seed."""
    return st.integers(0, 2**32 - 1).map(lambda s: random_process(random.Random(s), **kwargs))


@pytest.fixture
def rng():
    return random.Random(20240601)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
