import pytest
from hypothesis import given, settings

from conftest import processes
from fairpi.bisim import bisimilar_exact, check_bisim_bounded
from fairpi.corpus import load_corpus
from fairpi.labeling import ROOT, label_term
from fairpi.parse import parse_process
from fairpi.syntax import canonical_term

P = parse_process


def corpus_process(name):
    return next(e for e in load_corpus() if e.name == name).parsed()[0]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_impossibility_pair_is_bisimilar_up_to_k(k):
    e, f = corpus_process("impossibility-E"), corpus_process("impossibility-F")
    assert check_bisim_bounded(e, f, k)


def test_different_outputs_differ_at_depth_one():
    assert not check_bisim_bounded(P("a<u>"), P("b<u>"), 1)
    # with the exact check disabled, depth zero sees no difference
    assert check_bisim_bounded(P("a<u>"), P("b<u>"), 0, cap=0)


def test_exact_examples():
    assert bisimilar_exact(P("a<u> | b<u>"), P("b<u> | a<u>"))
    assert bisimilar_exact(P("(nu b)(b<u> | !b(x).b<u>)"), P("(nu c)(c<u> | !c(x).c<u>)"))
    assert bisimilar_exact(P("a(x).b<u>"), P("a(y).c<u>")) is False
    # a private synchronization is invisible up to the tau it costs
    assert bisimilar_exact(P("(nu c)(c<u> | c(x).a<u>)"), P("a<u>")) is False


def test_exact_check_declines_large_systems():
    p = P("!a<u> | !a(x).b<x>")
    assert bisimilar_exact(p, p, cap=4) is None
    # every step leaves one more output behind
    grow = P("!c<a>.a<b>")
    assert bisimilar_exact(grow, grow) is None
    assert check_bisim_bounded(grow, grow, 3)


def test_labels_are_ignored():
    p = P("!a(x).b<x> | c<u>")
    assert check_bisim_bounded(label_term(p, ROOT), p, 3)


def test_depth_bound_matters():
    # the difference only shows after two moves
    p, q = P("a<u>.b<u>"), P("a<u>.c<u>")
    assert check_bisim_bounded(p, q, 1, cap=0)
    assert not check_bisim_bounded(p, q, 2, cap=0)
    assert not check_bisim_bounded(p, q, 1)


@settings(max_examples=60)
@given(processes(depth=3))
def test_reflexive_and_canonical(p):
    assert check_bisim_bounded(p, p, 2)
    assert check_bisim_bounded(p, canonical_term(p), 2)


@settings(max_examples=60)
@given(processes(depth=3), processes(depth=3))
def test_symmetric_and_agrees_with_exact(p, q):
    b = check_bisim_bounded(p, q, 2)
    assert b == check_bisim_bounded(q, p, 2)
    exact = bisimilar_exact(p, q, cap=64)
    if exact is not None and not b:
        assert exact is False
