from hypothesis import given, settings, strategies as st

from conftest import processes
from fairpi.labeling import (ROOT, all_labels, conflict_free, label_list, label_term, prefix_leq,
                             top_labels, unlabel, well_formed)
from fairpi.oracles import live_labels_by_rules
from fairpi.parse import parse_labeled, parse_process
from fairpi.semantics import FreeInput, live_labels, step, tau_steps
from fairpi.syntax import NIL, Label, Omega, pretty

P = parse_process


def lab(text):
    s, n = text.split(",")
    return Label(s, int(n))


labels = st.builds(Label, st.text("01", max_size=4), st.integers(0, 4))


# ---------------------------------------------------------------- label algebra

def test_prefix_order():
    assert prefix_leq("", "01")
    assert prefix_leq("0", "01")
    assert not prefix_leq("01", "0")


def test_conflict_relation():
    assert conflict_free({lab("0,0")}, {lab("1,0")})
    assert not conflict_free({lab("0,0")}, {lab("01,3")})
    assert conflict_free(set(), {lab("0,0"), lab(",0")})


def test_labeling_splits_parallel_and_counts_prefixes():
    e = label_term(P("x(y).((nu z)(z(k).0 | z<h>.0)) | a(u).0"), ROOT)
    assert pretty(e) == "x(y)@0,0.(nu z)(z(k)@00,1 | z<h>@01,1) | a(u)@1,0"
    assert top_labels(e) == {lab("0,0"), lab("1,0")}
    assert all_labels(e) == {lab("0,0"), lab("1,0"), lab("00,1"), lab("01,1")}


def test_labeling_edge_cases():
    assert label_term(NIL, ROOT) == NIL
    r = label_term(P("!a(x).0"), lab("1,2"))
    assert pretty(r) == "!@1,2 a(x)"
    assert top_labels(r) == all_labels(r) == {lab("1,2")}
    assert top_labels(NIL) == frozenset()


def test_success_prefix_is_unlabeled():
    o = label_term(P("w.a(x)", observer=True), ROOT)
    assert isinstance(o, Omega) and top_labels(o) == all_labels(o) == frozenset()
    assert unlabel(o) == P("w.a(x)", observer=True)


def test_well_formedness():
    assert not well_formed(parse_labeled("x(k)@0,0 | y(k)@0,1"))
    assert well_formed(NIL)
    assert well_formed(label_term(P("!a(x).b<x> | (nu c)c<c>.c(y)"), ROOT))


def test_unlabel_replication():
    r = label_term(P("!a(x).b<x>"), lab("0,5"))
    assert unlabel(r) == P("!a(x).b<x>")


# ---------------------------------------------------------------- labeled steps

def test_replication_relabels_copy_and_itself():
    r = label_term(P("!a(x).b<x>"), lab("1,2"))
    [t] = [t for t in step(r, {"c"}) if t.action == FreeInput("a", "c")]
    assert t.fired == {lab("1,2")}
    assert pretty(t.target) == "b<c>@10,3 | !@11,3 a(x).b<x>"


def test_com_fires_both_labels():
    e = parse_labeled("a<b>@0,0 | a(x)@1,0.0")
    [t] = tau_steps(e)
    assert t.fired == {lab("0,0"), lab("1,0")}


def test_success_fires_nothing():
    [t] = step(label_term(P("w", observer=True), ROOT))
    assert t.action.kind == "omega" and t.fired == frozenset()


def test_live_label_examples():
    assert live_labels(parse_labeled("a<b>@0,0 | a(x)@1,0.w")) == {lab("0,0"), lab("1,0")}
    assert live_labels(parse_labeled("(nu b)(b(k)@0,0)")) == frozenset()
    assert live_labels(NIL) == frozenset()


# ---------------------------------------------------------------- invariants

def random_trace(e, rnd, length, tau_only=False):
    # success moves leave the labeled language (their continuation is plain)
    # and never occur in computations, so traces skip them
    states, steps = [e], []
    for _ in range(length):
        ts = tau_steps(e) if tau_only else [t for t in step(e) if t.action.kind != "omega"]
        if not ts:
            break
        t = rnd.choice(ts)
        steps.append(t)
        e = t.target
        states.append(e)
    return states, steps


traces = st.tuples(processes(omega=True), st.randoms(use_true_random=False),
                   st.integers(0, 20))


@given(traces)
def test_unicity_disappearance_persistence(args):
    p, rnd, length = args
    states, steps = random_trace(label_term(p, ROOT), rnd, length)
    for e in states:
        ls = label_list(e)
        assert len(ls) == len(set(ls))                     # unicity
        assert well_formed(e)
    for src, t in zip(states, steps):
        assert t.fired <= top_labels(src)                  # fired labels are on top
        assert not t.fired & all_labels(t.target)          # and disappear
    for i, e0 in enumerate(states):
        for k in range(i + 1, len(states)):
            both = all_labels(e0) & all_labels(states[k])
            for j in range(i + 1, k):
                assert both <= all_labels(states[j])       # persistence


@given(traces)
def test_conservativity(args):
    p, rnd, length = args
    states, _ = random_trace(label_term(p, ROOT), rnd, length)
    for e in states:
        labeled = sorted((str(t.action), pretty(unlabel(t.target))) for t in step(e))
        plain = sorted((str(t.action), pretty(t.target)) for t in step(unlabel(e)))
        assert labeled == plain


@given(processes(omega=True), labels)
def test_labels_extend_the_seed(p, seed):
    for v in all_labels(label_term(p, seed)):
        assert prefix_leq(seed.s, v.s) and seed.n <= v.n
    assert unlabel(label_term(p, seed)) == p


@given(processes(), processes(), labels, labels)
def test_top_conflict_freedom_extends_to_all_labels(p, q, v0, v1):
    e0, e1 = label_term(p, v0), label_term(q, v1)
    if conflict_free(top_labels(e0), top_labels(e1)):
        assert conflict_free(all_labels(e0), all_labels(e1))


@given(traces)
def test_successor_top_labels_extend_source_top_labels(args):
    p, rnd, length = args
    states, _ = random_trace(label_term(p, ROOT), rnd, length)
    for e, e2 in zip(states, states[1:]):
        for v in top_labels(e2):
            assert any(prefix_leq(u.s, v.s) and u.n <= v.n for u in top_labels(e))


@given(traces)
def test_live_labels(args):
    p, rnd, length = args
    states, _ = random_trace(label_term(p, ROOT), rnd, length, tau_only=True)
    for e in states:
        live = live_labels(e)
        assert live == live_labels_by_rules(e)
        assert live <= top_labels(e)
        if not tau_steps(e):
            assert live == frozenset()


@settings(max_examples=60)
@given(traces, st.integers(1, 10))
def test_fired_label_is_never_live_again(args, suffix):
    p, rnd, length = args
    states, steps = random_trace(label_term(p, ROOT), rnd, length + suffix, tau_only=True)
    for i, t in enumerate(steps):
        for later in states[i + 1:]:
            assert not t.fired & live_labels(later)
