import pytest
from hypothesis import given, settings, strategies as st

from conftest import processes
from fairpi.parse import ParseError, parse_process
from fairpi.semantics import BOUT, BoundOutput, step
from fairpi.syntax import (NIL, Inp, Omega, Out, Par, Rep, Res, alpha_equivalent, bound_names,
                           canonical_term, canonicalize, fresh_name, free_names, pretty,
                           substitute)

P = parse_process


# ---------------------------------------------------------------- parsing

def test_parse_parallel_prefixes():
    assert P("a<b>.0 | a(x).0") == Par(Out("a", "b", NIL), Inp("a", "x", NIL))


def test_parse_restricted_replication():
    assert P("(nu b)(b<y> | !b(x).b<x>)") == Res(
        "b", Par(Out("b", "y", NIL), Rep(Inp("b", "x", Out("b", "x", NIL)))))


def test_parse_error_offset():
    with pytest.raises(ParseError) as err:
        P("a(")
    assert err.value.offset == 2


def test_trailing_nil_optional_and_comments():
    assert P("a<b> # comment\n") == P("a<b>.0")


def test_success_prefix_needs_observer_flag():
    with pytest.raises(ParseError):
        P("a(x).w")
    assert P("a(x).w", observer=True) == Inp("a", "x", Omega(NIL))


def test_binding_precedence():
    # prefix binds tighter than replication, which binds tighter than par
    assert P("!a(x).b<x> | c<c>") == Par(Rep(Inp("a", "x", Out("b", "x", NIL))),
                                         Out("c", "c", NIL))


# ---------------------------------------------------------------- names

def test_substitute_total():
    assert substitute(Out("y", "y", NIL), "y", "z") == Out("z", "z", NIL)


def test_substitute_avoids_capture():
    assert substitute(Res("z", Out("y", "z", NIL)), "y", "z") == Res("z'", Out("z", "z'", NIL))


def test_substitute_stops_at_binder():
    p = Inp("a", "y", Out("y", "y", NIL))
    assert substitute(p, "y", "z") == p


def test_free_and_bound_names():
    assert free_names(P("a(x).x<b>.0")) == {"a", "b"}
    assert free_names(P("(nu a)(a<b>)")) == {"b"}
    assert bound_names(NIL) == frozenset()


def test_fresh_name_avoids():
    assert fresh_name("z", {"z", "z'"}) == "z''"


# ---------------------------------------------------------------- canonical forms

def test_canonical_drops_nil():
    assert canonicalize(Par(NIL, Out("a", "b", NIL))) == canonicalize(Out("a", "b", NIL))


def test_canonical_drops_unused_restriction():
    assert canonicalize(Res("x", Out("a", "b", NIL))) == canonicalize(Out("a", "b", NIL))


def test_canonical_commutes_par():
    p, q = P("a(x).x<b>"), P("(nu c)(c<c> | c(y))")
    assert canonicalize(Par(p, q)) == canonicalize(Par(q, p))


def test_canonical_alpha_and_scope():
    assert alpha_equivalent(P("(nu b)(b<u> | a<c>)"), P("a<c> | (nu d)d<u>"))
    assert canonicalize(P("a(x).x<x>")).key == "a(_0)._0<_0>"


@given(processes(omega=True))
def test_pretty_round_trips(p):
    assert parse_process(pretty(p), observer=True) == p


@given(processes())
def test_canonicalize_idempotent(p):
    cf = canonicalize(p)
    assert canonicalize(cf.term) == cf
    assert canonical_term(cf.term) == cf.term


@given(processes(), st.sampled_from("abcxy"), st.sampled_from("abcxyz"))
def test_substitution_never_captures(p, x, z):
    assert free_names(substitute(p, x, z)) <= (free_names(p) - {x}) | {z}


@given(processes())
def test_alpha_renaming_preserves_canonical_form(p):
    # renaming a restriction binder to a fresh name is invisible
    q = Res("n0", substitute(p, "a", "n0"))
    r = Res("n1", substitute(p, "a", "n1"))
    assert canonicalize(q) == canonicalize(r)


# ---------------------------------------------------------------- behaviour

def transition_tree(p, k, names, fresh):
    """Actions reachable in at most ``k`` moves, as a nested frozenset."""
    if k == 0:
        return frozenset()
    out = set()
    for t in step(p, names | {fresh}):
        action, target = t.action, t.target
        if action.kind == BOUT and action.obj != fresh:
            target = substitute(target, action.obj, fresh)
            action = BoundOutput(action.subj, fresh)
        out.add((action, transition_tree(target, k - 1, names, fresh)))
    return frozenset(out)


@settings(max_examples=60)
@given(processes(depth=3, width=3), st.integers(1, 4))
def test_canonical_form_has_same_transition_tree(p, k):
    names = free_names(p)
    fresh = fresh_name("v", names)
    assert transition_tree(p, k, names, fresh) == transition_tree(canonical_term(p), k, names,
                                                                  fresh)
