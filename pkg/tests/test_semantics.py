from hypothesis import given, settings

from conftest import processes
from fairpi.lts import tau_targets
from fairpi.parse import parse_process
from fairpi.semantics import (OMEGA_ACTION, TAU_ACTION, BoundOutput, FreeInput, FreeOutput,
                              input_candidates, omega_enabled, step, tau_steps)
from fairpi.syntax import NIL, Par, Rep, Inp, canonicalize, pretty, substitute

P = parse_process


def moves(p):
    return {(str(t.action), pretty(t.target)) for t in step(p)}


def test_com_passes_the_name():
    assert ("tau", "0 | b<c>") in moves(P("a<b>.0 | a(x).x<c>.0"))


def test_open_extrudes():
    assert moves(P("(nu y)(a<y>.0)")) == {("a<(y)>", "0")}


def test_replicated_input_one_move_per_candidate():
    p = P("!a(x).0")
    cands = input_candidates(p)
    assert cands == {"a", "v'"}
    assert {(t.action, t.target) for t in step(p)} == {
        (FreeInput("a", z), Par(NIL, Rep(Inp("a", "x", NIL)))) for z in cands}


def test_nil_has_no_moves():
    assert step(NIL) == []


def test_close_keeps_the_name_private():
    p = P("(nu c)a<c>.c<u> | a(x).x(y)")
    taus = [pretty(t.target) for t in tau_steps(p)]
    assert taus == ["(nu c)(c<u> | c(y))"]


def test_restriction_blocks_its_channel():
    assert step(P("(nu b)b(k)")) == []


def test_omega_move():
    assert [(t.action, t.target) for t in step(P("w", observer=True))] == [(OMEGA_ACTION, NIL)]
    assert OMEGA_ACTION.fn == OMEGA_ACTION.bn == frozenset()


def test_action_names():
    assert BoundOutput("x", "y").bn == {"y"}
    assert BoundOutput("x", "y").fn == {"x"}
    assert FreeOutput("x", "y").fn == {"x", "y"}
    assert FreeInput("x", "y").fn == {"x", "y"}
    assert TAU_ACTION.fn == TAU_ACTION.bn == frozenset()


@given(processes(omega=True))
def test_input_offers_are_finite_and_cover_candidates(p):
    inputs = [t for t in step(p) if t.action.kind == "in"]
    cands = input_candidates(p)
    assert all(t.action.obj in cands for t in inputs)


@given(processes())
def test_alpha_variants_step_alike(p):
    # equal canonical forms give equal step sets after canonicalizing targets
    q = canonicalize(p).term
    key = lambda r: {(t.action, canonicalize(t.target).key) for t in step(r, input_candidates(p))}
    assert key(p) == key(q)


@given(processes(omega=True))
def test_multiset_successors_agree_with_tau_steps(p):
    expected = {canonicalize(t.target).key for t in tau_steps(p)}
    assert {canonicalize(t).key for t in tau_targets(p)} == expected


@settings(max_examples=60)
@given(processes(omega=True))
def test_omega_survives_tau(p):
    # an enabled success prefix is never consumed by a tau step
    if omega_enabled(p):
        assert all(omega_enabled(t.target) for t in tau_steps(p))


def test_substituted_input_targets():
    p = P("a(x).x<x>")
    for t in step(p):
        assert t.target == substitute(P("x<x>"), "x", t.action.obj)
