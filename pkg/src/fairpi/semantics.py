"""Early operational semantics, for plain and labeled terms alike.

Transitions are derived from *commitments*: the visible capabilities of a
term.  An input commitment keeps its binder as the free placeholder name
``%`` in the residual, so early instantiation and communication are both a
capture-avoiding substitution of the placeholder.  Replication on a labeled
node fires its label and relabels the spawned copy (the replication rule of
the labeled calculus); on a plain node it is the usual ``P' | !P`` unfolding.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional

from .labeling import label_term
from .syntax import (PLACEHOLDER, Inp, Label, Name, Nil, Omega, Out, Par, Process,
                     Rep, Res, fresh_name, free_names, substitute)

IN, OUT, BOUT, TAU, OMEGA = "in", "out", "bout", "tau", "omega"


@dataclass(frozen=True, order=True)
class Action:
    kind: str
    subj: Optional[Name] = None
    obj: Optional[Name] = None

    @property
    def fn(self) -> frozenset:
        if self.kind in (IN, OUT):
            return frozenset({self.subj, self.obj})
        if self.kind == BOUT:
            return frozenset({self.subj})
        return frozenset()

    @property
    def bn(self) -> frozenset:
        return frozenset({self.obj}) if self.kind == BOUT else frozenset()

    @property
    def visible(self) -> bool:
        return self.kind in (IN, OUT, BOUT)

    def __str__(self):
        match self.kind:
            case "in":
                return f"{self.subj}({self.obj})"
            case "out":
                return f"{self.subj}<{self.obj}>"
            case "bout":
                return f"{self.subj}<({self.obj})>"
            case "tau":
                return "tau"
        return "w"


TAU_ACTION = Action(TAU)
OMEGA_ACTION = Action(OMEGA)


def FreeInput(x, y):
    return Action(IN, x, y)


def FreeOutput(x, y):
    return Action(OUT, x, y)


def BoundOutput(x, y):
    return Action(BOUT, x, y)


@dataclass(frozen=True)
class Transition:
    action: Action
    target: Process
    fired: frozenset = field(default_factory=frozenset)

    def sort_key(self):
        # derivation order is already deterministic; the sort is stable
        return (self.action, tuple(sorted(self.fired)))


class _Commit(NamedTuple):
    kind: str
    subj: Optional[Name]
    obj: Optional[Name]
    residual: Process
    fired: tuple


def _rename_extruded(c: _Commit, avoid) -> _Commit:
    new = fresh_name(c.obj, avoid | free_names(c.residual) | {c.subj})
    return c._replace(obj=new, residual=substitute(c.residual, c.obj, new))


def _lift_par(c: _Commit, sibling: Process, left: bool) -> _Commit:
    if c.kind == BOUT and c.obj in free_names(sibling):
        c = _rename_extruded(c, free_names(sibling))
    res = Par(c.residual, sibling) if left else Par(sibling, c.residual)
    return c._replace(residual=res)


def synchronize(inp: _Commit, out: _Commit, inp_src: Process, inp_left: bool):
    fired = inp.fired + out.fired if inp_left else out.fired + inp.fired
    if out.kind == OUT:
        ri = substitute(inp.residual, PLACEHOLDER, out.obj)
        res = Par(ri, out.residual) if inp_left else Par(out.residual, ri)
        return _Commit(TAU, None, None, res, fired)
    avoid = (free_names(inp.residual) - {PLACEHOLDER}) | free_names(inp_src)
    if out.obj in avoid:
        out = _rename_extruded(out, avoid)
    y = out.obj
    ri = substitute(inp.residual, PLACEHOLDER, y)
    res = Par(ri, out.residual) if inp_left else Par(out.residual, ri)
    return _Commit(TAU, None, None, Res(y, res), fired)


@lru_cache(maxsize=100_000)
def commitments(p: Process) -> tuple:
    match p:
        case Nil():
            return ()
        case Inp(chan, binder, body, label):
            res = substitute(body, binder, PLACEHOLDER)
            return (_Commit(IN, chan, PLACEHOLDER, res, (label,) if label else ()),)
        case Out(chan, obj, body, label):
            return (_Commit(OUT, chan, obj, body, (label,) if label else ()),)
        case Omega(body):
            return (_Commit(OMEGA, None, None, body, ()),)
        case Res(y, body):
            out = []
            for c in commitments(body):
                if c.kind in (IN, OUT, BOUT) and c.subj == y:
                    continue
                if c.kind == OUT and c.obj == y:
                    out.append(c._replace(kind=BOUT))
                    continue
                if c.kind == BOUT and c.obj == y:
                    c = _rename_extruded(c, frozenset({y}))
                out.append(c._replace(residual=Res(y, c.residual)))
            return tuple(out)
        case Rep(body, label):
            out = []
            for c in commitments(body):
                if c.kind == BOUT and c.obj in free_names(p):
                    c = _rename_extruded(c, free_names(p))
                if label is None:
                    res = Par(c.residual, p)
                    fired = ()
                else:
                    res = Par(label_term(c.residual, Label(label.s + "0", label.n + 1)),
                              Rep(body, Label(label.s + "1", label.n + 1)))
                    fired = (label,)
                out.append(c._replace(residual=res, fired=fired))
            return tuple(out)
        case Par(left, right):
            lc, rc = commitments(left), commitments(right)
            out = [_lift_par(c, right, True) for c in lc]
            out += [_lift_par(c, left, False) for c in rc]
            for a in lc:
                for b in rc:
                    if a.kind == IN and b.kind in (OUT, BOUT) and a.subj == b.subj:
                        out.append(synchronize(a, b, left, True))
                    elif b.kind == IN and a.kind in (OUT, BOUT) and a.subj == b.subj:
                        out.append(synchronize(b, a, right, False))
            return tuple(out)
    raise TypeError(p)


def input_candidates(p: Process, extra=()) -> frozenset:
    """Free names of ``p`` (plus ``extra``) and one fresh name."""
    known = free_names(p) | frozenset(extra)
    return known | {fresh_name("v", known)}


def step(p: Process, candidates=None) -> list:
    """All one-step transitions of ``p``, sorted deterministically.

    Input binders are instantiated with each name in ``candidates``
    (default :func:`input_candidates`).  Works on labeled terms too, in which
    case each transition records the labels fired by its derivation.
    """
    commits = commitments(p)
    if candidates is None and any(c.kind == IN for c in commits):
        candidates = input_candidates(p)
    out = []
    for c in commits:
        fired = frozenset(c.fired)
        if c.kind == IN:
            for z in sorted(candidates):
                out.append(Transition(Action(IN, c.subj, z),
                                      substitute(c.residual, PLACEHOLDER, z), fired))
        else:
            out.append(Transition(Action(c.kind, c.subj, c.obj), c.residual, fired))
    out.sort(key=Transition.sort_key)
    return out


def tau_steps(p: Process) -> list:
    return [Transition(TAU_ACTION, c.residual, frozenset(c.fired))
            for c in commitments(p) if c.kind == TAU]


def omega_enabled(p: Process) -> bool:
    return any(c.kind == OMEGA for c in commitments(p))


def has_transitions(p: Process) -> bool:
    return bool(commitments(p))


def labeled_step(e: Process, candidates=None) -> list:
    """Transitions of a labeled term with their fired label sets."""
    return step(e, candidates)


def live_labels(e: Process) -> frozenset:
    """Labels fired by some tau-transition of ``e``."""
    out = set()
    for c in commitments(e):
        if c.kind == TAU:
            out.update(c.fired)
    return frozenset(out)
