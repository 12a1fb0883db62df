"""Fair computations of labeled experiments.

A computation is a sequence of tau steps of a labeled term.  Infinite
computations are represented by lasso certificates: a replayable prefix and
loop whose end state equals the loop start up to relabeling, once inert
components are dropped.  :func:`validate_certificate` replays a certificate
and classifies the infinite computation it denotes.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import groupby
from typing import Callable, Optional

from .labeling import all_labels, label_list, relabel
from .parse import parse_labeled
from .semantics import Transition, has_transitions, live_labels, omega_enabled, tau_steps
from .syntax import (Inp, Label, Nil, Omega, Out, Par, Process, Rep, Res, canonical_term,
                     components, par, pretty)

STRONG_FAIR, WEAK_FAIR_ONLY, UNFAIR, REJECTED = "StrongFair", "WeakFairOnly", "Unfair", "Rejected"
ORBIT_CAP = 64
CERT_SCHEMA = 1


# ---------------------------------------------------------------- normal forms

def normalize_inert(e: Process):
    """Drop top-level components with no transitions of any kind.

    Returns ``(term, dead)`` where ``term`` is canonical and ``dead`` holds
    the labels of the removed components.
    """
    kept, dead = [], set()
    for c in components(canonical_term(e)):
        if has_transitions(c):
            kept.append(c)
        else:
            dead.update(label_list(c))
    return par(*kept), frozenset(dead)


def shape_key(e: Process) -> str:
    """Label-erased canonical text; equal keys mean equal up to relabeling."""
    return pretty(canonical_term(e), labels=False)


def _erased(c):
    return pretty(c, labels=False)


def _align(t1, t2, pinned, acc) -> bool:
    # t1, t2 canonical with identical erased text
    match t1:
        case Nil() | Omega():
            return True
        case Inp() | Out():
            if t1.label is not None:
                if t1.label in pinned and t2.label != t1.label:
                    return False
                if t2.label in pinned and t2.label != t1.label:
                    return False
                acc[t1.label] = t2.label
            return _align(t1.body, t2.body, pinned, acc)
        case Rep():
            if t1.label is not None:
                if (t1.label in pinned or t2.label in pinned) and t1.label != t2.label:
                    return False
                acc[t1.label] = t2.label
            return True
        case Res():
            return _align(t1.body, t2.body, pinned, acc)
        case Par():
            c1 = components(t1)
            c2 = components(t2)
            for (_, g1), (_, g2) in zip(groupby(c1, _erased), groupby(c2, _erased)):
                if not _pair_group(list(g1), list(g2), pinned, acc):
                    return False
            return True
    raise TypeError(t1)


def _pair_group(g1, g2, pinned, acc) -> bool:
    free = list(g2)
    # identical components pair with themselves first
    exact = {}
    for j, c2 in enumerate(free):
        exact.setdefault(c2, []).append(j)
    used, rest = set(), []
    for c1 in g1:
        js = [j for j in exact.get(c1, []) if j not in used]
        if js:
            used.add(js[0])
            _align(c1, c1, pinned, acc)
        else:
            rest.append(c1)
    free = [c2 for j, c2 in enumerate(free) if j not in used]
    for c1 in rest:
        best, best_score, best_j = None, -1, None
        for j, c2 in enumerate(free):
            m = {}
            if not _align(c1, c2, pinned, m):
                continue
            score = sum(1 for a, b in m.items() if a == b)
            if score > best_score:
                best, best_score, best_j = m, score, j
        if best is None:
            return False
        acc.update(best)
        free.pop(best_j)
    return True


def match_up_to_relabeling(e1: Process, e2: Process, pinned=frozenset()) -> Optional[dict]:
    """A label bijection ``labels(e1) -> labels(e2)`` under which ``e1``
    becomes canonically equal to ``e2``, or ``None``.

    Identical sibling shapes are paired greedily so that as many labels as
    possible map to themselves; ``pinned`` labels must map to themselves.
    """
    t1, t2 = canonical_term(e1), canonical_term(e2)
    if _erased(t1) != _erased(t2):
        return None
    acc = {}
    if not _align(t1, t2, frozenset(pinned), acc):
        return None
    return acc


def rigid_labels(e: Process) -> frozenset:
    """Labels that every relabeling isomorphism of ``e`` onto a term of the
    same shape must send to the same position: those not inside any of
    several sibling components with identical shape."""
    out = set()

    def walk(t):
        match t:
            case Inp() | Out():
                if t.label is not None:
                    out.add(t.label)
                walk(t.body)
            case Rep():
                if t.label is not None:
                    out.add(t.label)
            case Res():
                walk(t.body)
            case Par():
                for _, grp in groupby(components(t), _erased):
                    grp = list(grp)
                    if len(grp) == 1:
                        walk(grp[0])

    walk(canonical_term(e))
    return frozenset(out)


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class StepSelector:
    """Selects a tau transition: the ``index``-th among those firing exactly
    ``fired`` (in derivation order)."""
    fired: tuple
    index: int = 0

    def to_json(self):
        return {"fired": [str(v) for v in self.fired], "index": self.index}

    @classmethod
    def from_json(cls, d):
        return cls(tuple(sorted(Label.parse(v) for v in d["fired"])), int(d.get("index", 0)))


def selector_for(transitions: list, k: int) -> StepSelector:
    fired = transitions[k].fired
    same = [i for i, t in enumerate(transitions) if t.fired == fired]
    return StepSelector(tuple(sorted(fired)), same.index(k))


def apply_selector(state: Process, sel: StepSelector) -> Transition:
    want = frozenset(sel.fired)
    same = [t for t in tau_steps(state) if t.fired == want]
    if sel.index >= len(same):
        raise ValueError(f"no tau transition firing {{{', '.join(map(str, sel.fired))}}} "
                         f"with index {sel.index}")
    return same[sel.index]


@dataclass
class LassoCertificate:
    """Finite witness of a maximal computation.

    ``loop`` empty means a finite computation ending in a tau-free state.
    Otherwise ``survivor_map`` sends each label of the normalized loop start
    to the label at the same position in the normalized loop end.
    """
    start: Process
    prefix: list
    loop: list
    survivor_map: dict = field(default_factory=dict)
    dead_labels: frozenset = frozenset()

    @property
    def finite(self) -> bool:
        return not self.loop

    def to_json(self) -> dict:
        return {
            "schema": CERT_SCHEMA,
            "kind": "finite" if self.finite else "lasso",
            "start": pretty(self.start),
            "prefix": [s.to_json() for s in self.prefix],
            "loop": [s.to_json() for s in self.loop],
            "survivor_map": [[str(a), str(b)] for a, b in sorted(self.survivor_map.items())],
            "dead_labels": sorted(str(v) for v in self.dead_labels),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "LassoCertificate":
        if d.get("schema") != CERT_SCHEMA:
            raise ValueError(f"unsupported certificate schema {d.get('schema')!r}")
        return cls(
            start=parse_labeled(d["start"]),
            prefix=[StepSelector.from_json(s) for s in d["prefix"]],
            loop=[StepSelector.from_json(s) for s in d["loop"]],
            survivor_map={Label.parse(a): Label.parse(b) for a, b in d.get("survivor_map", [])},
            dead_labels=frozenset(Label.parse(v) for v in d.get("dead_labels", [])),
        )


@dataclass
class FairnessResult:
    cls: str
    reason: str = ""
    mode: str = "strong"
    diagnostics: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        """Whether the computation is fair in the requested mode."""
        if self.mode == "strong":
            return self.cls == STRONG_FAIR
        return self.cls in (STRONG_FAIR, WEAK_FAIR_ONLY)

    def to_json(self) -> dict:
        return {"class": self.cls, "mode": self.mode, "accepted": self.accepted,
                "reason": self.reason, "diagnostics": self.diagnostics}


def replay(start: Process, selectors: list) -> list:
    """States visited by applying ``selectors`` from ``start``."""
    states = [start]
    for sel in selectors:
        states.append(apply_selector(states[-1], sel).target)
    return states


def close_lasso(loop_start: Process, loop_end: Process) -> Optional[dict]:
    """Survivor map between two loop ends, or ``None`` if they differ in shape."""
    n0, _ = normalize_inert(loop_start)
    n1, _ = normalize_inert(loop_end)
    return match_up_to_relabeling(n0, n1)


def _orbits(f: dict):
    """Cycles of the partial injection ``f``."""
    seen, cycles = set(), []
    for r in sorted(f):
        if r in seen:
            continue
        path, x = [], r
        while x in f and x not in seen and x not in path:
            path.append(x)
            x = f[x]
        seen.update(path)
        if x in path:
            cycles.append(path[path.index(x):])
    return cycles


def validate_certificate(cert: LassoCertificate, mode: str = "strong",
                         require_unsuccessful: bool = True) -> FairnessResult:
    """Replay ``cert`` and classify the computation it denotes.

    The loop denotes infinitely many iterations; iteration ``k+1`` is
    iteration ``k`` relabeled through the survivor map.  A label that
    persists forever therefore cycles through an orbit of loop-start labels
    that survive the loop.  Such a label is never fired, so the computation
    is strong-fair iff no orbit label is live at any loop state, and
    weak-fair iff every orbit has a label that is non-live at some loop
    state.  Every other label is fired or becomes dead within finitely many
    iterations.
    """
    def rejected(reason, **diag):
        return FairnessResult(REJECTED, reason, mode, diag)

    try:
        states = replay(cert.start, list(cert.prefix) + list(cert.loop))
    except ValueError as exc:
        return rejected(f"replay failed: {exc}")
    dead = set()
    for i, st in enumerate(states):
        leaked = live_labels(st) & dead
        if leaked:
            return rejected(f"label of a removed inert component is live at state {i}",
                            labels=sorted(map(str, leaked)))
        dead |= normalize_inert(st)[1]
    if require_unsuccessful:
        hits = [i for i, s in enumerate(states) if omega_enabled(s)]
        if hits:
            return rejected(f"state {hits[0]} is omega-enabled", success_states=hits)

    if cert.finite:
        if tau_steps(states[-1]):
            return rejected("finite computation ends in a state with tau transitions")
        return FairnessResult(STRONG_FAIR, "finite maximal computation", mode,
                              {"length": len(states) - 1})

    p = len(cert.prefix)
    loop_states = states[p:-1]
    n0, dead0 = normalize_inert(states[p])
    n1, dead1 = normalize_inert(states[-1])
    sigma = dict(cert.survivor_map)
    lab0, lab1 = all_labels(n0), all_labels(n1)
    if set(sigma) != set(lab0) or set(sigma.values()) != set(lab1):
        return rejected("survivor map is not a bijection between the normalized loop ends")
    if canonical_term(relabel(n0, sigma)) != canonical_term(n1):
        return rejected("loop end does not recur under the survivor map")

    # the label at position r of the loop end sits at loop-start position inv[r]
    inv = {b: a for a, b in sigma.items()}
    f = {r: inv[r] for r in lab0 if r in lab1}
    orbits = _orbits(f)
    period = 1
    for o in orbits:
        period = math.lcm(period, len(o))
    if period > ORBIT_CAP:
        return rejected(f"orbit period {period} exceeds cap {ORBIT_CAP}")

    live = [live_labels(s) for s in loop_states]
    periodic = sorted({r for o in orbits for r in o})
    always_dead = [r for r in periodic if not any(r in lv for lv in live)]
    diag = {
        "prefix_length": p,
        "loop_length": len(cert.loop),
        "period": period,
        "orbits": [[str(r) for r in o] for o in orbits],
        "live_survivors": sorted(str(r) for r in periodic if r not in always_dead),
        "live_sets": [sorted(map(str, lv)) for lv in live],
    }
    if len(always_dead) == len(periodic):
        return FairnessResult(STRONG_FAIR, "no persistent label is ever live on the loop",
                              mode, diag)
    stuck = [o for o in orbits if all(r in lv for r in o for lv in live)]
    if not stuck:
        return FairnessResult(WEAK_FAIR_ONLY,
                              "persistent labels are live infinitely often, never continuously",
                              mode, diag)
    diag["continuously_live"] = [[str(r) for r in o] for o in stuck]
    return FairnessResult(UNFAIR, "some persistent label is live forever", mode, diag)


# ---------------------------------------------------------------- schedulers

@dataclass
class Computation:
    start: Process
    steps: list                        # Transition per step
    states: list                       # len(steps) + 1 states
    selectors: list
    maximal: bool = False              # ended in a tau-free state
    truncated: bool = False            # stopped by max_steps
    success_index: Optional[int] = None
    lasso: Optional[LassoCertificate] = None
    lasso_class: Optional[FairnessResult] = None

    def to_json(self) -> dict:
        return {
            "start": pretty(self.start),
            "steps": [{"fired": sorted(map(str, t.fired)), "target": pretty(t.target)}
                      for t in self.steps],
            "maximal": self.maximal,
            "truncated": self.truncated,
            "success_index": self.success_index,
            "lasso": self.lasso.to_json() if self.lasso else None,
            "lasso_class": self.lasso_class.to_json() if self.lasso_class else None,
        }


class _QueuePolicy:
    """Serve the oldest queued live label.

    With ``keep_idle`` a queued label that is momentarily not live keeps
    waiting at the back of the queue (strong fairness); otherwise it leaves
    the queue and re-enters at the back when it becomes live again.
    """

    def __init__(self, keep_idle: bool, avoid=frozenset()):
        self.keep_idle = keep_idle
        self.avoid = frozenset(avoid)
        self.queue = []

    def __call__(self, state, transitions, history):
        live = live_labels(state)
        present = all_labels(state)
        self.queue = [v for v in self.queue if v in present]
        if not self.keep_idle:
            self.queue = [v for v in self.queue if v in live]
        queued = set(self.queue)
        self.queue += sorted(v for v in live if v not in queued)
        rank = {v: i for i, v in enumerate(self.queue)}
        skipped = []
        for v in self.queue:
            if v not in live:
                skipped.append(v)
                continue
            cands = [i for i, t in enumerate(transitions)
                     if v in t.fired and not (t.fired & self.avoid)]
            if not cands:
                continue
            k = min(cands, key=lambda i: (max(rank.get(w, len(rank)) for w in transitions[i].fired), i))
            fired = transitions[k].fired
            rest = [w for w in self.queue if w not in fired and w not in skipped]
            self.queue = rest + skipped
            return k
        allowed = [i for i, t in enumerate(transitions) if not (t.fired & self.avoid)]
        return allowed[0] if allowed else 0


def strong_fair_queue():
    return _QueuePolicy(keep_idle=True)


def weak_fair_round_robin():
    return _QueuePolicy(keep_idle=False)


def avoiding(labels, keep_idle: bool = True):
    """Queue scheduler that never fires ``labels`` unless nothing else can
    move: an adversary starving those labels."""
    return _QueuePolicy(keep_idle, avoid=labels)


POLICIES = {"strong": strong_fair_queue, "roundrobin": weak_fair_round_robin}


def run_scheduler(s: Process, policy="strong", max_steps: int = 200,
                  stop_at_success: bool = True, detect_lasso: bool = True,
                  lasso_mode: Optional[str] = None) -> Computation:
    """Run ``policy`` from ``s`` for at most ``max_steps`` tau steps.

    ``policy`` is ``"strong"``, ``"roundrobin"`` or a selector
    ``f(state, transitions, history) -> index``.  With ``detect_lasso``, each
    time a state recurs up to relabeling (after inert removal) the candidate
    loop is validated, and the run stops at the first loop that is fair in
    ``lasso_mode`` (strong for the strong queue, weak otherwise).
    """
    if isinstance(policy, str):
        mode = lasso_mode or ("strong" if policy == "strong" else "weak")
        select: Callable = POLICIES[policy]()
    else:
        mode = lasso_mode or "strong"
        select = policy
    comp = Computation(s, [], [s], [])
    seen = {}
    state = s
    for i in range(max_steps + 1):
        if omega_enabled(state) and comp.success_index is None:
            comp.success_index = i
            if stop_at_success:
                return comp
        if detect_lasso and comp.success_index is None:
            key = shape_key(normalize_inert(state)[0])
            for j in reversed(seen.get(key, [])):
                cert = _lasso_from(comp, j, i)
                if cert is None:
                    continue
                res = validate_certificate(cert, mode)
                if res.accepted:
                    comp.lasso, comp.lasso_class = cert, res
                    return comp
            seen.setdefault(key, []).append(i)
        transitions = tau_steps(state)
        if not transitions:
            comp.maximal = True
            return comp
        if i == max_steps:
            comp.truncated = True
            return comp
        k = select(state, transitions, comp)
        comp.selectors.append(selector_for(transitions, k))
        comp.steps.append(transitions[k])
        state = transitions[k].target
        comp.states.append(state)
    return comp


def _lasso_from(comp: Computation, j: int, i: int) -> Optional[LassoCertificate]:
    if i == j:
        return None
    sigma = close_lasso(comp.states[j], comp.states[i])
    if sigma is None:
        return None
    dead = set()
    for st in comp.states[j:i + 1]:
        dead |= normalize_inert(st)[1]
    return LassoCertificate(comp.start, comp.selectors[:j], comp.selectors[j:i], sigma,
                            frozenset(dead))
