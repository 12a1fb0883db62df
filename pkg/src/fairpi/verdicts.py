"""The four testing verdicts: must, fair, wfmust and sfmust.

must and fair are decided on the canonical tau-graph of the unlabeled
experiment.  wfmust and sfmust run on the labeled experiment: they use the
implications with must and fair, then a sound proof on the saturated
quotient graph, then a search for a validated fair unsuccessful
computation.  Anything else is reported as UNKNOWN.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional

from .fairness import LassoCertificate, run_scheduler, selector_for, validate_certificate
from .labeling import label_term
from .lts import DEFAULT_CAP, build_state_graph, prune_inert
from .quotient import (DEFAULT_QCAP, DEFAULT_SATURATION, build_quotient_graph,
                       find_fair_violation, prove_no_fair_violation)
from .semantics import tau_steps
from .syntax import Par, Process, canonicalize, strip_labels

HOLDS, VIOLATED, UNKNOWN = "HOLDS", "VIOLATED", "UNKNOWN"
VERDICT_SCHEMA = 1
PROPERTIES = ("must", "fair", "wfmust", "sfmust")


@dataclass
class Caps:
    nodes: int = DEFAULT_CAP
    steps: int = 200
    cycles: int = 2000
    quotient: int = DEFAULT_QCAP
    saturation: int = DEFAULT_SATURATION

    def to_json(self):
        return {"nodes": self.nodes, "steps": self.steps, "cycles": self.cycles,
                "quotient": self.quotient, "saturation": self.saturation}


@dataclass
class Verdict:
    property: str
    verdict: str
    reason: str = ""
    witness: Optional[dict] = None
    certificate: Optional[LassoCertificate] = None
    caps: Caps = field(default_factory=Caps)
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict == HOLDS

    def to_json(self) -> dict:
        out = {"schema": VERDICT_SCHEMA, "property": self.property, "verdict": self.verdict,
               "reason": self.reason, "caps": self.caps.to_json(),
               "stats": {"nodes": 0, "edges": 0, "cycles_examined": 0, "wall_time": None,
                         **self.stats}}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def experiment(p: Process, o: Process) -> Process:
    return Par(p, o)


# ---------------------------------------------------------------- unlabeled graphs

def _graphs(exp, cap):
    """Partial graphs of growing size, ending with one of at most ``cap`` nodes."""
    size = 64
    while True:
        size = min(size, cap)
        g = build_state_graph(exp, size, partial=True, stop_at_success=True)
        yield g, g.complete or size >= cap
        if g.complete or size >= cap:
            return
        size *= 8


def _bfs_parents(g, sources=None):
    parent = {g.start: None}
    todo = deque([g.start])
    while todo:
        u = todo.popleft()
        if g.success[u]:
            continue
        for v in g.successors(u):
            if v not in parent:
                parent[v] = u
                todo.append(v)
    return parent


def _path(parent, n):
    out = []
    while n is not None:
        out.append(n)
        n = parent[n]
    return out[::-1]


def _unsuccessful_lasso(g):
    """Shortest path to a deadlock or a cycle avoiding success, using only
    fully expanded nodes."""
    parent = _bfs_parents(g)
    order = list(parent)
    ok = {n for n in order if not g.success[n] and g.expanded[n]}
    for n in order:
        if n in ok and not g.successors(n):
            return "deadlock", _path(parent, n), []
    # cycle detection restricted to ok nodes, iterative DFS
    color = {}
    for root in order:
        if root not in ok or root in color:
            continue
        stack = [(root, iter(g.successors(root)))]
        color[root] = 1
        trail = [root]
        while stack:
            u, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[u] = 2
                stack.pop()
                trail.pop()
                continue
            if nxt not in ok:
                continue
            if color.get(nxt) == 1:
                loop = trail[trail.index(nxt):]
                return "cycle", _path(parent, nxt), loop
            if nxt not in color:
                color[nxt] = 1
                trail.append(nxt)
                stack.append((nxt, iter(g.successors(nxt))))
    return None


def _stuck_node(g):
    """A reachable node from which success is provably unreachable."""
    can = {n for n in range(len(g)) if g.success[n]}
    preds = {n: [] for n in range(len(g))}
    for u in range(len(g)):
        for v in g.successors(u):
            preds[v].append(u)
    todo = deque(can)
    while todo:
        v = todo.popleft()
        for u in preds[v]:
            if u not in can:
                can.add(u)
                todo.append(u)
    parent = _bfs_parents(g)
    for n in parent:
        if n in can:
            continue
        seen, todo, closed = {n}, [n], True
        while todo:
            u = todo.pop()
            if not g.expanded[u]:
                closed = False
                break
            for v in g.successors(u):
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        if closed:
            return n, _path(parent, n)
    return None


def _terms(g, nodes):
    return [g.nodes[n].key for n in nodes]


def _stats(g, **extra):
    return {"nodes": len(g), "edges": g.edge_count(), **extra}


def check_must(p: Process, o: Process, cap: int = DEFAULT_CAP, caps: Optional[Caps] = None,
               timing: bool = False) -> Verdict:
    """Every maximal computation of ``p | o`` reaches an omega-enabled state."""
    caps = caps or Caps(nodes=cap)
    t0 = time.perf_counter()
    for g, last in _graphs(experiment(p, o), caps.nodes):
        found = _unsuccessful_lasso(g)
        if found:
            kind, trace, loop = found
            v = Verdict("must", VIOLATED, f"unsuccessful maximal computation ({kind})",
                        {"kind": kind, "trace": _terms(g, trace), "loop": _terms(g, loop)},
                        caps=caps, stats=_stats(g))
            break
        if g.complete:
            v = Verdict("must", HOLDS, "every maximal computation reaches success",
                        caps=caps, stats=_stats(g))
            break
        if last:
            v = Verdict("must", UNKNOWN, f"state cap of {caps.nodes} nodes reached",
                        caps=caps, stats=_stats(g))
            break
    if timing:
        v.stats["wall_time"] = round(time.perf_counter() - t0, 6)
    return v


def check_fair(p: Process, o: Process, cap: int = DEFAULT_CAP, caps: Optional[Caps] = None,
               timing: bool = False) -> Verdict:
    """Every state reachable from ``p | o`` can still reach success."""
    caps = caps or Caps(nodes=cap)
    t0 = time.perf_counter()
    for g, last in _graphs(experiment(p, o), caps.nodes):
        found = _stuck_node(g)
        if found:
            n, trace = found
            v = Verdict("fair", VIOLATED, "a reachable state cannot reach success",
                        {"kind": "stuck", "trace": _terms(g, trace), "loop": []},
                        caps=caps, stats=_stats(g))
            break
        if g.complete:
            v = Verdict("fair", HOLDS, "every reachable state can reach success",
                        caps=caps, stats=_stats(g))
            break
        if last:
            v = Verdict("fair", UNKNOWN, f"state cap of {caps.nodes} nodes reached",
                        caps=caps, stats=_stats(g))
            break
    if timing:
        v.stats["wall_time"] = round(time.perf_counter() - t0, 6)
    return v


def revalidate_trace(p: Process, o: Process, witness: dict) -> bool:
    """Check an unlabeled must/fair witness step by step."""
    def key(t):
        return canonicalize(prune_inert(t)).key
    states = witness["trace"] + witness["loop"][1:] + witness["loop"][:1]
    start = key(experiment(p, o))
    if not states or states[0] != start:
        return False
    from .parse import parse_observer
    for a, b in zip(states, states[1:]):
        succ = {key(t.target) for t in tau_steps(parse_observer(a))}
        if b not in succ:
            return False
    last = parse_observer(states[-1])
    if witness["kind"] == "deadlock":
        return not tau_steps(last)
    return True


# ---------------------------------------------------------------- fair must variants

def _labeled_path(s: Process, g, nodes):
    """Selectors following unlabeled graph ``nodes`` from labeled ``s``."""
    state, selectors = s, []
    for nxt in nodes[1:]:
        want = g.nodes[nxt].key
        trs = tau_steps(state)
        k = next((i for i, t in enumerate(trs)
                  if canonicalize(prune_inert(strip_labels(t.target))).key == want), None)
        if k is None:
            return None, None
        selectors.append(selector_for(trs, k))
        state = trs[k].target
    return selectors, state


def _witness_from_stuck(s, g, trace, mode, caps):
    selectors, state = _labeled_path(s, g, trace)
    if selectors is None:
        return None
    comp = run_scheduler(state, "strong", caps.steps, lasso_mode=mode)
    if comp.success_index is not None:
        return None
    if comp.maximal:
        cert = LassoCertificate(s, selectors + comp.selectors, [])
    elif comp.lasso is not None:
        lasso = comp.lasso
        cert = LassoCertificate(s, selectors + lasso.prefix, lasso.loop, lasso.survivor_map,
                                lasso.dead_labels)
    else:
        return None
    res = validate_certificate(cert, mode)
    return (cert, res) if res.accepted else None


SHORTCUT_NODES = 2048


def _check_fair_must(prop, mode, p, o, caps, timing):
    t0 = time.perf_counter()
    stats = {}

    def done(verdict, reason, cert=None, fairness=None):
        v = Verdict(prop, verdict, reason, certificate=cert, caps=caps, stats=stats)
        if fairness is not None:
            v.witness = {"kind": "finite" if cert.finite else "lasso",
                         "fairness": fairness.to_json()}
        if timing:
            v.stats["wall_time"] = round(time.perf_counter() - t0, 6)
        return v

    # The unlabeled checks are only shortcuts here; the quotient stages
    # decide the remaining cases, so they run under a smaller node budget.
    short = replace(caps, nodes=min(caps.nodes, SHORTCUT_NODES))
    must = check_must(p, o, caps=short)
    stats.update(nodes=must.stats["nodes"], edges=must.stats["edges"])
    if must.verdict == HOLDS:
        return done(HOLDS, "must holds, and it implies the fair variants")

    s = label_term(experiment(p, o))
    fair = check_fair(p, o, caps=short)
    if fair.verdict == VIOLATED:
        g = build_state_graph(experiment(p, o), short.nodes, partial=True, stop_at_success=True)
        found = _stuck_node(g)
        if found:
            w = _witness_from_stuck(s, g, found[1], mode, caps)
            if w:
                return done(VIOLATED, "fair fails; extended to a fair unsuccessful computation",
                            *w)

    sat = build_quotient_graph(s, caps.quotient, saturation=caps.saturation, partial=True)
    stats.update(quotient_nodes=len(sat), quotient_edges=len(sat.edges))
    proved, info = prove_no_fair_violation(sat, mode)
    if proved:
        return done(HOLDS, f"no {mode}-fair unsuccessful computation (saturated quotient, "
                           f"{len(sat)} nodes)")

    examined = 0
    size = 16
    exhausted_reason = info
    while True:
        size = min(size, caps.quotient)
        q = build_quotient_graph(s, size, partial=True)
        r = find_fair_violation(q, mode, caps.cycles)
        examined += r.cycles_examined
        stats["cycles_examined"] = examined
        if r.certificate is not None:
            return done(VIOLATED, f"{mode}-fair unsuccessful computation found",
                        r.certificate, r.fairness)
        if q.complete or size >= caps.quotient or examined >= caps.cycles:
            break
        size *= 4
    return done(UNKNOWN, f"undecided within caps: {exhausted_reason}")


def check_sfmust(p: Process, o: Process, caps: Optional[Caps] = None, timing: bool = False):
    """Every strong-fair maximal computation of ``p | o`` reaches success."""
    return _check_fair_must("sfmust", "strong", p, o, caps or Caps(), timing)


def check_wfmust(p: Process, o: Process, caps: Optional[Caps] = None, timing: bool = False):
    """Every weak-fair maximal computation of ``p | o`` reaches success."""
    return _check_fair_must("wfmust", "weak", p, o, caps or Caps(), timing)


def check(prop: str, p: Process, o: Process, caps: Optional[Caps] = None,
          timing: bool = False) -> Verdict:
    caps = caps or Caps()
    match prop:
        case "must":
            return check_must(p, o, caps=caps, timing=timing)
        case "fair":
            return check_fair(p, o, caps=caps, timing=timing)
        case "wfmust":
            return check_wfmust(p, o, caps, timing)
        case "sfmust":
            return check_sfmust(p, o, caps, timing)
    raise ValueError(f"unknown property {prop!r}")
