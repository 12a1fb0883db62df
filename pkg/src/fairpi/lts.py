"""Canonical tau-graphs of unlabeled experiments, weak reachability and
export to DOT/JSON."""
from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field

from .semantics import (BOUT, IN, OUT, TAU, Action, BoundOutput, FreeInput, FreeOutput,
                        OMEGA_ACTION, TAU_ACTION, commitments, has_transitions, input_candidates,
                        omega_enabled, step, synchronize)
from .syntax import (CanonicalForm, Process, canonical_components, canonical_term, components,
                     par, pretty, sibling_key)

__all__ = ["Action", "BoundOutput", "FreeInput", "FreeOutput", "TAU_ACTION", "OMEGA_ACTION",
           "CapExceeded", "StateGraph", "build_state_graph", "weak_reach", "weak_step", "can_report",
           "prune_inert", "step", "DEFAULT_CAP"]

DEFAULT_CAP = 50_000


class CapExceeded(RuntimeError):
    """Raised when exploration would exceed ``cap`` nodes.  ``graph`` holds
    the partial exploration (frontier nodes have ``expanded`` False)."""

    def __init__(self, cap, graph=None):
        super().__init__(f"state cap of {cap} nodes exceeded")
        self.cap = cap
        self.graph = graph


def prune_inert(p: Process) -> Process:
    """Canonical form of ``p`` without top-level components that have no
    transitions at all.  Such components can never take part in a step, so
    removing them preserves every transition of the rest."""
    comps = [c for c in components(canonical_term(p)) if has_transitions(c)]
    return par(*comps)


def tau_targets(p: Process) -> list:
    """Targets of the tau transitions of ``p``, one per distinct way of
    choosing the moving top-level components.

    Copies of the same component give the same targets, so each distinct
    component (and each distinct input/output pair of components) is tried
    once.  The result agrees with :func:`~fairpi.semantics.tau_steps` up to
    canonical form.
    """
    comps = components(p)
    counts = Counter(comps)
    distinct = list(counts)
    commits = {c: commitments(c) for c in distinct}

    def without(*drop):
        rest = list(comps)
        for d in drop:
            rest.remove(d)
        return rest

    out = []
    for c in distinct:
        taus = [k for k in commits[c] if k.kind == TAU]
        if taus:
            rest = without(c)
            out += [par(*rest, k.residual) for k in taus]
    for c in distinct:
        ins = [k for k in commits[c] if k.kind == IN]
        if not ins:
            continue
        for d in distinct:
            if d == c and counts[c] < 2:
                continue
            outs = [k for k in commits[d] if k.kind in (OUT, BOUT)]
            pairs = [(a, b) for a in ins for b in outs if a.subj == b.subj]
            if pairs:
                rest = without(c, d)
                out += [par(*rest, synchronize(a, b, c, True).residual) for a, b in pairs]
    return out


class _Forms:
    """Read-only list of node canonical forms, built from the component
    multisets on first access."""

    def __init__(self, states):
        self._states = states
        self._cache = {}

    def __len__(self):
        return len(self._states)

    def __getitem__(self, n):
        if n < 0:
            n += len(self._states)
        cf = self._cache.get(n)
        if cf is None:
            term = par(*(c for c, k in self._states[n] for _ in range(k)))
            cf = self._cache[n] = CanonicalForm(term, pretty(term))
        return cf

    def __iter__(self):
        return (self[n] for n in range(len(self)))


@dataclass
class StateGraph:
    states: list                    # node id -> sorted ((component, count), ...)
    tau_edges: list                 # node id -> sorted distinct successor ids
    success: list                   # node id -> omega enabled
    expanded: list                  # node id -> successors computed
    cap: int
    start: int = 0
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.nodes = _Forms(self.states)

    @property
    def complete(self) -> bool:
        return all(self.expanded)

    def __len__(self):
        return len(self.states)

    def successors(self, n: int) -> list:
        return self.tau_edges[n]

    def edge_count(self) -> int:
        return sum(len(e) for e in self.tau_edges)

    def term(self, n: int) -> Process:
        return self.nodes[n].term

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "start": self.start,
            "complete": self.complete,
            "nodes": [{"id": i, "term": cf.key, "success": self.success[i]}
                      for i, cf in enumerate(self.nodes)],
            "edges": [[i, j] for i, succ in enumerate(self.tau_edges) for j in succ],
        }

    def to_dot(self) -> str:
        lines = ["digraph lts {", "  rankdir=LR;"]
        for i, cf in enumerate(self.nodes):
            shape = "doublecircle" if self.success[i] else "circle"
            label = json.dumps(f"{i}: {cf.key}")
            lines.append(f"  n{i} [shape={shape}, label={label}];")
        for i, succ in enumerate(self.tau_edges):
            for j in succ:
                lines.append(f"  n{i} -> n{j} [label=\"tau\"];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _state(counts: Counter) -> tuple:
    return tuple(sorted(((c, k) for c, k in counts.items() if k > 0),
                        key=lambda ck: sibling_key(ck[0])))


def _state_successors(state: tuple, split) -> list:
    """Successor states of a component multiset; each distinct moving
    component, or pair of components, is tried once."""
    counts = Counter(dict(state))
    commits = {c: commitments(c) for c, _ in state}

    def moved(drop, residual):
        nxt = counts.copy()
        for d in drop:
            nxt[d] -= 1
        nxt.update(split(residual))
        return _state(nxt)

    out = []
    for c, _ in state:
        out += [moved((c,), k.residual) for k in commits[c] if k.kind == TAU]
    for c, _ in state:
        ins = [k for k in commits[c] if k.kind == IN]
        if not ins:
            continue
        for d, _ in state:
            if d == c and counts[c] < 2:
                continue
            outs = [k for k in commits[d] if k.kind in (OUT, BOUT)]
            out += [moved((c, d), synchronize(a, b, c, True).residual)
                    for a in ins for b in outs if a.subj == b.subj]
    return out


def build_state_graph(experiment: Process, cap: int = DEFAULT_CAP, prune: bool = True,
                      partial: bool = False, stop_at_success: bool = False) -> StateGraph:
    """Breadth-first canonical tau-graph of ``experiment``.

    Nodes are multisets of canonical top-level components.  With ``prune``
    (the default) inert components are dropped from every node.  When more
    than ``cap`` nodes would be needed, :class:`CapExceeded` is raised
    carrying the partial graph, unless ``partial`` is set, in which case the
    partial graph is returned.  ``stop_at_success`` leaves omega-enabled
    nodes unexpanded (marked expanded, no edges); an enabled omega is never
    consumed by a tau step, so everything below such a node is successful
    too.
    """
    def split(term):
        comps = canonical_components(term)
        return [c for c in comps if has_transitions(c)] if prune else comps

    g = StateGraph([], [], [], [], cap)

    def intern(state):
        n = len(g.states)
        g.index[state] = n
        g.states.append(state)
        g.tau_edges.append([])
        g.success.append(any(omega_enabled(c) for c, _ in state))
        g.expanded.append(False)
        return n

    intern(_state(Counter(split(experiment))))
    todo = deque([0])
    while todo:
        n = todo.popleft()
        if stop_at_success and g.success[n]:
            g.expanded[n] = True
            continue
        succ = set()
        for target in _state_successors(g.states[n], split):
            m = g.index.get(target)
            if m is None:
                if len(g.states) >= cap:
                    if partial:
                        return g
                    raise CapExceeded(cap, g)
                m = intern(target)
                todo.append(m)
            succ.add(m)
        g.tau_edges[n] = sorted(succ)
        g.expanded[n] = True
    return g


def weak_reach(p: Process, cap: int = DEFAULT_CAP) -> set:
    """Canonical terms reachable from ``p`` by zero or more tau steps."""
    g = build_state_graph(p, cap, prune=False)
    return {cf.term for cf in g.nodes}


def weak_step(p: Process, action: Action, cap: int = DEFAULT_CAP) -> set:
    """Canonical terms ``q`` with ``p`` weakly reaching ``q`` by ``action``:
    tau steps, one ``action`` step, tau steps.  Inputs are instantiated with
    the free names of ``p`` plus a fresh one."""
    if action.kind == TAU:
        return weak_reach(p, cap)
    cands = input_candidates(p, action.fn)
    out = set()
    for r in weak_reach(p, cap):
        for t in step(r, cands):
            if t.action == action:
                out |= weak_reach(t.target, cap)
    return out


def can_report(p: Process, cap: int = DEFAULT_CAP) -> bool:
    """Whether some tau-descendant of ``p`` has an omega transition."""
    g = build_state_graph(p, cap, prune=False)
    return any(g.success)
