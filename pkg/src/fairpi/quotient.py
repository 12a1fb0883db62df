"""Labeled state graphs modulo relabeling, used to search for fair
unsuccessful computations and to prove their absence.

Nodes are inert-normalized labeled terms identified up to relabeling; the
first term reaching a node becomes its representative, and node *roles* are
the labels of that representative.  Each edge records which roles it fires
and where the surviving roles of its source land in its target.

With ``saturation=K`` the graph abstracts multiplicities: a group of more
than ``K`` top-level components of identical shape is truncated to ``K``
copies and flagged as "``K`` or more".  When a flagged group loses copies,
every possible remaining count is generated.  The abstract graph simulates
the concrete one on roles that no symmetry can move (see
:func:`~fairpi.fairness.rigid_labels`), which is all the fairness proof
uses.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, groupby, islice, product
from typing import Optional

import networkx as nx

from .fairness import (LassoCertificate, close_lasso, match_up_to_relabeling, normalize_inert,
                       rigid_labels, selector_for, validate_certificate)
from .labeling import all_labels, relabel
from .semantics import live_labels, omega_enabled, tau_steps
from .syntax import Label, Process, components, par, pretty

DEFAULT_QCAP = 5_000
DEFAULT_SATURATION = 3


class QuotientCapExceeded(RuntimeError):
    def __init__(self, cap, graph):
        super().__init__(f"quotient cap of {cap} nodes exceeded")
        self.cap = cap
        self.graph = graph


@dataclass
class QNode:
    rep: Process
    key: str
    live: frozenset
    success: bool
    rigid: frozenset
    saturated: frozenset = frozenset()
    expanded: bool = False


@dataclass(frozen=True)
class QEdge:
    src: int
    dst: int
    fired: frozenset
    roles: tuple          # sorted (source role, target role) pairs of survivors

    @property
    def role_map(self) -> dict:
        return dict(self.roles)


@dataclass
class QuotientGraph:
    start: Process
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    out: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    saturation: Optional[int] = None

    @property
    def complete(self) -> bool:
        return all(n.expanded for n in self.nodes)

    def __len__(self):
        return len(self.nodes)

    def to_json(self) -> dict:
        return {
            "nodes": [{"id": i, "term": pretty(n.rep), "success": n.success,
                       "live": sorted(map(str, n.live)),
                       "saturated": sorted(n.saturated)} for i, n in enumerate(self.nodes)],
            "edges": [{"src": e.src, "dst": e.dst, "fired": sorted(map(str, e.fired)),
                       "roles": [[str(a), str(b)] for a, b in e.roles]} for e in self.edges],
        }


def _shape(c):
    return pretty(c, labels=False)


def _node_key(term, saturated):
    key = _shape(term)
    return key + "".join(f" [{g}]+" for g in sorted(saturated))


def _clone(c, taken):
    # same component with labels nobody else uses
    mapping = {}
    for v in all_labels(c):
        i = 1
        while Label(f"{v.s}~{i}", v.n) in taken:
            i += 1
        mapping[v] = Label(f"{v.s}~{i}", v.n)
        taken.add(mapping[v])
    return relabel(c, mapping)


def _saturate(term, src_saturated, templates, k):
    """Abstract ``term`` (canonical, normalized) given the flagged groups of
    its source; ``templates`` holds one component per flagged group.
    Returns a list of ``(term, flags)`` covering every concrete count."""
    groups = {key: list(g) for key, g in groupby(components(term), _shape)}
    taken = set(all_labels(term))
    per_group = []
    for key in sorted(set(groups) | set(src_saturated)):
        g = groups.get(key, [])
        if key in src_saturated and len(g) < k:
            # the source stood for k or more copies, so any count from
            # len(g) upwards is possible
            base = g[0] if g else templates[key]
            opts = [(g + [_clone(base, taken) for _ in range(count - len(g))], count == k)
                    for count in range(len(g), k + 1)]
        elif key in src_saturated or len(g) > k:
            opts = [(g[:k], True)]
        else:
            opts = [(g, False)]
        per_group.append(opts)
    out = []
    for choice in product(*per_group):
        cs, flags = [], set()
        for members, sat in choice:
            cs += members
            if sat:
                flags.add(_shape(members[0]))
        out.append((par(*cs), frozenset(flags)))
    return out


def build_quotient_graph(s: Process, cap: int = DEFAULT_QCAP, saturation: Optional[int] = None,
                         stop_at_success: bool = True, partial: bool = False) -> QuotientGraph:
    """Breadth-first quotient of the labeled experiment ``s``.

    omega-enabled nodes are not expanded unless ``stop_at_success`` is off.
    On overflow :class:`QuotientCapExceeded` carries the partial graph, or it
    is returned directly when ``partial`` is set.
    """
    g = QuotientGraph(s, saturation=saturation)

    def intern(term, flags):
        key = _node_key(term, flags)
        n = g.index.get(key)
        if n is not None:
            return n, False
        n = len(g.nodes)
        g.index[key] = n
        g.nodes.append(QNode(term, key, live_labels(term), omega_enabled(term),
                             rigid_labels(term), flags))
        g.out.append([])
        return n, True

    start, _ = normalize_inert(s)
    if saturation:
        variants = _saturate(start, frozenset(), {}, saturation)
    else:
        variants = [(start, frozenset())]
    intern(*variants[0])
    todo = deque([0])
    while todo:
        u = todo.popleft()
        node = g.nodes[u]
        if stop_at_success and node.success:
            node.expanded = True
            continue
        seen_edges = set()
        for tr in tau_steps(node.rep):
            target, _ = normalize_inert(tr.target)
            if saturation:
                templates = {_shape(c): c for c in components(node.rep)}
                variants = _saturate(target, node.saturated, templates, saturation)
            else:
                variants = [(target, frozenset())]
            for term, flags in variants:
                key = _node_key(term, flags)
                if key not in g.index and len(g.nodes) >= cap:
                    if partial:
                        return g
                    raise QuotientCapExceeded(cap, g)
                v, new = intern(term, flags)
                if new:
                    todo.append(v)
                sigma = match_up_to_relabeling(term, g.nodes[v].rep)
                roles = tuple(sorted((r, sigma[r]) for r in all_labels(node.rep)
                                     if r not in tr.fired and r in sigma))
                edge = QEdge(u, v, tr.fired, roles)
                if edge in seen_edges:
                    continue
                seen_edges.add(edge)
                g.edges.append(edge)
                g.out[u].append(len(g.edges) - 1)
        node.expanded = True
    return g


# ---------------------------------------------------------------- concrete witnesses

def _path_to(g: QuotientGraph, target: int) -> Optional[list]:
    """Shortest edge path from the start node to ``target`` avoiding success."""
    parent = {0: None}
    todo = deque([0])
    while todo:
        u = todo.popleft()
        if u == target:
            break
        if g.nodes[u].success:
            continue
        for ei in g.out[u]:
            v = g.edges[ei].dst
            if v not in parent:
                parent[v] = ei
                todo.append(v)
    if target not in parent:
        return None
    path = []
    v = target
    while parent[v] is not None:
        ei = parent[v]
        path.append(ei)
        v = g.edges[ei].src
    return path[::-1]


def _replay_edges(g: QuotientGraph, state: Process, edge_ids: list):
    """Follow ``edge_ids`` concretely from ``state``; returns (selectors, states)."""
    selectors, states = [], [state]
    for ei in edge_ids:
        e = g.edges[ei]
        norm, _ = normalize_inert(state)
        mu = match_up_to_relabeling(norm, g.nodes[e.src].rep)
        if mu is None:
            return None
        inv = {b: a for a, b in mu.items()}
        want = frozenset(inv[v] for v in e.fired)
        trs = tau_steps(state)
        pick = None
        for k, t in enumerate(trs):
            if t.fired == want and _node_key(normalize_inert(t.target)[0], frozenset()) == g.nodes[e.dst].key:
                pick = k
                break
        if pick is None:
            return None
        selectors.append(selector_for(trs, pick))
        state = trs[pick].target
        states.append(state)
    return selectors, states


def concretize(g: QuotientGraph, prefix: list, loop: list) -> Optional[LassoCertificate]:
    """Concrete certificate following quotient edges ``prefix`` then ``loop``."""
    r = _replay_edges(g, g.start, prefix + loop)
    if r is None:
        return None
    selectors, states = r
    p = len(prefix)
    if not loop:
        return LassoCertificate(g.start, selectors, [])
    sigma = close_lasso(states[p], states[-1])
    if sigma is None:
        return None
    dead = set()
    for st in states[p:]:
        dead |= normalize_inert(st)[1]
    return LassoCertificate(g.start, selectors[:p], selectors[p:], sigma, frozenset(dead))


def _unsuccessful_digraph(g: QuotientGraph) -> nx.MultiDiGraph:
    d = nx.MultiDiGraph()
    for i, n in enumerate(g.nodes):
        if not n.success and n.expanded:
            d.add_node(i)
    for ei, e in enumerate(g.edges):
        if e.src in d and e.dst in d:
            d.add_edge(e.src, e.dst, key=ei)
    return d


def _edge_cycles(g, d, node_cycle, limit):
    choices = []
    for a, b in zip(node_cycle, node_cycle[1:] + node_cycle[:1]):
        choices.append(sorted(d[a][b]))
    return [list(c) for c in islice(product(*choices), limit)]


def _rotate(cycle, g, node):
    for i, ei in enumerate(cycle):
        if g.edges[ei].src == node:
            return cycle[i:] + cycle[:i]
    return None


@dataclass
class SearchResult:
    certificate: Optional[LassoCertificate] = None
    fairness: Optional[object] = None
    cycles_examined: int = 0
    exhausted: bool = True


def find_fair_violation(g: QuotientGraph, mode: str, cap_cycles: int = 2000,
                        max_compose: int = 3) -> SearchResult:
    """Look for a validated unsuccessful fair computation in a concrete
    quotient graph: an unsuccessful deadlock, or a cycle (or a composition
    of up to ``max_compose`` simple cycles through a common node)."""
    res = SearchResult()
    for i, n in enumerate(g.nodes):
        if n.expanded and not n.success and not g.out[i]:
            path = _path_to(g, i)
            if path is None:
                continue
            cert = concretize(g, path, [])
            if cert is not None:
                fr = validate_certificate(cert, mode)
                if fr.accepted:
                    res.certificate, res.fairness = cert, fr
                    return res

    d = _unsuccessful_digraph(g)
    simple = []
    for node_cycle in islice(nx.simple_cycles(nx.DiGraph(d)), cap_cycles):
        simple += _edge_cycles(g, d, node_cycle, 8)
        if len(simple) >= cap_cycles:
            res.exhausted = False
            break
    simple.sort(key=lambda c: (len(c), c))

    def attempt(loop):
        res.cycles_examined += 1
        node = g.edges[loop[0]].src
        prefix = _path_to(g, node)
        if prefix is None:
            return False
        cert = concretize(g, prefix, loop)
        if cert is None:
            return False
        fr = validate_certificate(cert, mode)
        if fr.accepted:
            res.certificate, res.fairness = cert, fr
            return True
        return False

    for c in simple:
        if res.cycles_examined >= cap_cycles:
            res.exhausted = False
            return res
        if attempt(c):
            return res
    for size in range(2, max_compose + 1):
        for combo in _compositions(g, simple, size):
            if res.cycles_examined >= cap_cycles:
                res.exhausted = False
                return res
            if attempt(combo):
                return res
    return res


def _compositions(g, simple, size):
    by_node = {}
    for idx, c in enumerate(simple):
        for ei in c:
            by_node.setdefault(g.edges[ei].src, []).append(idx)
    seen = set()
    for node in sorted(by_node):
        idxs = sorted(set(by_node[node]))
        for pick in _combos(idxs, size):
            if pick in seen:
                continue
            seen.add(pick)
            loop = []
            for idx in pick:
                loop += _rotate(simple[idx], g, node)
            yield loop


def _combos(idxs, size):
    return combinations(idxs, size)


# ---------------------------------------------------------------- fairness proofs

def _sccs(nodes, g, edge_ok):
    d = nx.DiGraph()
    d.add_nodes_from(nodes)
    internal = {}
    for ei, e in enumerate(g.edges):
        if e.src in nodes and e.dst in nodes and edge_ok(ei):
            d.add_edge(e.src, e.dst)
    for comp in nx.strongly_connected_components(d):
        comp = frozenset(comp)
        edges = [ei for ei, e in enumerate(g.edges)
                 if e.src in comp and e.dst in comp and edge_ok(ei)]
        if edges:
            internal[comp] = edges
    return internal


def _fixed_roles(g, comp, edges):
    roles = None
    for n in comp:
        r = g.nodes[n].rigid
        roles = set(r) if roles is None else roles & r
    for ei in edges:
        m = g.edges[ei].role_map
        roles = {r for r in roles if m.get(r) == r}
    return roles or set()


def prove_no_fair_violation(g: QuotientGraph, mode: str):
    """Try to show that no fair maximal computation avoids success.

    Works on a complete (possibly saturated) graph.  Returns ``(True, info)``
    when every unsuccessful strongly connected region is ruled out, and
    ``(False, reason)`` otherwise.
    """
    if not g.complete:
        return False, "quotient graph not fully explored"
    bad = [i for i, n in enumerate(g.nodes) if not n.success and not g.out[i]]
    if bad:
        return False, f"unsuccessful deadlock at node {bad[0]}"
    alive = {i for i, n in enumerate(g.nodes) if not n.success}
    everything = lambda ei: True
    rounds = 0
    while True:
        rounds += 1
        sccs = _sccs(alive, g, everything)
        if not sccs:
            return True, {"refinement_rounds": rounds}
        changed = False
        for comp, edges in sorted(sccs.items(), key=lambda kv: sorted(kv[0])):
            fixed = _fixed_roles(g, comp, edges)
            if mode == "strong":
                kill = {n for n in comp if g.nodes[n].live & fixed}
                if kill:
                    alive -= kill
                    changed = True
            else:
                if any(all(r in g.nodes[n].live for n in comp) for r in fixed):
                    alive -= comp
                    changed = True
        if not changed:
            comp = sorted(min(sccs, key=lambda c: sorted(c)))
            return False, f"cannot rule out the unsuccessful cycle through nodes {comp[:8]}"
