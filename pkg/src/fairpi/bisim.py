"""Strong early bisimilarity over the full action-labeled transition
relation: exact partition refinement on finite systems, k-step matching
otherwise."""
from __future__ import annotations

from collections import deque
from functools import lru_cache

from .semantics import BOUT, BoundOutput, step
from .syntax import Process, canonical_term, components, fresh_name, free_names, strip_labels, substitute

__all__ = ["check_bisim_bounded", "bisimilar_exact", "moves", "BISIM_CAP", "BISIM_WIDTH"]

# Exact refinement explores the full action-labeled system, whose states grow
# quickly on infinite-state terms; past this many states the k-step check is
# used instead.
BISIM_CAP = 256
# A reachable state with more parallel components than this is taken as a
# sign of unbounded growth, and the exact check gives up early.
BISIM_WIDTH = 24


def moves(p: Process, names: frozenset, fresh: str) -> frozenset:
    """Transitions of ``p`` as ``(action, canonical target)`` pairs.

    Inputs are instantiated with ``names`` and ``fresh``; bound-output
    objects are renamed to ``fresh`` so that alpha-equivalent extrusions
    give the same action.
    """
    out = set()
    for t in step(p, names | {fresh}):
        action, target = t.action, t.target
        if action.kind == BOUT and action.obj != fresh:
            target = substitute(target, action.obj, fresh)
            action = BoundOutput(action.subj, fresh)
        out.add((action, canonical_term(target)))
    return frozenset(out)


def _pair_names(p, q):
    names = free_names(p) | free_names(q)
    return names, fresh_name("v", names)


@lru_cache(maxsize=200_000)
def _k_bisim(p, q, k) -> bool:
    if k == 0 or p == q:
        return True
    names, fresh = _pair_names(p, q)
    mp, mq = moves(p, names, fresh), moves(q, names, fresh)
    if {a for a, _ in mp} != {a for a, _ in mq}:
        return False
    return (all(any(b == a and _k_bisim(p2, q2, k - 1) for b, q2 in mq) for a, p2 in mp)
            and all(any(b == a and _k_bisim(p2, q2, k - 1) for b, p2 in mp) for a, q2 in mq))


def bisimilar_exact(p: Process, q: Process, cap: int = BISIM_CAP):
    """Bisimilarity by partition refinement, or ``None`` when the joint
    reachable system exceeds ``cap`` states or a reachable state mentions the
    name reserved for fresh inputs and extrusions (so one global name would
    no longer stand for every fresh name)."""
    p, q = canonical_term(strip_labels(p)), canonical_term(strip_labels(q))
    names, fresh = _pair_names(p, q)
    # breadth-first, so that growing terms hit the cap while still small
    index, edges, todo = {p: 0, q: 1 if q != p else 0}, {}, deque([p, q])
    while todo:
        s = todo.popleft()
        n = index[s]
        if n in edges:
            continue
        if fresh in free_names(s) and s not in (p, q):
            return None
        if len(components(s)) > BISIM_WIDTH:
            return None
        edges[n] = []
        for action, target in moves(s, names, fresh):
            if target not in index:
                if len(index) >= cap:
                    return None
                index[target] = len(index)
                todo.append(target)
            edges[n].append((action, index[target]))
    block = {n: 0 for n in edges}
    while True:
        sigs = {n: (block[n], frozenset((a, block[m]) for a, m in edges[n])) for n in edges}
        ids = {}
        refined = {n: ids.setdefault(sig, len(ids)) for n, sig in sorted(sigs.items())}
        if len(ids) == len(set(block.values())):
            return refined[index[p]] == refined[index[q]]
        block = refined


def check_bisim_bounded(p: Process, q: Process, k: int, cap: int = BISIM_CAP) -> bool:
    """Whether ``p`` and ``q`` are bisimilar, decided exactly when both are
    finite-state within ``cap``, and otherwise up to depth ``k``: every
    sequence of at most ``k`` moves of one can be matched by the other."""
    exact = bisimilar_exact(p, q, cap)
    if exact is not None:
        return exact
    p, q = canonical_term(strip_labels(p)), canonical_term(strip_labels(q))
    return _k_bisim(p, q, k)
