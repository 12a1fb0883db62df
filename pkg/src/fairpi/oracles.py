"""Independent reference implementations used only to cross-check the main
code paths: a rule-based live-label predicate and brute-force must/fair
evaluation by explicit enumeration of maximal paths."""
from __future__ import annotations

from .labeling import label_term
from .syntax import Inp, Label, Nil, Omega, Out, Par, Rep, Res

_DUMMY = Label("", 0)


def _facts(e) -> set:
    """Derivable live facts: ('in', x, v), ('out', x, y, v), ('bout', x, v),
    ('tau', v) and, for unlabeled bodies, the same with ``v`` arbitrary."""
    match e:
        case Nil() | Omega():
            return set()
        case Inp(chan, _, _, label):
            return {("in", chan, label)}
        case Out(chan, obj, _, label):
            return {("out", chan, obj, label)}
        case Rep(body, label):
            # a replicated body moves iff some of its actions is derivable
            inner = _facts(label_term(body, _DUMMY))
            return {f[:-1] + (label,) for f in inner}
        case Res(y, body):
            out = set()
            for f in _facts(body):
                match f:
                    case ("tau", _):
                        out.add(f)
                    case ("in", x, v) if x != y:
                        out.add(f)
                    case ("out", x, z, v) if x != y:
                        out.add(("bout", x, v) if z == y else f)
                    case ("bout", x, v) if x != y:
                        out.add(f)
            return out
        case Par(left, right):
            lf, rf = _facts(left), _facts(right)
            out = lf | rf
            for a in lf:
                for b in rf:
                    for i, o in ((a, b), (b, a)):
                        if i[0] == "in" and o[0] in ("out", "bout") and i[1] == o[1]:
                            out.add(("tau", i[-1]))
                            out.add(("tau", o[-1]))
            return out
    raise TypeError(e)


def live_labels_by_rules(e) -> frozenset:
    return frozenset(f[-1] for f in _facts(e) if f[0] == "tau" and f[-1] is not None)


def maximal_paths(graph):
    """Yield every maximal path shape of a finite state graph as
    ``(nodes, kind)``; ``kind`` is 'deadlock' or 'lasso'.  Exponential."""
    succ = graph.successors

    def walk(path, on_path):
        last = path[-1]
        nxt = succ(last)
        if not nxt:
            yield list(path), "deadlock"
            return
        for m in sorted(set(nxt)):
            if m in on_path:
                yield list(path), "lasso"
            else:
                path.append(m)
                on_path.add(m)
                yield from walk(path, on_path)
                on_path.discard(m)
                path.pop()

    yield from walk([graph.start], {graph.start})


def brute_must(graph) -> bool:
    return all(any(graph.success[n] for n in path) for path, _ in maximal_paths(graph))


def brute_fair(graph) -> bool:
    def reaches_success(n):
        seen, todo = {n}, [n]
        while todo:
            m = todo.pop()
            if graph.success[m]:
                return True
            for k in graph.successors(m):
                if k not in seen:
                    seen.add(k)
                    todo.append(k)
        return False
    return all(reaches_success(n) for path, _ in maximal_paths(graph) for n in path)
