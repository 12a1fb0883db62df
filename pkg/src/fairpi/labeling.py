"""Label algebra: the labeling function, top/all label sets, the conflict
relation on label sets, well-formedness and label erasure."""
from __future__ import annotations

from .syntax import Inp, Label, Nil, Omega, Out, Par, Process, Rep, Res, strip_labels

ROOT = Label("", 0)


def prefix_leq(s0: str, s1: str) -> bool:
    """True iff ``s0`` is a prefix of ``s1``."""
    return s1.startswith(s0)


def conflict_free(labels0, labels1) -> bool:
    """No label of one set has a position prefix-related to one of the other."""
    for a in labels0:
        for b in labels1:
            if prefix_leq(a.s, b.s) or prefix_leq(b.s, a.s):
                return False
    return True


def label_term(p: Process, seed: Label = ROOT) -> Process:
    s, n = seed.s, seed.n
    match p:
        case Nil():
            return p
        case Inp(chan, binder, body, _):
            return Inp(chan, binder, label_term(body, Label(s, n + 1)), seed)
        case Out(chan, obj, body, _):
            return Out(chan, obj, label_term(body, Label(s, n + 1)), seed)
        case Par(left, right):
            return Par(label_term(left, Label(s + "0", n)), label_term(right, Label(s + "1", n)))
        case Res(binder, body):
            return Res(binder, label_term(body, seed))
        case Rep(body, _):
            return Rep(strip_labels(body), seed)
        case Omega():
            # success prefixes stay unlabeled, continuation included
            return strip_labels(p)
    raise TypeError(p)


def unlabel(e: Process) -> Process:
    return strip_labels(e)


def top_labels(e: Process) -> frozenset:
    match e:
        case Inp(label=label) | Out(label=label) | Rep(label=label):
            return frozenset() if label is None else frozenset({label})
        case Par(left, right):
            return top_labels(left) | top_labels(right)
        case Res(body=body):
            return top_labels(body)
        case Nil() | Omega():
            return frozenset()
    raise TypeError(e)


def label_list(e: Process) -> list:
    """Every label occurrence in ``e``, duplicates kept."""
    match e:
        case Inp(body=body, label=label) | Out(body=body, label=label):
            return ([] if label is None else [label]) + label_list(body)
        case Rep(label=label):
            return [] if label is None else [label]
        case Par(left, right):
            return label_list(left) + label_list(right)
        case Res(body=body):
            return label_list(body)
        case Nil() | Omega():
            return []
    raise TypeError(e)


def all_labels(e: Process) -> frozenset:
    return frozenset(label_list(e))


def is_unlabeled(p: Process) -> bool:
    return strip_labels(p) == p


def well_formed(e: Process) -> bool:
    match e:
        case Nil():
            return True
        case Omega():
            return is_unlabeled(e)
        case Inp(label=label) | Out(label=label):
            return label is not None and label_term(strip_labels(e), label) == e
        case Rep(body, label):
            return label is not None and is_unlabeled(body)
        case Par(left, right):
            return (well_formed(left) and well_formed(right)
                    and conflict_free(top_labels(left), top_labels(right)))
        case Res(body=body):
            return well_formed(body)
    raise TypeError(e)


def relabel(e: Process, mapping) -> Process:
    """Apply ``mapping`` (Label -> Label) to every label of ``e``."""
    match e:
        case Nil() | Omega():
            return e
        case Inp(chan, binder, body, label):
            return Inp(chan, binder, relabel(body, mapping), mapping.get(label, label))
        case Out(chan, obj, body, label):
            return Out(chan, obj, relabel(body, mapping), mapping.get(label, label))
        case Rep(body, label):
            return Rep(body, mapping.get(label, label))
        case Par(left, right):
            return Par(relabel(left, mapping), relabel(right, mapping))
        case Res(binder, body):
            return Res(binder, relabel(body, mapping))
    raise TypeError(e)
