"""Abstract syntax for choiceless pi-calculus processes and observers.

One family of frozen dataclasses serves both plain and labeled terms: prefix
and replication nodes carry an optional :class:`Label`.  A plain process has
every label set to ``None``.
"""
from __future__ import annotations

import hashlib
import re
import weakref
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

Name = str


class _Interned(type):
    """Hash-consing: constructing a term equal to a live one returns the
    existing object, so equality of terms is almost always identity."""
    _table = weakref.WeakValueDictionary()

    def __call__(cls, *args, **kwargs):
        obj = super().__call__(*args, **kwargs)
        return _Interned._table.setdefault(obj, obj)


class _Term(metaclass=_Interned):
    """Shared behaviour of the AST node classes.

    Terms are built bottom-up and never mutated, so the hash and the free
    names of a node are computed once from those of its children.  Equality
    is iterative, so very wide parallel compositions do not hit the
    recursion limit.
    """
    _fields = ()

    def __post_init__(self):
        h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self._fields))
        object.__setattr__(self, "_hash", h)
        object.__setattr__(self, "_fn", _local_free_names(self))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        stack = [(self, other)]
        while stack:
            x, y = stack.pop()
            if x is y:
                continue
            if type(x) is not type(y) or x._hash != y._hash:
                return False
            for f in x._fields:
                u, v = getattr(x, f), getattr(y, f)
                if isinstance(u, _Term):
                    stack.append((u, v))
                elif u != v:
                    return False
        return True

    def __ne__(self, other):
        return not self == other


# Placeholder for the binder of an input commitment; the tokenizer never
# produces it, so it cannot clash with a user name.
PLACEHOLDER: Name = "%"


@dataclass(frozen=True, order=True)
class Label:
    s: str
    n: int

    def __str__(self):
        return f"{self.s},{self.n}"

    @classmethod
    def parse(cls, text: str) -> "Label":
        s, _, n = text.partition(",")
        if not re.fullmatch(r"[01]*", s) or not n.isdigit():
            raise ValueError(f"bad label {text!r}")
        return cls(s, int(n))


@dataclass(frozen=True, eq=False)
class Nil(_Term):
    pass


@dataclass(frozen=True, eq=False)
class Inp(_Term):
    chan: Name
    binder: Name
    body: "Process"
    label: Optional[Label] = None
    _fields = ('chan', 'binder', 'body', 'label')


@dataclass(frozen=True, eq=False)
class Out(_Term):
    chan: Name
    obj: Name
    body: "Process"
    label: Optional[Label] = None
    _fields = ('chan', 'obj', 'body', 'label')


@dataclass(frozen=True, eq=False)
class Par(_Term):
    left: "Process"
    right: "Process"
    _fields = ('left', 'right')


@dataclass(frozen=True, eq=False)
class Res(_Term):
    binder: Name
    body: "Process"
    _fields = ('binder', 'body')


@dataclass(frozen=True, eq=False)
class Rep(_Term):
    body: "Process"
    label: Optional[Label] = None
    _fields = ('body', 'label')


@dataclass(frozen=True, eq=False)
class Omega(_Term):
    body: "Process"
    _fields = ('body',)


Process = Union[Nil, Inp, Out, Par, Res, Rep, Omega]


def par(*procs: Process) -> Process:
    """Left-nested parallel composition of ``procs``; ``0`` when empty."""
    procs = [p for p in procs]
    if not procs:
        return NIL
    acc = procs[0]
    for p in procs[1:]:
        acc = Par(acc, p)
    return acc


def components(p: Process) -> list:
    """Flatten nested ``Par`` nodes, dropping ``0``."""
    out = []
    stack = [p]
    while stack:
        q = stack.pop()
        if isinstance(q, Par):
            stack.append(q.right)
            stack.append(q.left)
        elif not isinstance(q, Nil):
            out.append(q)
    return out


# ---------------------------------------------------------------- names

def _local_free_names(p) -> frozenset:
    match p:
        case Nil():
            return frozenset()
        case Inp(chan, binder, body, _):
            return frozenset({chan}) | (body._fn - {binder})
        case Out(chan, obj, body, _):
            return frozenset({chan, obj}) | body._fn
        case Par(left, right):
            return left._fn | right._fn
        case Res(binder, body):
            return body._fn - {binder}
        case Rep(body, _) | Omega(body):
            return body._fn
    raise TypeError(p)


def free_names(p: Process) -> frozenset:
    return p._fn


NIL = Nil()


@lru_cache(maxsize=200_000)
def bound_names(p: Process) -> frozenset:
    match p:
        case Nil():
            return frozenset()
        case Inp(_, binder, body, _):
            return frozenset({binder}) | bound_names(body)
        case Res(binder, body):
            return frozenset({binder}) | bound_names(body)
        case Out(_, _, body, _) | Rep(body, _) | Omega(body):
            return bound_names(body)
        case Par(left, right):
            return bound_names(left) | bound_names(right)
    raise TypeError(p)


def names(p: Process) -> frozenset:
    return free_names(p) | bound_names(p)


def fresh_name(base: Name, avoid) -> Name:
    """Return ``base`` decorated with primes so that it is not in ``avoid``."""
    root = base.rstrip("'") if base != PLACEHOLDER else "v"
    cand = root + "'"
    while cand in avoid:
        cand += "'"
    return cand


# ---------------------------------------------------------------- substitution

def substitute(p: Process, target: Name, replacement: Name) -> Process:
    """Capture-avoiding ``p{replacement/target}``."""
    if target == replacement or target not in free_names(p):
        return p
    return _subst(p, target, replacement)


def _subst(p, x, z):
    # invariant: x is free in p
    match p:
        case Inp(chan, binder, body, label):
            chan = z if chan == x else chan
            if binder == x:
                return Inp(chan, binder, body, label)
            if binder == z and x in free_names(body):
                fresh = fresh_name(binder, free_names(body) | {x, z})
                body = _subst(body, binder, fresh) if binder in free_names(body) else body
                binder = fresh
            return Inp(chan, binder, substitute(body, x, z), label)
        case Out(chan, obj, body, label):
            return Out(z if chan == x else chan, z if obj == x else obj,
                       substitute(body, x, z), label)
        case Par(left, right):
            return Par(substitute(left, x, z), substitute(right, x, z))
        case Res(binder, body):
            if binder == z:
                fresh = fresh_name(binder, free_names(body) | {x, z})
                body = substitute(body, binder, fresh)
                binder = fresh
            return Res(binder, substitute(body, x, z))
        case Rep(body, label):
            return Rep(substitute(body, x, z), label)
        case Omega(body):
            return Omega(substitute(body, x, z))
        case Nil():
            return p
    raise TypeError(p)


# ---------------------------------------------------------------- labels

def strip_labels(p: Process) -> Process:
    match p:
        case Nil():
            return p
        case Inp(chan, binder, body, _):
            return Inp(chan, binder, strip_labels(body))
        case Out(chan, obj, body, _):
            return Out(chan, obj, strip_labels(body))
        case Par(left, right):
            return Par(strip_labels(left), strip_labels(right))
        case Res(binder, body):
            return Res(binder, strip_labels(body))
        case Rep(body, _):
            return Rep(strip_labels(body))
        case Omega(body):
            return Omega(strip_labels(body))
    raise TypeError(p)


def has_omega(p: Process) -> bool:
    match p:
        case Omega():
            return True
        case Nil():
            return False
        case Par(left, right):
            return has_omega(left) or has_omega(right)
        case Inp(body=body) | Out(body=body) | Res(body=body) | Rep(body=body):
            return has_omega(body)
    raise TypeError(p)


# ---------------------------------------------------------------- printing

_PAR, _UNARY = 0, 1


def pretty(p: Process, labels: bool = True) -> str:
    """Render ``p`` in the surface syntax accepted by :func:`parse_process`."""
    return _pp(p, _PAR, labels)


def _lab(label, labels):
    return f"@{label}" if labels and label is not None else ""


def _cont(body, labels):
    if isinstance(body, Nil):
        return ""
    return "." + _pp(body, _UNARY, labels)


@lru_cache(maxsize=200_000)
def _pp(p, level, labels):
    match p:
        case Nil():
            return "0"
        case Inp(chan, binder, body, label):
            return f"{chan}({binder}){_lab(label, labels)}{_cont(body, labels)}"
        case Out(chan, obj, body, label):
            return f"{chan}<{obj}>{_lab(label, labels)}{_cont(body, labels)}"
        case Omega(body):
            return "w" + _cont(body, labels)
        case Res(binder, body):
            return f"(nu {binder})" + _pp(body, _UNARY, labels)
        case Rep(body, label):
            inner = _pp(body, _UNARY, labels)
            lab = _lab(label, labels)
            return f"!{lab} {inner}" if lab and not inner.startswith("(") else f"!{lab}{inner}"
        case Par():
            # walk the left spine iteratively: long compositions are common
            rights = []
            while isinstance(p, Par):
                rights.append(p.right)
                p = p.left
            parts = [_pp(p, _PAR, labels)] + [_pp(r, _UNARY, labels) for r in reversed(rights)]
            text = " | ".join(parts)
            return text if level == _PAR else f"({text})"
    raise TypeError(p)


# ---------------------------------------------------------------- canonical form

@dataclass(frozen=True)
class CanonicalForm:
    term: Process
    key: str

    @property
    def digest(self) -> str:
        return hashlib.sha1(self.key.encode()).hexdigest()


def canonical_term(p: Process) -> Process:
    """Structural normal form: flattened and sorted parallel components, no
    ``0`` components, unused restrictions dropped, restriction scopes shrunk
    to the components that mention the binder, and binders renamed to
    depth-indexed names ``_0, _1, ...``.

    Labels are kept; sibling order sorts on the label-erased text first so that
    terms equal up to relabeling get aligned structures.
    """
    return _canonical_term(p)


def canonical_components(p: Process) -> tuple:
    """Canonical top-level components of ``p``, unsorted.  Sorting them by
    :func:`sibling_key` and composing gives :func:`canonical_term`."""
    return tuple(_canon_component(c) for c in _norm_list(p))


@lru_cache(maxsize=100_000)
def _canonical_term(p):
    comps = [_canon_component(c) for c in _norm_list(p)]
    comps.sort(key=sibling_key)
    return par(*comps)


@lru_cache(maxsize=200_000)
def _canon_component(c):
    return _canon(c, {}, 0)


def sibling_key(c):
    return (pretty(c, labels=False), pretty(c))


def canonicalize(p: Process) -> CanonicalForm:
    term = canonical_term(p)
    return CanonicalForm(term, pretty(term))


def erased_key(p: Process) -> str:
    """Canonical text of ``p`` with labels erased (``p`` assumed canonical)."""
    return pretty(p, labels=False)


@lru_cache(maxsize=200_000)
def _norm_list(p) -> tuple:
    match p:
        case Nil():
            return ()
        case Par():
            rights = []
            while isinstance(p, Par):
                rights.append(p.right)
                p = p.left
            out = list(_norm_list(p))
            for r in reversed(rights):
                out += _norm_list(r)
            return tuple(out)
        case Res(binder, body):
            comps = _norm_list(body)
            using = [c for c in comps if binder in free_names(c)]
            rest = [c for c in comps if binder not in free_names(c)]
            if not using:
                return tuple(rest)
            return tuple(rest) + (Res(binder, par(*using)),)
        case Inp(chan, binder, body, label):
            return (Inp(chan, binder, _norm(body), label),)
        case Out(chan, obj, body, label):
            return (Out(chan, obj, _norm(body), label),)
        case Rep(body, label):
            return (Rep(_norm(body), label),)
        case Omega(body):
            return (Omega(_norm(body)),)
    raise TypeError(p)


def _norm(p):
    return par(*_norm_list(p))


def _canon(p, env, depth):
    match p:
        case Nil():
            return p
        case Par():
            comps = [_canon(c, env, depth) for c in components(p)]
            comps.sort(key=sibling_key)
            return par(*comps)
        case Res(binder, body):
            new = f"_{depth}"
            return Res(new, _canon(body, {**env, binder: new}, depth + 1))
        case Inp(chan, binder, body, label):
            new = f"_{depth}"
            return Inp(env.get(chan, chan), new,
                       _canon(body, {**env, binder: new}, depth + 1), label)
        case Out(chan, obj, body, label):
            return Out(env.get(chan, chan), env.get(obj, obj), _canon(body, env, depth), label)
        case Rep(body, label):
            return Rep(_canon(body, env, depth), label)
        case Omega(body):
            return Omega(_canon(body, env, depth))
    raise TypeError(p)


def alpha_equivalent(p: Process, q: Process) -> bool:
    return canonicalize(p).key == canonicalize(q).key
