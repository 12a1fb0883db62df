"""Seeded random processes and observers for property-based checks."""
from __future__ import annotations

import random

from .syntax import NIL, Inp, Omega, Out, Process, Rep, Res, par

__all__ = ["random_process", "random_observer", "random_experiments", "random_interacting",
           "NAMES"]

NAMES = ("a", "b", "c")


def random_process(rng: random.Random, depth: int = 5, width: int = 4, names=NAMES,
                   replication: float = 0.15, omega: bool = False) -> Process:
    """A random process of nesting depth at most ``depth`` whose parallel
    compositions have at most ``width`` branches.  Input binders are drawn
    from ``x``/``y``; with ``omega`` success prefixes may appear."""
    vars_ = ("x", "y")

    def gen(d, bound):
        pool = list(names) + list(bound)
        if d <= 0:
            return NIL
        r = rng.random()
        if r < 0.12:
            return NIL
        if r < 0.37:
            x = rng.choice(vars_)
            return Inp(rng.choice(pool), x, gen(d - 1, bound | {x}))
        if r < 0.62:
            return Out(rng.choice(pool), rng.choice(pool), gen(d - 1, bound))
        if r < 0.77:
            return par(*(gen(d - 1, bound) for _ in range(rng.randint(2, width))))
        if r < 0.77 + replication:
            return Rep(gen(d - 1, bound))
        if omega and r < 0.95:
            return Omega(gen(d - 1, bound))
        return Res(rng.choice(names), gen(d - 1, bound))

    return gen(depth, frozenset())


def random_observer(rng: random.Random, depth: int = 3, names=NAMES) -> Process:
    """A small replication-free observer that contains a success prefix."""
    body = Omega(NIL)
    for _ in range(rng.randint(0, depth - 1)):
        chan = rng.choice(names)
        body = Inp(chan, "z", body) if rng.random() < 0.5 else Out(chan, rng.choice(names), body)
    extra = random_process(rng, depth=2, width=2, names=names, replication=0.0)
    return par(body, extra) if rng.random() < 0.3 else body


def random_experiments(seed: int, count: int, **kwargs):
    """``count`` pairs ``(process, observer)`` drawn from one seeded stream."""
    rng = random.Random(seed)
    return [(random_process(rng, **kwargs), random_observer(rng)) for _ in range(count)]


def random_interacting(rng: random.Random, names=("a", "b"), components: int = 3):
    """A pair ``(process, observer)`` over few names, the process being a
    parallel composition of up to ``components`` small pieces, so that
    synchronizations and loops are common."""
    pieces = [random_process(rng, depth=3, width=3, names=names, replication=0.25)
              for _ in range(rng.randint(2, components))]
    return par(*pieces), random_observer(rng, names=names)
