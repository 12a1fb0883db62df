"""Command-line front end.

Exit codes: 0 success (or HOLDS), 1 VIOLATED / mismatch / rejected,
2 UNKNOWN, 3 usage or parse error, 4 cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import resources
from pathlib import Path

from .bisim import BISIM_CAP, check_bisim_bounded
from .corpus import CorpusIntegrityError, load_corpus, run_corpus
from .fairness import (LassoCertificate, StepSelector, apply_selector, run_scheduler,
                       validate_certificate, POLICIES)
from .labeling import is_unlabeled, label_term
from .lts import CapExceeded, build_state_graph
from .parse import ParseError, parse_labeled, parse_process
from .random_terms import random_process
from .semantics import live_labels
from .syntax import Inp, Nil, Omega, Out, Par, Rep, Res, canonical_term, pretty
from .verdicts import HOLDS, PROPERTIES, UNKNOWN, VIOLATED, Caps, check, experiment

EXIT_OK, EXIT_VIOLATED, EXIT_UNKNOWN, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _source(arg: str) -> str:
    """Term text from a file path, a bundled corpus file name, or the
    argument itself."""
    path = Path(arg)
    if path.is_file():
        return path.read_text()
    bundled = resources.files("fairpi.corpus").joinpath(arg)
    if arg.endswith(".pi") and bundled.is_file():
        return bundled.read_text()
    return arg


def _process(arg, observer=False):
    return parse_process(_source(arg), observer=observer)


def _ast(p):
    match p:
        case Nil():
            return {"node": "nil"}
        case Inp(chan, binder, body, label):
            return {"node": "input", "chan": chan, "binder": binder, "label": _lab(label),
                    "body": _ast(body)}
        case Out(chan, obj, body, label):
            return {"node": "output", "chan": chan, "obj": obj, "label": _lab(label),
                    "body": _ast(body)}
        case Par(left, right):
            return {"node": "par", "left": _ast(left), "right": _ast(right)}
        case Res(binder, body):
            return {"node": "res", "binder": binder, "body": _ast(body)}
        case Rep(body, label):
            return {"node": "rep", "label": _lab(label), "body": _ast(body)}
        case Omega(body):
            return {"node": "omega", "body": _ast(body)}
    raise TypeError(p)


def _lab(label):
    return None if label is None else str(label)


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _caps(args) -> Caps:
    caps = Caps()
    for flag, name in (("cap_nodes", "nodes"), ("cap_steps", "steps"), ("cap_cycles", "cycles")):
        value = getattr(args, flag, None)
        if value is not None:
            setattr(caps, name, value)
    return caps


# ---------------------------------------------------------------- subcommands

def cmd_parse(args):
    if args.term is None:
        if args.seed is None:
            raise UsageError("parse needs a term or --seed")
        p = random_process(random.Random(args.seed))
    elif args.labeled:
        p = parse_labeled(_source(args.term))
    else:
        p = _process(args.term, observer=args.observer)
    cf = canonical_term(p)
    if args.format == "json":
        _emit({"term": pretty(cf), "ast": _ast(cf)})
    else:
        print(pretty(cf))
    return EXIT_OK


def cmd_lts(args):
    p = _process(args.process, observer=args.observer is None)
    if args.observer is not None:
        p = experiment(p, _process(args.observer, observer=True))
    try:
        g = build_state_graph(p, _caps(args).nodes)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    if args.format == "dot":
        sys.stdout.write(g.to_dot())
    else:
        _emit(g.to_json())
    return EXIT_OK


def cmd_label(args):
    p = _process(args.term, observer=True)
    print(pretty(label_term(p)))
    return EXIT_OK


def cmd_live(args):
    e = parse_labeled(_source(args.term))
    if is_unlabeled(e):
        e = label_term(e)
    print(" ".join(str(v) for v in sorted(live_labels(e))))
    return EXIT_OK


def _script_policy(path):
    """Selector from a file with one step per line: either the index of a
    tau transition in derivation order or a JSON step selector."""
    steps = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            steps.append(int(line) if line.lstrip("-").isdigit()
                         else StepSelector.from_json(json.loads(line)))

    def select(state, transitions, history):
        step = steps[len(history.steps)]
        if isinstance(step, int):
            if not 0 <= step < len(transitions):
                raise UsageError(f"script step {len(history.steps)}: no transition {step}")
            return step
        t = apply_selector(state, step)
        return transitions.index(t)

    return select, len(steps)


def cmd_run(args):
    p = _process(args.process)
    s = label_term(experiment(p, _process(args.observer, observer=True)))
    max_steps = _caps(args).steps
    if args.policy.startswith("script:"):
        policy, length = _script_policy(args.policy[len("script:"):])
        max_steps = min(max_steps, length)
    elif args.policy in POLICIES:
        policy = args.policy
    else:
        raise UsageError(f"unknown policy {args.policy!r}")
    comp = run_scheduler(s, policy, max_steps=max_steps)
    _emit(comp.to_json())
    return EXIT_OK


def cmd_check(args):
    p = _process(args.process)
    o = _process(args.observer, observer=True)
    v = check(args.prop, p, o, _caps(args), timing=args.timing)
    _emit(v.to_json())
    return {HOLDS: EXIT_OK, VIOLATED: EXIT_VIOLATED, UNKNOWN: EXIT_UNKNOWN}[v.verdict]


def cmd_validate(args):
    try:
        cert = LassoCertificate.from_json(json.loads(Path(args.certificate).read_text()))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from exc
    res = validate_certificate(cert, args.mode)
    _emit(res.to_json())
    return EXIT_OK if res.accepted else EXIT_VIOLATED


def cmd_bisim(args):
    p, q = _process(args.left), _process(args.right)
    cap = args.cap_nodes if args.cap_nodes is not None else BISIM_CAP
    same = check_bisim_bounded(p, q, args.k, cap)
    print("true" if same else "false")
    return EXIT_OK if same else EXIT_VIOLATED


def cmd_corpus(args):
    try:
        entries = load_corpus(args.dir)
    except CorpusIntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    results = run_corpus(entries, _caps(args), jobs=args.jobs)
    for r in results:
        detail = " ".join(f"{prop}={res['verdict']}" + ("" if res["ok"] else
                          f"(expected {'/'.join(res['allowed'])})")
                          for prop, res in r["results"].items())
        print(f"{'PASS' if r['ok'] else 'FAIL'} {r['name']}: {detail}")
    failed = sum(not r["ok"] for r in results)
    print(f"{len(results) - failed}/{len(results)} entries pass")
    return EXIT_OK if not failed else EXIT_VIOLATED


# ---------------------------------------------------------------- argument parsing

def _add_caps(sp):
    sp.add_argument("--cap-nodes", type=int, help="state-graph node cap")
    sp.add_argument("--cap-steps", type=int, help="scheduler step cap")
    sp.add_argument("--cap-cycles", type=int, help="cycle-search cap")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fairpi", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", help="print the canonical form of a term")
    sp.add_argument("term", nargs="?", help="term text or file")
    sp.add_argument("--observer", action="store_true", help="allow success prefixes")
    sp.add_argument("--labeled", action="store_true", help="accept labels")
    sp.add_argument("--seed", type=int, help="print a random process instead")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("lts", help="export the tau-graph of an experiment")
    sp.add_argument("process")
    sp.add_argument("--observer", help="observer text or file; omit to explore the term alone")
    sp.add_argument("--format", choices=("dot", "json"), default="json")
    _add_caps(sp)
    sp.set_defaults(func=cmd_lts)

    sp = sub.add_parser("label", help="print the labeled form of a term")
    sp.add_argument("term")
    sp.set_defaults(func=cmd_label)

    sp = sub.add_parser("live", help="print the live labels of a labeled term")
    sp.add_argument("term")
    sp.set_defaults(func=cmd_live)

    sp = sub.add_parser("run", help="run a scheduler on an experiment")
    sp.add_argument("--process", required=True)
    sp.add_argument("--observer", required=True)
    sp.add_argument("--policy", default="strong", help="strong | roundrobin | script:<file>")
    _add_caps(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("check", help="decide a testing property")
    sp.add_argument("--prop", choices=PROPERTIES, required=True)
    sp.add_argument("--process", required=True)
    sp.add_argument("--observer", required=True)
    sp.add_argument("--timing", action="store_true", help="record wall time in stats")
    _add_caps(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("validate", help="validate a lasso certificate file")
    sp.add_argument("certificate")
    sp.add_argument("--mode", choices=("strong", "weak"), default="strong")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("bisim", help="bounded bisimilarity of two terms")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("-k", type=int, default=4, help="matching depth")
    sp.add_argument("--cap-nodes", type=int, help="state cap for exact refinement")
    sp.set_defaults(func=cmd_bisim)

    sp = sub.add_parser("corpus", help="regression corpus")
    sp.add_argument("action", choices=("run",))
    sp.add_argument("--dir", help="corpus directory (default: bundled)")
    sp.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    _add_caps(sp)
    sp.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
