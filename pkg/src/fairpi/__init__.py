"""Labeled choiceless pi-calculus workbench: early semantics, labeling,
weak and strong fairness of actions, and must/fair testing verdicts."""
import sys

from .bisim import bisimilar_exact, check_bisim_bounded
from .corpus import CorpusEntry, load_corpus, run_corpus
from .fairness import (STRONG_FAIR, UNFAIR, WEAK_FAIR_ONLY, REJECTED, Computation,
                       FairnessResult, LassoCertificate, StepSelector, run_scheduler,
                       strong_fair_queue, validate_certificate, weak_fair_round_robin)
from .labeling import label_term, top_labels, unlabel, well_formed
from .lts import CapExceeded, StateGraph, build_state_graph, can_report, weak_reach
from .parse import ParseError, parse_labeled, parse_observer, parse_process
from .semantics import Action, Transition, live_labels, step
from .syntax import (NIL, CanonicalForm, Inp, Label, Nil, Omega, Out, Par, Process, Rep, Res,
                     alpha_equivalent, canonicalize, free_names, pretty, strip_labels, substitute)
from .verdicts import (HOLDS, UNKNOWN, VIOLATED, Caps, Verdict, check, check_fair, check_must,
                       check_sfmust, check_wfmust, revalidate_trace)

# Deeply nested terms are walked recursively in a few places.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))

__version__ = "0.1.0"

__all__ = [
    "bisimilar_exact",
    "check_bisim_bounded",
    "CorpusEntry",
    "load_corpus",
    "run_corpus",
    "STRONG_FAIR",
    "UNFAIR",
    "WEAK_FAIR_ONLY",
    "REJECTED",
    "Computation",
    "FairnessResult",
    "LassoCertificate",
    "StepSelector",
    "run_scheduler",
    "strong_fair_queue",
    "validate_certificate",
    "weak_fair_round_robin",
    "label_term",
    "top_labels",
    "unlabel",
    "well_formed",
    "CapExceeded",
    "StateGraph",
    "build_state_graph",
    "can_report",
    "weak_reach",
    "ParseError",
    "parse_labeled",
    "parse_observer",
    "parse_process",
    "Action",
    "Transition",
    "live_labels",
    "step",
    "NIL",
    "CanonicalForm",
    "Inp",
    "Label",
    "Nil",
    "Omega",
    "Out",
    "Par",
    "Process",
    "Rep",
    "Res",
    "alpha_equivalent",
    "canonicalize",
    "free_names",
    "pretty",
    "strip_labels",
    "substitute",
    "HOLDS",
    "UNKNOWN",
    "VIOLATED",
    "Caps",
    "Verdict",
    "check",
    "check_fair",
    "check_must",
    "check_sfmust",
    "check_wfmust",
    "revalidate_trace",
]
