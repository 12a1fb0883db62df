"""Recursive-descent parser for the surface syntax.

Grammar (``#`` starts a line comment)::

    par    := unary ('|' unary)*
    unary  := '!' [label] unary | '(' 'nu' NAME ')' unary | '(' par ')'
            | '0' | prefix
    prefix := NAME '(' NAME ')' [label] ['.' unary]
            | NAME '<' NAME '>' [label] ['.' unary]
            | ('w' | 'omega') ['.' unary]
    label  := '@' [01]* ',' DIGITS

Parallel composition associates to the left.  Labels are accepted only when
``labeled=True``; success prefixes only when ``observer=True``.
"""
from __future__ import annotations

import re

from .syntax import NIL, Inp, Label, Omega, Out, Par, Process, Rep, Res

RESERVED = {"nu", "w", "omega"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<label>@[01]*,\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<zero>0)
  | (?P<sym>[()<>.|!])
""", re.VERBOSE)


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, observer, labeled):
        self.toks = _tokenize(text)
        self.i = 0
        self.observer = observer
        self.labeled = labeled

    def peek(self, k=0):
        return self.toks[self.i + k]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.next()
        if text != value or kind == "eof":
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def name(self):
        kind, text, pos = self.next()
        if kind != "name" or text in RESERVED:
            raise ParseError(f"expected a name, found {text or 'end of input'!r}", pos)
        return text

    def maybe_label(self):
        kind, text, pos = self.peek()
        if kind != "label":
            return None
        if not self.labeled:
            raise ParseError("labels are not allowed here", pos)
        self.next()
        return Label.parse(text[1:])

    def par(self):
        left = self.unary()
        while self.peek()[1] == "|":
            self.next()
            left = Par(left, self.unary())
        return left

    def cont(self):
        if self.peek()[1] == ".":
            self.next()
            return self.unary()
        return NIL

    def unary(self):
        kind, text, pos = self.peek()
        if text == "!":
            self.next()
            label = self.maybe_label()
            return Rep(self.unary(), label)
        if text == "(":
            if self.peek(1)[1] == "nu" and self.peek(1)[0] == "name":
                self.next()
                self.next()
                binder = self.name()
                self.expect(")")
                return Res(binder, self.unary())
            self.next()
            inner = self.par()
            self.expect(")")
            return inner
        if kind == "zero":
            self.next()
            return NIL
        if kind == "name" and text in ("w", "omega"):
            if not self.observer:
                raise ParseError("success action is only allowed in observers", pos)
            self.next()
            return Omega(self.cont())
        if kind == "name" and text not in RESERVED:
            chan = self.name()
            sym, spos = self.peek()[1], self.peek()[2]
            if sym == "(":
                self.next()
                binder = self.name()
                self.expect(")")
                label = self.maybe_label()
                return Inp(chan, binder, self.cont(), label)
            if sym == "<":
                self.next()
                obj = self.name()
                self.expect(">")
                label = self.maybe_label()
                return Out(chan, obj, self.cont(), label)
            raise ParseError("expected '(' or '<' after channel name", spos)
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)


def parse_process(text: str, observer: bool = False, labeled: bool = False) -> Process:
    """Parse ``text`` into a :class:`~fairpi.syntax.Process`.

    >>> from fairpi.syntax import pretty
    >>> pretty(parse_process("a<b>.0 | a(x).0"))
    'a<b> | a(x)'
    """
    p = _Parser(text, observer, labeled)
    term = p.par()
    kind, tok, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {tok!r}", pos)
    return term


def parse_observer(text: str) -> Process:
    return parse_process(text, observer=True)


def parse_labeled(text: str) -> Process:
    return parse_process(text, observer=True, labeled=True)
