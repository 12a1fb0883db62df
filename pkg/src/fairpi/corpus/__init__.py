"""Regression corpus: term files plus a JSON manifest of expected verdicts.

``expected`` verdicts must be reproduced exactly.  ``undecided`` lists the
true verdict of properties that no finite analysis within the entry's caps
can settle; for those the run must report that verdict or UNKNOWN, never the
opposite one.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional

from ..parse import ParseError, parse_process
from ..verdicts import PROPERTIES, UNKNOWN, Caps, check

__all__ = ["CorpusEntry", "CorpusIntegrityError", "load_corpus", "run_entry", "run_corpus"]

_VERDICTS = ("HOLDS", "VIOLATED")


class CorpusIntegrityError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    process: str                  # process text
    observer: str                 # observer text
    expected: dict
    undecided: dict = field(default_factory=dict)
    caps: dict = field(default_factory=dict)
    note: str = ""

    def parsed(self):
        return parse_process(self.process), parse_process(self.observer, observer=True)

    def caps_for(self, base: Optional[Caps] = None) -> Caps:
        return replace(base or Caps(), **self.caps)


def _read_dir(directory):
    if directory is None:
        root = resources.files(__package__)
        return lambda name: root.joinpath(name).read_text()
    directory = Path(directory)
    return lambda name: (directory / name).read_text()


def load_corpus(directory=None) -> list:
    """Entries of the manifest in ``directory`` (the bundled corpus by
    default), sorted by name.  Raises :class:`CorpusIntegrityError` on a
    malformed manifest, a missing or unparsable term, or a bad verdict."""
    read = _read_dir(directory)
    try:
        manifest = json.loads(read("manifest.json"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusIntegrityError(f"cannot read manifest: {exc}") from exc
    entries, names = [], set()
    for raw in manifest.get("entries", []):
        try:
            name = raw["name"]
            process = read(raw["process"])
            entry = CorpusEntry(name, process, raw["observer"], dict(raw["expected"]),
                                dict(raw.get("undecided", {})), dict(raw.get("caps", {})),
                                raw.get("note", ""))
        except (KeyError, OSError) as exc:
            raise CorpusIntegrityError(f"bad entry {raw.get('name', '?')}: {exc}") from exc
        if name in names:
            raise CorpusIntegrityError(f"duplicate entry {name}")
        names.add(name)
        for prop, v in {**entry.expected, **entry.undecided}.items():
            if prop not in PROPERTIES or v not in _VERDICTS:
                raise CorpusIntegrityError(f"{name}: bad expectation {prop}={v}")
        if set(entry.expected) & set(entry.undecided):
            raise CorpusIntegrityError(f"{name}: property both expected and undecided")
        bad_caps = set(entry.caps) - set(Caps.__dataclass_fields__)
        if bad_caps:
            raise CorpusIntegrityError(f"{name}: unknown caps {sorted(bad_caps)}")
        try:
            entry.parsed()
        except ParseError as exc:
            raise CorpusIntegrityError(f"{name}: {exc}") from exc
        entries.append(entry)
    if not entries:
        raise CorpusIntegrityError("empty corpus")
    return sorted(entries, key=lambda e: e.name)


def run_entry(entry: CorpusEntry, base: Optional[Caps] = None) -> dict:
    """Check every property the entry mentions; ``ok`` is False on any
    mismatch."""
    p, o = entry.parsed()
    caps = entry.caps_for(base)
    results, ok = {}, True
    for prop in PROPERTIES:
        if prop in entry.expected:
            allowed = {entry.expected[prop]}
        elif prop in entry.undecided:
            allowed = {entry.undecided[prop], UNKNOWN}
        else:
            continue
        got = check(prop, p, o, caps).verdict
        results[prop] = {"verdict": got, "allowed": sorted(allowed), "ok": got in allowed}
        ok &= got in allowed
    return {"name": entry.name, "ok": ok, "results": results}


def _run_packed(args):
    return run_entry(*args)


def run_corpus(entries=None, base: Optional[Caps] = None, jobs: int = 1) -> list:
    """Run ``entries`` (the bundled corpus by default); with ``jobs > 1``
    entries are checked in parallel processes.  Results are ordered by entry
    name either way."""
    entries = sorted(entries if entries is not None else load_corpus(), key=lambda e: e.name)
    work = [(e, base) for e in entries]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_packed, work))
    return [_run_packed(w) for w in work]
