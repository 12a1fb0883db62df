import json

import pytest

from fairpi.cli import EXIT_CAP, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE, EXIT_VIOLATED, main
from fairpi.corpus import CorpusIntegrityError, load_corpus, run_corpus, run_entry
from fairpi.verdicts import Caps


def write_corpus(tmp_path, entries, files):
    for name, text in files.items():
        (tmp_path / name).write_text(text)
    (tmp_path / "manifest.json").write_text(json.dumps({"schema": 1, "entries": entries}))
    return tmp_path


GOOD = {"name": "one", "process": "one.pi", "observer": "a(x).w",
        "expected": {"must": "HOLDS", "sfmust": "HOLDS"}}


# ---------------------------------------------------------------- corpus

def test_bundled_corpus_loads():
    entries = load_corpus()
    assert len(entries) >= 8
    assert [e.name for e in entries] == sorted(e.name for e in entries)
    # each strictness gap of the implication chain has a representative
    exp = {e.name: {**e.undecided, **e.expected} for e in entries}
    gaps = {("must", "fair"), ("wfmust", "sfmust"), ("must", "wfmust"), ("sfmust", "fair")}
    for strong, weak in gaps:
        assert any(v.get(strong) == "VIOLATED" and v.get(weak) == "HOLDS" for v in exp.values())


def test_entry_run_matches_expectations():
    entry = next(e for e in load_corpus() if e.name == "fair-not-must")
    r = run_entry(entry)
    assert r["ok"] and set(r["results"]) == {"must", "fair", "wfmust", "sfmust"}


def test_undecided_accepts_unknown():
    entry = next(e for e in load_corpus() if e.name == "choice-same-each-round")
    r = run_entry(entry)
    assert r["ok"]
    assert all(res["verdict"] in res["allowed"] for res in r["results"].values())


def test_mismatch_is_reported(tmp_path):
    bad = {**GOOD, "expected": {"must": "VIOLATED"}}
    d = write_corpus(tmp_path, [bad], {"one.pi": "a<u>"})
    [r] = run_corpus(load_corpus(d))
    assert not r["ok"] and r["results"]["must"]["verdict"] == "HOLDS"


@pytest.mark.parametrize("entry, files", [
    ({**GOOD, "expected": {"must": "MAYBE"}}, {"one.pi": "a<u>"}),
    ({**GOOD, "expected": {"often": "HOLDS"}}, {"one.pi": "a<u>"}),
    (GOOD, {}),
    (GOOD, {"one.pi": "a<u"}),
    ({**GOOD, "caps": {"bogus": 1}}, {"one.pi": "a<u>"}),
    ({**GOOD, "undecided": {"must": "HOLDS"}}, {"one.pi": "a<u>"}),
])
def test_integrity_errors(tmp_path, entry, files):
    d = write_corpus(tmp_path, [entry], files)
    with pytest.raises(CorpusIntegrityError):
        load_corpus(d)


def test_duplicate_and_empty(tmp_path):
    d = write_corpus(tmp_path, [GOOD, GOOD], {"one.pi": "a<u>"})
    with pytest.raises(CorpusIntegrityError):
        load_corpus(d)
    d = write_corpus(tmp_path, [], {})
    with pytest.raises(CorpusIntegrityError):
        load_corpus(d)


def test_parallel_run_keeps_order(tmp_path):
    two = {**GOOD, "name": "two", "expected": {"fair": "VIOLATED"}, "observer": "b(x).w"}
    d = write_corpus(tmp_path, [two, GOOD], {"one.pi": "a<u>"})
    results = run_corpus(load_corpus(d), Caps(nodes=64), jobs=2)
    assert [r["name"] for r in results] == ["one", "two"]
    assert all(r["ok"] for r in results)


# ---------------------------------------------------------------- command line

def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_cli_parse(capsys):
    code, out = run_cli(capsys, "parse", "(nu b)(b<u> | a<c>)")
    assert code == EXIT_OK and out.out.strip() == "(nu _0)_0<u> | a<c>"
    code, out = run_cli(capsys, "parse", "a(", "--format", "json")
    assert code == EXIT_USAGE and "error" in out.err
    code, out = run_cli(capsys, "parse", "--seed", "3", "--format", "json")
    assert code == EXIT_OK and json.loads(out.out)


def test_cli_check_exit_codes(capsys):
    code, out = run_cli(capsys, "check", "--prop", "must", "--process", "a<u>",
                        "--observer", "a(x).w")
    assert code == EXIT_OK and json.loads(out.out)["verdict"] == "HOLDS"
    code, out = run_cli(capsys, "check", "--prop", "sfmust", "--process", "strongfair_gap.pi",
                        "--observer", "a(x).w")
    assert code == EXIT_VIOLATED and "certificate" in json.loads(out.out)
    code, out = run_cli(capsys, "check", "--prop", "fair", "--process",
                        "!c<u> | !c(x).(c<u> | c<u>) | a<u>", "--observer", "a(x).w",
                        "--cap-nodes", "4", "--timing")
    doc = json.loads(out.out)
    assert code == EXIT_UNKNOWN and isinstance(doc["stats"]["wall_time"], float)
    code, _ = run_cli(capsys, "check", "--prop", "nope", "--process", "a<u>",
                      "--observer", "a(x).w")
    assert code == EXIT_USAGE


def test_cli_validate_round_trip(capsys, tmp_path):
    _, out = run_cli(capsys, "check", "--prop", "wfmust", "--process", "risultatoclou.pi",
                     "--observer", "a(x).w", "--cap-nodes", "2048")
    cert = tmp_path / "cert.json"
    cert.write_text(json.dumps(json.loads(out.out)["certificate"]))
    code, out = run_cli(capsys, "validate", str(cert), "--mode", "weak")
    assert code == EXIT_OK and json.loads(out.out)["class"] == "WeakFairOnly"
    code, out = run_cli(capsys, "validate", str(cert), "--mode", "strong")
    assert code == EXIT_VIOLATED
    code, _ = run_cli(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == EXIT_USAGE


def test_cli_lts_label_live_run(capsys):
    code, out = run_cli(capsys, "lts", "a<b>", "--observer", "a(x).w")
    assert code == EXIT_OK and json.loads(out.out)["edges"] == [[0, 1]]
    code, out = run_cli(capsys, "lts", "!a<u> | !a(x).b<u>", "--cap-nodes", "3")
    assert code == EXIT_CAP
    code, out = run_cli(capsys, "lts", "a<b>", "--observer", "a(x).w", "--format", "dot")
    assert "digraph" in out.out
    code, out = run_cli(capsys, "label", "a<b> | a(x)")
    assert code == EXIT_OK and out.out.strip() == "a<b>@0,0 | a(x)@1,0"
    code, out = run_cli(capsys, "live", "a<b>@0,0 | a(x)@1,0")
    assert code == EXIT_OK and "0,0" in out.out and "1,0" in out.out
    code, out = run_cli(capsys, "run", "--process", "fair_not_must.pi", "--observer",
                        "a(x).w", "--cap-steps", "50")
    assert code == EXIT_OK and json.loads(out.out)


def test_cli_bisim(capsys):
    code, out = run_cli(capsys, "bisim", "impossibility_e.pi", "impossibility_f.pi", "-k", "2")
    assert code == EXIT_OK and out.out.strip() == "true"
    code, out = run_cli(capsys, "bisim", "a<u>", "b<u>")
    assert code == EXIT_VIOLATED and out.out.strip() == "false"


def test_cli_corpus(capsys, tmp_path):
    d = write_corpus(tmp_path, [GOOD], {"one.pi": "a<u>"})
    code, out = run_cli(capsys, "corpus", "run", "--dir", str(d))
    assert code == EXIT_OK and "PASS one" in out.out
    (tmp_path / "manifest.json").write_text("{")
    code, _ = run_cli(capsys, "corpus", "run", "--dir", str(d))
    assert code == EXIT_USAGE


def test_cli_usage_errors(capsys):
    assert run_cli(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run_cli(capsys, "--help")[0] == EXIT_OK
    code, _ = run_cli(capsys, "run", "--process", "a<u>", "--observer", "a(x).w",
                      "--policy", "random")
    assert code == EXIT_USAGE


def test_cli_documented_examples(capsys, tmp_path):
    code, out = run_cli(capsys, "check", "--prop", "sfmust", "--process", "risultatoclou.pi",
                        "--observer", "a(x).w")
    assert code == EXIT_OK and json.loads(out.out)["verdict"] == "HOLDS"
    broken = tmp_path / "broken.pi"
    broken.write_text("a<u> | (nu b")
    code, out = run_cli(capsys, "check", "--prop", "must", "--process", str(broken),
                        "--observer", "a(x).w")
    assert code == EXIT_USAGE and "error" in out.err


def test_cli_output_is_deterministic(capsys):
    argv = ("check", "--prop", "wfmust", "--process", "strongfair_gap.pi", "--observer",
            "a(x).w")
    assert run_cli(capsys, *argv)[1].out == run_cli(capsys, *argv)[1].out
