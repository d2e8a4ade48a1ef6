import json

from pairing_miller.catalog import get_entry, serialize_entry
from pairing_miller.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, [json.loads(l) for l in out.splitlines() if l.strip()], err


def test_pair_toy(capsys):
    code, recs, _ = _run(capsys, "pair", "--curve", "toy-11", "--seed", "7")
    assert code == 0 and recs[0]["result_pow_r"] == 1
    assert {"P", "Q", "miller", "reduced", "counts"} <= set(recs[0])


def test_pair_is_deterministic(capsys):
    a = _run(capsys, "pair", "--curve", "toy-19", "--seed", "3", "--count", "3")[1]
    b = _run(capsys, "pair", "--curve", "toy-19", "--seed", "3", "--count", "3")[1]
    assert a == b and len(a) == 3


def test_pair_engines_agree(capsys):
    ref = _run(capsys, "pair", "--curve", "toy-19", "--seed", "5")[1][0]
    alt = _run(capsys, "pair", "--curve", "toy-19", "--seed", "5", "--engine", "novel_generic")[1][0]
    assert ref["reduced"] == alt["reduced"]


def test_pair_modes(capsys):
    code, recs, _ = _run(capsys, "pair", "--curve", "toy-19", "--pairing", "weil", "--seed", "1")
    assert code == 0 and recs[0]["result_pow_r"] == 1
    code, recs, _ = _run(capsys, "pair", "--curve", "toy-19", "--divisor-mode", "--seed", "1")
    assert code == 0 and recs[0]["result_pow_r"] == 1
    plain = _run(capsys, "pair", "--curve", "toy-19", "--seed", "1")[1][0]
    assert plain["reduced"] == recs[0]["reduced"]
    code, recs, _ = _run(capsys, "pair", "--curve", "toy-19", "--pairing", "miller-only")
    assert code == 0 and "result_pow_r" not in recs[0]


def test_pair_usage_errors(capsys):
    assert _run(capsys, "pair", "--curve", "bn254", "--engine", "novel_even", "--pairing", "weil")[0] == 2
    assert _run(capsys, "pair", "--curve", "k9", "--engine", "novel_even")[0] == 2
    assert _run(capsys, "pair", "--curve", "nowhere")[0] == 2


def test_bench_single_trial(capsys):
    code, recs, err = _run(capsys, "bench", "--curve", "toy-19", "--engines", "classic,novel_generic",
                           "--trials", "1", "--warmup", "0")
    assert code == 0
    runs = [r for r in recs if r["type"] == "bench"]
    assert [r["engine"] for r in runs] == ["classic", "novel_generic"]
    assert all(r["trials"] == 1 for r in runs)
    assert "novel_generic/classic" in recs[-1]["ratios"]
    assert "median ms" in err


def test_verify_suites(capsys):
    code, recs, _ = _run(capsys, "verify", "--suite", "identities", "--trials", "1000")
    assert code == 0 and recs[0]["passed"] and recs[0]["counts"]["parabola"] == 1000
    code, recs, _ = _run(capsys, "verify", "--curve", "toy-19", "--suite", "costs")
    assert code == 0 and all(r["passed"] for r in recs)
    code, recs, _ = _run(capsys, "verify", "--suite", "catalog")
    assert code == 0 and recs[0]["reports"]["bn254"]["status"] == "verified"
    code, recs, _ = _run(capsys, "verify", "--curve", "toy-11", "--suite", "engines")
    assert code == 0 and {r["suite"] for r in recs} == {"engines", "reduced_agreement", "bilinearity", "weil"}


def test_validate_curve(capsys, tmp_path):
    path = tmp_path / "mine.curve"
    path.write_text(serialize_entry(get_entry("toy-19")))
    code, recs, err = _run(capsys, "validate-curve", "--curve-file", str(path))
    assert code == 0 and recs[0]["status"] == "verified" and "status: verified" in err
    assert _run(capsys, "validate-curve", "--curve", "k9")[0] == 1
    bad = tmp_path / "bad.curve"
    bad.write_text("name = x\np = nineteen\n")
    assert _run(capsys, "validate-curve", "--curve-file", str(bad))[0] == 2
