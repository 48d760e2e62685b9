import json

import pytest

from narayana_repdigits.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_seq(capsys):
    code, out, _ = run(capsys, "seq", "--n", "14")
    assert code == 0 and json.loads(out) == {"n": "14", "N": "88"}
    code, out, _ = run(capsys, "seq", "--upto", "7", "--format", "text")
    assert out.split() == ["0", "1", "1", "1", "2", "3", "4", "6"]


def test_repdigit(capsys):
    code, out, _ = run(capsys, "repdigit", "--check", "364", "--base", "3")
    d = json.loads(out)
    assert code == 0 and (d["a"], d["l"]) == ("1", "6")


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--precision", "128")
    d = json.loads(out)
    assert d["alpha"].startswith("[1.46557123187676802665")


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "eq2-m", "--b", "2", "--a", "1")
    d = json.loads(out)
    assert code == 0 and d["status"] == "reduced" and not d["epsilon"].startswith("[-")
    assert list(d) == sorted(d)


def test_reduce_precision_failure(capsys):
    code, _, err = run(capsys, "reduce", "eq2-n", "--b", "5", "--a", "4", "--m", "3", "--precision", "64")
    assert code == 1 and "eq2-n" in err and "'b': 5" in err


def test_bad_args(capsys):
    with pytest.raises(SystemExit) as e:
        main(["seq", "--b", "51..52", "--n", "3"])
    assert e.value.code == 3
    with pytest.raises(SystemExit) as e:
        main(["reduce", "eq2-x"])
    assert e.value.code == 3
    code, _, err = run(capsys, "reduce", "eq2-m", "--b", "2..4", "--a", "1")
    assert code == 3
    code, _, err = run(capsys, "reduce", "eq2-m", "--b", "5", "--a", "9")
    assert code == 3
    with pytest.raises(SystemExit) as e:
        main(["seq", "--n", "3", "--precision", "32"])
    assert e.value.code == 3


def test_solve_csv(capsys):
    code, out, _ = run(capsys, "solve", "eq3", "--k-max", "40", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 3 and lines[0].startswith("k,b,a1,a2,l1,l2")


def test_pipeline_b3(capsys, tmp_path):
    code, out, _ = run(capsys, "pipeline", "eq2", "--b", "3..3")
    d = json.loads(out)
    assert code == 0
    assert {tuple(int(s[k]) for k in ("n", "m", "l", "a", "b")) for s in d["solutions"]} >= {(9, 3, 3, 1, 3)}
    assert all(d["soundness"].values())
    code2, out2, _ = run(capsys, "pipeline", "eq2", "--b", "3..3")
    assert out == out2


def test_pipeline_writes_bundle(capsys, tmp_path):
    code, _, _ = run(capsys, "pipeline", "eq2", "--b", "2..3", "--out", str(tmp_path / "run"))
    assert code == 0
    names = {p.name for p in (tmp_path / "run").iterdir()}
    assert {"bounds.json", "certificates.jsonl", "solutions.json", "diff.json", "diff.txt", "summary.json"} <= names
    first = json.loads((tmp_path / "run" / "certificates.jsonl").read_text().splitlines()[0])
    assert first["label"].startswith("eq2")


def test_pipeline_precision_failure(capsys):
    code, _, err = run(capsys, "pipeline", "eq2", "--b", "2..2", "--precision", "64")
    assert code == 1 and "precision failure" in err


def test_bounds_single(capsys):
    code, out, _ = run(capsys, "bounds", "eq2", "--b", "2")
    d = json.loads(out)
    assert code == 0 and d["published_ceiling_ok"] is True and "n_max" in d
