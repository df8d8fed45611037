import json

import pytest

from latticehfi import builtin_family
from latticehfi.cli import main


@pytest.fixture()
def files(tmp_path):
    out = {}
    for name in ("gamma_Nj", "gamma_prime_Nj", "k1_surgery", "k1_surgery_reversed"):
        p = tmp_path / f"{name}.json"
        p.write_text(builtin_family(name, 1).to_json())
        out[name] = str(p)
    p = tmp_path / "zeros.json"
    p.write_text(builtin_family("disjoint_zeros", 2).to_json())
    out["zeros"] = str(p)
    return out


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_family(capsys):
    assert main(["family", "gamma_Nj", "1"]) == 0
    d = _json(capsys)
    assert [v["weight"] for v in d["vertices"]] == [-1, -2, -7, -3, -5]


def test_classify(files, capsys):
    assert main(["classify", "--gamma", files["gamma_Nj"]]) == 0
    assert _json(capsys)["h1"] == "Z"
    assert main(["classify", "--gamma", files["zeros"]]) == 2


def test_root_formats(files, capsys):
    assert main(["root", "--gamma", files["gamma_Nj"]]) == 0
    d = _json(capsys)
    assert d["leaf_gradings"] == ["1/2", "1/2"]
    assert main(["root", "--gamma", files["gamma_Nj"], "--format", "dot"]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("digraph") and "dashed" in dot
    assert main(["root", "--gamma", files["gamma_Nj"], "--format", "ascii"]) == 0
    assert "1/2" in capsys.readouterr().out


def test_obstruct(files, capsys):
    rc = main(["obstruct", "--gamma", files["k1_surgery"], "--gamma-reversed", files["k1_surgery_reversed"]])
    assert rc == 0
    d = _json(capsys)
    assert [v["status"] for v in d["verdicts"]] == ["consistent", "consistent"]
    assert d["involution"]["identity"]


def test_partial_exit(files, capsys):
    assert main(["hfi", "--gamma", files["gamma_Nj"]]) == 3
    assert _json(capsys)["partial"] is True


def test_override(files, capsys):
    assert main(["hfi", "--gamma", files["gamma_Nj"], "--d-half-override=-3/2"]) == 0
    assert _json(capsys)["invariants_Y"]["dlow_mhalf"] == "-5/2"


def test_unsupported_exit(files, capsys):
    assert main(["obstruct", "--gamma", files["zeros"]]) == 2


def test_hf(files, capsys):
    assert main(["hf", "--gamma", files["gamma_Nj"], "--gamma-reversed", files["gamma_prime_Nj"]]) == 0
    d = _json(capsys)
    assert {t["bottom"] for t in d["towers"]} == {"1/2", "3/2"}


def test_cohomology(files, capsys):
    assert main(["cohomology", "--gamma", files["zeros"], "--level", "1"]) == 0
    assert _json(capsys)["dims"] == [1, 2, 1]


def test_batch(files, capsys, tmp_path):
    rc = main(["classify", "--gamma", str(tmp_path)])
    out = capsys.readouterr().out
    assert rc == 2
    assert "# summary" in out and out.count(".json") >= 10
