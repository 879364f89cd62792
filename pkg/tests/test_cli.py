import json

import pytest

from dkdv.classify import ValuationMap
from dkdv.cli import main
from dkdv.harness import reference_scenario
from dkdv.render import glyph, parse_ascii, render_ascii


@pytest.fixture
def strip_scenario(tmp_path):
    path = tmp_path / "w2_q1.json"
    reference_scenario("w2_q1").dump(path)
    return path


def test_simulate_writes_outputs(strip_scenario, tmp_path, monkeypatch):
    monkeypatch.delenv("DKDV_OUT", raising=False)
    out = tmp_path / "out"
    assert main(["simulate", "--scenario", str(strip_scenario), "--out", str(out), "--svg"]) == 0
    for name in ("valuations.tsv", "classification.json", "map.txt", "map.svg"):
        assert (out / name).exists()
    doc = json.loads((out / "classification.json").read_text())
    assert doc["valuation_map_ref"] == "valuations.tsv"


def test_ascii_map_round_trips(strip_scenario, tmp_path, monkeypatch):
    monkeypatch.setenv("DKDV_OUT", str(tmp_path / "env"))
    assert main(["simulate", str(strip_scenario), "--out", str(tmp_path / "ignored")]) == 0
    out = tmp_path / "env"
    assert not (tmp_path / "ignored").exists()
    doc = json.loads((out / "classification.json").read_text())
    M, N = doc["window"]
    parsed = parse_ascii((out / "map.txt").read_text(), M, N)
    assert parsed == ValuationMap.from_tsv((out / "valuations.tsv").read_text())


def test_lambda_zero_is_malformed(tmp_path, capsys):
    doc = reference_scenario("w2_q1").to_json()
    doc["lambda"] = 0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert main(["simulate", str(path), "--out", str(tmp_path)]) == 3
    assert "lambda" in capsys.readouterr().err


def test_unreadable_scenario(tmp_path, capsys):
    assert main(["simulate", str(tmp_path / "missing.json")]) == 3
    path = tmp_path / "broken.json"
    path.write_text("{")
    assert main(["crosscheck", str(path)]) == 3


def test_precision_failure_exit_code(strip_scenario, tmp_path):
    assert main(["simulate", str(strip_scenario), "--truncation", "1", "--out", str(tmp_path)]) == 2


def test_predict_trace(capsys):
    assert main(["predict", "1,3,0,9@0", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 7
    assert lines[-1].split() == ["6*", "0,0,3,5,4,1@0"]
    assert main(["predict", "3,5,4,1@0", "4", "--top-down"]) == 0
    assert capsys.readouterr().out.splitlines()[-1].split()[-1] == "1,3,0,6,3,0"
    assert main(["predict", "0@0", "1"]) == 0
    assert capsys.readouterr().out.split()[-1] == "0@0"


def test_predict_bad_input():
    assert main(["predict", "1,x", "2"]) == 3


def test_crosscheck_exit_codes(tmp_path):
    assert main(["crosscheck", "--preset", "w3_q1"]) == 0
    doc = reference_scenario("w3_q1").to_json()
    doc["expected"] = "3@8"
    path = tmp_path / "wrong.json"
    path.write_text(json.dumps(doc))
    assert main(["crosscheck", str(path)]) == 1
    doc = reference_scenario("w3_q1").to_json()
    doc["window"] = [6, 20]
    path.write_text(json.dumps(doc))
    assert main(["crosscheck", str(path)]) == 2


def test_sweep_directory(tmp_path, capsys):
    for name in ("w1_q1", "w2_q1"):
        reference_scenario(name).dump(tmp_path / f"{name}.json")
    out = tmp_path / "out"
    assert main(["sweep", "--dir", str(tmp_path), "--jobs", "2", "--out", str(out)]) == 0
    assert len(json.loads((out / "sweep.json").read_text())) == 2
    text = capsys.readouterr().out
    assert "w1_q1" in text and "w2_q1" in text


def test_smoke1d_command():
    assert main(["smoke1d"]) == 0


def test_glyphs_are_injective():
    vals = list(range(-26, 36))
    assert len({glyph(v) for v in vals}) == len(vals)
    with pytest.raises(ValueError):
        glyph(-27)


def test_render_ascii_orientation():
    vm = ValuationMap(1, 1, [[0, -1], [1, None]])
    assert render_ascii(vm) == "A \n.1\n"
