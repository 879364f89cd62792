import json
from dataclasses import replace

import pytest

from dkdv.errors import ScenarioError
from dkdv.harness import (
    Scenario,
    auto_window,
    confinement_test,
    reference_scenario,
    run_crosscheck,
    strip_diagonal_scenario,
    summary_table,
    sweep,
)
from dkdv.rules import WeightVector


def test_scenario_json_round_trip(tmp_path):
    sc = reference_scenario("w1.2.0.6_q2+2+1")
    path = tmp_path / "s.json"
    sc.dump(path)
    again = Scenario.load(path)
    assert again.to_json() == sc.to_json()
    assert again.q_total == 5
    assert len(again.intermediate) == 2


@pytest.mark.parametrize(
    "patch,field",
    [
        ({"lambda": 0}, "lambda"),
        ({"lambda": "x"}, "lambda"),
        ({"seeds": "none"}, "seeds"),
        ({"seeds": [{"variant": "Pole", "position": [0, 0]}]}, "seeds[0].variant"),
        ({"seeds": [{"variant": "Zero", "position": [0, 0]}]}, "seeds[0].weight"),
        ({"window": [3]}, "window"),
        ({"border_shape": "Circle"}, "border_shape"),
        ({"prng_seed": -4}, "prng_seed"),
    ],
)
def test_malformed_scenarios_name_the_field(patch, field):
    doc = reference_scenario("w2_q1").to_json()
    doc.update(patch)
    with pytest.raises(ScenarioError) as err:
        Scenario.from_json(doc)
    assert err.value.field == field


def test_auto_window_fits_geometry():
    sc = strip_diagonal_scenario((2,), 1)
    assert auto_window(sc.seeds) == sc.window


def test_crosscheck_agrees_and_conserves():
    report = run_crosscheck(reference_scenario("w2_q1"))
    assert report.verdict == "Agree"
    assert report.east == WeightVector(9, (2,))
    assert report.west.total == report.east.total
    assert report.seeds_used == [0, 1]
    assert "Agree" in summary_table([report])


def test_intermediate_profiles_are_checked():
    report = run_crosscheck(reference_scenario("w1.2.0.6_q2+2+1"))
    assert report.verdict == "Agree"
    assert [q for q, _, _ in report.intermediate] == [2, 4]
    assert all(m == p for _, m, p in report.intermediate)


def test_wrong_expectation_disagrees():
    sc = replace(reference_scenario("w2_q1"), expected=WeightVector(8, (2,)))
    report = run_crosscheck(sc)
    assert report.verdict == "Disagree"
    assert any("expected" in d for d in report.details)


def test_tiny_truncation_is_inconclusive():
    sc = reference_scenario("w3_q1")
    report = run_crosscheck(replace(sc, params=sc.params.with_budget(1)))
    assert report.verdict == "Inconclusive"
    assert report.truncation_used == 2


def test_tiny_window_is_inconclusive():
    report = run_crosscheck(replace(reference_scenario("w3_q1"), window=(6, 20)))
    assert report.verdict == "Inconclusive"
    assert report.window_used == (12, 40)


def test_crosscheck_preconditions():
    sc = reference_scenario("w2_q1")
    with pytest.raises(ScenarioError):
        run_crosscheck(replace(sc, params=replace(sc.params, lam=2)))
    with pytest.raises(ScenarioError):
        run_crosscheck(replace(sc, seeds=sc.seeds[:1]))


def test_agree_is_stable_under_doubled_budget():
    sc = reference_scenario("w5_q3")
    base = run_crosscheck(sc)
    doubled = run_crosscheck(replace(sc, params=sc.params.with_budget(2 * sc.params.truncation_budget)))
    assert base.verdict == doubled.verdict == "Agree"
    assert base.east == doubled.east


def test_parallel_sweep_matches_serial():
    scs = [reference_scenario("w1_q1"), reference_scenario("w2_q1")]
    assert [r.to_json() for r in sweep(scs, jobs=2)] == [r.to_json() for r in sweep(scs)]


def test_report_json_is_serialisable():
    doc = run_crosscheck(reference_scenario("w1_q1")).to_json()
    assert json.loads(json.dumps(doc))["east"] == {"base_row": 10, "weights": [1]}


def test_confinement_precondition():
    with pytest.raises(ScenarioError):
        confinement_test(1, 0)
