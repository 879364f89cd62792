import hypothesis.strategies as st
import pytest
from hypothesis import given

from dkdv.errors import DegenerateTaishi
from dkdv.rules import (
    WeightVector,
    canonicalize,
    closed_form_taishi,
    combine,
    elementary_step,
    interact_diagonal,
    interaction_trace,
    scenario_predict,
    single_strip_rule,
    split_taishi,
)

weights = st.lists(st.integers(0, 9), min_size=1, max_size=8)


def test_parse_and_print():
    wv = WeightVector.parse("1,3,0,9@5")
    assert wv == WeightVector(5, (1, 3, 0, 9))
    assert str(wv) == "1,3,0,9@5"
    assert WeightVector.from_top_down([9, 0, 3, 1]).w == (1, 3, 0, 9)
    with pytest.raises(ValueError):
        WeightVector.parse("")
    with pytest.raises(ValueError):
        WeightVector(0, (1, -1))


def test_elementary_step_examples():
    assert elementary_step(WeightVector(0, (1, 3, 0, 9))).w == (0, 4, 0, 8, 1)
    assert elementary_step(WeightVector(0, (0,))).w == (0,)
    assert elementary_step(WeightVector(0, (2,))).w == (1, 1)


def test_trace_length():
    assert len(interaction_trace(WeightVector(0, (3,)), 4)) == 9


def test_zero_vector_is_unchanged():
    assert interact_diagonal(WeightVector(0, (0,)), 1).w == (0,)


@pytest.mark.parametrize(
    "p,q,k,lower,upper",
    [(1, 1, 2, 1, 0), (2, 1, 1, 2, 0), (3, 1, 0, 1, 2), (5, 3, 1, 4, 1), (2, 4, 4, 2, 0), (3, 7, 4, 1, 2)],
)
def test_single_strip_rule(p, q, k, lower, upper):
    out = single_strip_rule(p, q)
    assert (out.k, out.n_tilde, out.p_tilde) == (k, lower, upper)
    assert out.placed(0) == canonicalize(interact_diagonal(WeightVector(0, (p,)), q))


def test_closed_form_merge_case():
    # 2q + p a multiple of n + p: the taishi collapses to one strip
    out = closed_form_taishi(2, 0, 1)
    assert (out.k, out.n_tilde, out.p_tilde) == (0, 0, 2)
    with pytest.raises(DegenerateTaishi):
        closed_form_taishi(0, 0, 2)


@given(st.integers(0, 8), st.integers(0, 8), st.integers(1, 10))
def test_closed_form_equals_dynamics(n, p, q):
    if n + p == 0:
        return
    out = closed_form_taishi(n, p, q)
    assert out.n_tilde + out.p_tilde == n + p
    assert out.placed(0) == canonicalize(interact_diagonal(WeightVector(0, (n, p)), q))


@given(weights, st.integers(1, 6))
def test_total_weight_conserved(w, q):
    wv = WeightVector(0, w)
    assert all(v.total == wv.total for v in interaction_trace(wv, q))


def test_scenario_b_reference():
    out = scenario_predict((1, 2), 0, (5, 2), 3, 5)
    assert out.scenario == "B"
    assert out.upper_vector == WeightVector(3, (1, 6))
    assert out.lower_vector == WeightVector(6, (3,))
    assert out.vector() == WeightVector(3, (1, 6, 0, 3))
    assert scenario_predict((3, 0), 0, (7, 0), 2, 5).vector() == WeightVector(2, (3, 4, 0, 2, 1))


def test_scenario_a_when_far_apart():
    out = scenario_predict((1, 0), 0, (1, 0), 10, 1)
    assert out.scenario == "A"
    assert out.vector() == WeightVector(2, (1,) + (0,) * 9 + (1,))


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(1, 6), st.integers(3, 13))
def test_scenario_prediction_matches_dynamics(n, p, N, P, q, R):
    if n + p == 0 or N + P == 0:
        return
    out = scenario_predict((n, p), 0, (N, P), R, q)
    if out.scenario == "Ongoing":
        return
    w = [0] * (R + 2)
    w[0], w[1], w[R], w[R + 1] = n, p, N, P
    assert out.vector() == canonicalize(interact_diagonal(WeightVector(0, w), q))


def test_scenario_rejects_overlap():
    with pytest.raises(ValueError):
        scenario_predict((1, 2), 0, (1, 1), 1, 2)


def test_split_and_combine():
    wv = WeightVector(3, (0, 1, 2, 0, 0, 5))
    parts = split_taishi(wv)
    assert parts == [WeightVector(4, (1, 2)), WeightVector(8, (5,))]
    assert combine(parts) == canonicalize(wv)
    assert canonicalize(WeightVector(1, (0, 0))) == WeightVector(1, ())
