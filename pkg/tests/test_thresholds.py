import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weilneg.special_fn import QuadratureSpec
from weilneg.test_fn import FejerTestFunction
from weilneg.thresholds import (Classification, PredictionOutcome, ThresholdResult,
                                a2_upper_bound, classify, compute_thresholds)

LOG2 = math.log(2)
W2 = (0.25, 0.75)


@pytest.fixture(scope="module")
def th2():
    return compute_thresholds(2, W2)


def test_ratio_identity(th2):
    want = 2 * LOG2 * (1 - LOG2) / math.sqrt(2)
    assert math.log(th2.q1 / th2.q0) == pytest.approx(want, abs=1e-12)
    assert want == pytest.approx(0.3007950, abs=1e-7)


@pytest.mark.parametrize("tol", [1e-4, 1e-8])
@pytest.mark.parametrize("d,mu", [(1, (0.0,)), (2, (2.75, 3.25)), (3, (0.0, 0.5, 1.0))])
def test_ratio_identity_any_degree(d, mu, tol):
    th = compute_thresholds(d, mu, spec=QuadratureSpec(tol))
    assert math.log(th.q1 / th.q0) == pytest.approx(d * LOG2 * (1 - LOG2) / math.sqrt(2), abs=1e-9)


@pytest.mark.parametrize("mu", [W2, (2.75, 3.25)])
def test_rank_step(mu):
    q = [compute_thresholds(2, mu, rank=r).q0 for r in range(4)]
    for a, b in zip(q, q[1:]):
        assert b / a == pytest.approx(math.exp(0.5), abs=1e-9)


def test_weight12_level1_clears_q0():
    assert compute_thresholds(2, (2.75, 3.25)).q0 < 1.0


def test_thresholds_against_closed_form(th2, kappa2):
    # log q0 = pi [ -(ell(1/4) + ell(3/4))/(2 pi) - 2 kappa2 log 2 ], oracle ell values
    from oracles import ell_gauss
    ells = ell_gauss(0.25) + ell_gauss(0.75)
    assert math.log(th2.q0) == pytest.approx(math.pi * (-ells / (2 * math.pi)
                                                        - 2 * kappa2 * LOG2), abs=1e-8)
    assert th2.kappa2 == pytest.approx(kappa2)
    assert th2.assumptions.ramanujan and th2.assumptions.riemann_hypothesis


def test_a2_bound_at_thresholds(th2):
    assert a2_upper_bound(2, W2, th2.q1) == pytest.approx(0.0, abs=1e-9)
    assert a2_upper_bound(2, W2, th2.q0) == pytest.approx(-2.0, abs=1e-9)


def test_a2_slope(th2):
    slope = (a2_upper_bound(2, W2, 10.0) - a2_upper_bound(2, W2, 1.0)) / math.log(10)
    assert slope == pytest.approx(math.sqrt(2) / (LOG2 * (1 - LOG2)), rel=1e-12)
    assert slope == pytest.approx(6.64904, abs=1e-5)


def test_classify_examples(th2):
    assert classify(th2.q0 / 2, 2, W2).classification is Classification.Impossible
    mid = classify(math.sqrt(th2.q0 * th2.q1), 2, W2)
    assert mid.classification is Classification.ForcedNegativeA2
    assert mid.a2_upper_bound < 0
    assert classify(th2.q0, 2, W2).classification is Classification.Impossible
    assert classify(th2.q1, 2, W2).classification is Classification.ForcedNegativeA2
    assert classify(th2.q1 * 1.0001, 2, W2).classification is Classification.Unconstrained
    assert classify(th2.q0 / 2, 2, W2).a2_upper_bound is None


def test_weight4_level10_not_constrained():
    out = classify(math.sqrt(10), 2, (0.75, 1.25))
    assert out.classification is Classification.Unconstrained


def test_classify_monotone_ladder(th2):
    qs = np.geomspace(th2.q0 / 4, 4 * th2.q1, 100)
    idx = [classify(q, 2, W2, thresholds=th2).classification for q in qs]
    assert all(b >= a for a, b in zip(idx, idx[1:]))
    assert set(idx) == set(Classification)


def test_monotone_in_rank_and_mu():
    for r in range(3):
        a, b = compute_thresholds(2, W2, r), compute_thresholds(2, W2, r + 1)
        assert b.q0 > a.q0 and b.q1 > a.q1
    grid = [0.0, 1.0, 4.0, 8.0]
    q0 = [compute_thresholds(1, (m,)).q0 for m in grid]
    assert all(b < a for a, b in zip(q0, q0[1:]))


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 50.0), st.integers(0, 3))
def test_outcome_invariants(q, rank):
    out = classify(q, 2, W2, rank)
    th = out.thresholds
    assert (out.classification is Classification.Impossible) == (q <= th.q0)
    if out.classification is Classification.ForcedNegativeA2:
        assert out.a2_upper_bound <= 1e-9


def test_validation():
    with pytest.raises(ValueError):
        compute_thresholds(2, (0.25,))
    with pytest.raises(ValueError):
        compute_thresholds(2, W2, rank=-1)
    with pytest.raises(ValueError):
        classify(0.0, 2, W2)
    with pytest.raises(ValueError):
        ThresholdResult(2.0, 1.0, 0, 0.0)
    th = compute_thresholds(2, W2)
    with pytest.raises(ValueError):
        PredictionOutcome(Classification.ForcedNegativeA2, 0.5, th, 3.0)


def test_wider_window_keeps_ratio_structure():
    tf = FejerTestFunction(math.log(4.5) / (2 * math.pi))
    th = compute_thresholds(2, W2, tf=tf)
    # only the n = 2 term differs between the two thresholds
    w2 = (1 - math.log(2) / math.log(4.5)) / (math.pi * math.sqrt(2))
    assert math.log(th.q1 / th.q0) == pytest.approx(math.pi * w2 * 2 * LOG2, abs=1e-12)
