import math

import numpy as np
import pytest

from spread_config import EfficiencyParams, Verdict
from spread_errors import InvalidInputError, DomainError
from spread_efficiency import (detect_tf, steps_to_coverage, intervention_position, response_cost,
                               time_sensitivity, efficiency_denominator, inhibition_rate, score_true, score_false)

P = EfficiencyParams()


# == END OF SPREAD ==

def test_detect_tf_plateau():
    assert detect_tf([0.1, 0.5, 0.9, 0.9, 0.9, 0.9], eps=5e-4, window=3) == 5


def test_detect_tf_never_quiet():
    assert detect_tf([0.01 * t for t in range(30)], eps=5e-4, window=5) is None


def test_detect_tf_single_quiet_step_is_not_the_end():
    series = [0.1, 0.2, 0.2, 0.3, 0.4, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5]
    assert detect_tf(series, window=5) == 10


def test_detect_tf_one_node_steps_are_not_quiet():
    # N = 2000: a single new node changes the density by exactly eps
    counts = np.arange(100, 120)
    assert detect_tf(counts / 2000.0, eps=5e-4, window=5) is None


def test_detect_tf_stable_under_appending():
    series = [0.1, 0.4, 0.8, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9]
    t_f = detect_tf(series, window=5)
    assert detect_tf(series + [0.9, 0.9, 0.9], window=5) == t_f


def test_detect_tf_too_short():
    with pytest.raises(InvalidInputError):
        detect_tf([0.1, 0.2, 0.3], window=5)


def test_steps_to_coverage():
    assert steps_to_coverage([0.1, 0.5, 0.95, 0.99], 0.95) == 2
    assert steps_to_coverage([0.1, 0.5, 0.9], 0.95) is None


# == INTERVENTION POSITION ==

def test_intervention_position():
    assert intervention_position(150, 1000) == 0.15
    assert intervention_position(0, 1000) == 0.0
    assert intervention_position(1000, 1000) == 1.0


@pytest.mark.parametrize('t_a, t_f', [(10, 0), (11, 10), (-1, 10)])
def test_intervention_position_invalid(t_a, t_f):
    with pytest.raises(InvalidInputError):
        intervention_position(t_a, t_f)


# == COSTS ==

def test_denominator_at_half():
    assert response_cost(0.5, P.a) == pytest.approx(0.4470, abs=1e-4)
    assert time_sensitivity(0.5, P.b) == pytest.approx(0.5900, abs=1e-4)
    assert efficiency_denominator(0.5, P) == pytest.approx(1.0370, abs=1e-4)


@pytest.mark.parametrize('tau', [0.001, 0.01, 0.2, 0.5, 0.8, 0.99, 0.999])
def test_denominator_positive(tau):
    assert efficiency_denominator(tau, P) > 0


def test_denominator_diverges_at_both_ends():
    middle = efficiency_denominator(0.5, P)
    assert efficiency_denominator(1e-9, P) > 10 * middle
    assert efficiency_denominator(1 - 1e-9, P) > 10 * middle


@pytest.mark.parametrize('tau', [0.0, 1.0, -0.1, 1.5])
def test_tau_outside_domain(tau):
    with pytest.raises(DomainError):
        score_true(tau, 1000, 600, P)
    with pytest.raises(DomainError):
        score_false(tau, 0.9, 0.5, P)


# == SCORES ==

def test_score_true_example():
    report = score_true(0.2, 1000, 600, P)
    assert report.verdict is Verdict.TRUE
    assert report.numerator_fraction == pytest.approx(0.4)
    assert report.denominator == pytest.approx(1.0379 + 0.1900, abs=1e-4)
    assert report.score == pytest.approx(0.2645, abs=1e-4)


def test_score_true_no_gain():
    assert score_true(0.2, 1000, 1000, P).score == 0.0
    assert score_true(0.2, 1000, None, P).score == 0.0


def test_score_true_decreasing_in_tt():
    scores = [score_true(0.3, 1000, tt, P).score for tt in (100, 400, 700, 1000)]
    assert all(b < a for a, b in zip(scores, scores[1:]))


def test_score_true_tt_beyond_t0():
    with pytest.raises(DomainError):
        score_true(0.2, 1000, 1200, P)


def test_score_false_example():
    report = score_false(0.07, 0.95, 0.30, P)
    assert report.verdict is Verdict.FALSE
    assert report.numerator_fraction == pytest.approx(0.6842, abs=1e-4)
    assert report.denominator == pytest.approx(1.7149 + 0.0618, abs=1e-3)
    assert report.score == pytest.approx(0.0724, abs=1e-4)


def test_score_false_no_suppression():
    assert score_false(0.3, 0.9, 0.9, P).score == 0.0


def test_score_false_decreasing_in_if():
    scores = [score_false(0.1, 0.9, i, P).score for i in (0.1, 0.3, 0.6, 0.9)]
    assert all(b < a for a, b in zip(scores, scores[1:]))


def test_score_false_if_above_i0():
    with pytest.raises(DomainError):
        score_false(0.2, 0.5, 0.6, P)


def test_inhibition_rate():
    assert inhibition_rate(0.8, 0.2) == pytest.approx(0.75)
    with pytest.raises(DomainError):
        inhibition_rate(0.0, 0.0)


def test_log_bases():
    assert response_cost(0.2121, 0.2121) == pytest.approx(1.0)
    assert time_sensitivity(1 - 0.3089, 0.3089) == pytest.approx(1.0)
    assert response_cost(0.5, 0.25) == pytest.approx(math.log(0.5) / math.log(0.25))
