import numpy as np
import pytest

from spread_config import SimConfig, RateParams, Phase
from spread_errors import InvalidConfigError, InvalidInputError, InternalStateError
from spread_dynamics import SpreadState, run, raw_spread_rates, neutral_confidence
import spread_meanfield
from spread_batch import average_replicates
from spread_meanfield import (MeanFieldParams, effective_rate, closed_form_density, integrate_logistic,
                              density_curve, two_phase_density, fit_logistic_rate, synthetic_progress_series)


def state_with(n, nodes, confidences, credibilities=None, phase=Phase.UNCONFIRMED):
    state = SpreadState(n)
    state.known[nodes] = True
    state.confidence[nodes] = confidences
    if credibilities is not None:
        state.credibility[nodes] = credibilities
    state.phase = phase
    return state


# == PARAMETERS ==

@pytest.mark.parametrize('i0, rate', [(0.0, 0.1), (1.0, 0.1), (0.5, float('inf')), (0.5, float('nan'))])
def test_params_validated(i0, rate):
    with pytest.raises(InvalidConfigError):
        MeanFieldParams(i0=i0, effective_rate=rate)


# == EFFECTIVE RATE ==

def test_effective_rate_neutral_confirmed(path3):
    state = state_with(3, [0, 2], [0.5, 0.5], phase=Phase.CONFIRMED)
    assert effective_rate(state, path3, RateParams()) == 0.0


def test_effective_rate_symmetric_unconfirmed(path3):
    state = state_with(3, [0, 1], [0.7, 0.9])
    assert effective_rate(state, path3, RateParams()) == pytest.approx(0.0, abs=1e-12)


def test_effective_rate_confirmed(path3):
    # degrees 1, 2, 1: <k> = 4/3, k_max = 2, so leaves have weight -1/6
    state = state_with(3, [0, 2], [0.9, 0.7], phase=Phase.CONFIRMED)
    assert effective_rate(state, path3, RateParams()) == pytest.approx(0.3875 * 0.3)


def test_effective_rate_is_unclamped_mean(small_graph):
    rng = np.random.default_rng(5)
    nodes = rng.choice(300, size=40, replace=False)
    state = state_with(300, nodes, rng.random(40), rng.uniform(-0.5, 0.5, 40), phase=Phase.CONFIRMED)
    params = RateParams()

    expected = []
    for p in nodes:
        w = (small_graph.degrees[p] - small_graph.avg_degree) / small_graph.max_degree
        expected.append(params.lambda1 * (state.confidence[p] - 0.5) + params.lambda2 * state.credibility[p] * w)
    assert effective_rate(state, small_graph, params) == pytest.approx(np.mean(expected))
    raw = raw_spread_rates(state, small_graph, neutral_confidence(state), params)
    assert np.isnan(raw[~state.known]).all()


def test_effective_rate_without_known_nodes(path3):
    with pytest.raises(InternalStateError):
        effective_rate(SpreadState(3), path3, RateParams())


# == CLOSED FORM ==

def test_closed_form_example():
    p = MeanFieldParams(i0=0.005, effective_rate=0.1)
    point = closed_form_density(50, p)
    assert point.i == pytest.approx(0.005 * np.exp(5) / (0.995 + 0.005 * np.exp(5)))
    assert point.i == pytest.approx(0.4272, abs=1e-4)
    assert point.s + point.i == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize('rate', [-0.2, 0.0, 0.1, 3.0])
def test_closed_form_at_zero(rate):
    assert closed_form_density(0, MeanFieldParams(i0=0.013, effective_rate=rate)).i == 0.013


def test_closed_form_constant_without_rate():
    p = MeanFieldParams(i0=0.2, effective_rate=0.0)
    assert all(closed_form_density(t, p).i == pytest.approx(0.2) for t in (1, 10, 1000))


def test_closed_form_saturates():
    assert closed_form_density(1e6, MeanFieldParams(0.01, 1.0)).i == 1.0
    assert closed_form_density(1e6, MeanFieldParams(0.99, -1.0)).i == 0.0


def test_closed_form_negative_time():
    with pytest.raises(InvalidInputError):
        closed_form_density(-1, MeanFieldParams(0.1, 0.1))


def test_closed_form_monotone():
    t = np.linspace(0, 100, 201)
    assert np.all(np.diff(density_curve(t, MeanFieldParams(0.01, 0.1))) > 0)
    assert np.all(np.diff(density_curve(t, MeanFieldParams(0.9, -0.05))) < 0)


def test_closed_form_solves_logistic_equation():
    p = MeanFieldParams(i0=0.005, effective_rate=0.1)
    t = np.linspace(10, 90, 81)
    h = 1e-4
    derivative = (density_curve(t + h, p) - density_curve(t - h, p)) / (2 * h)
    i = density_curve(t, p)
    assert np.allclose(derivative, p.effective_rate * i * (1 - i), rtol=1e-6)


# == NUMERICAL INTEGRATION ==

def test_integrate_endpoint():
    p = MeanFieldParams(i0=0.005, effective_rate=0.1)
    points = integrate_logistic(p, 50, 0.01)
    assert points[-1].t == pytest.approx(50)
    assert points[-1].i == pytest.approx(closed_form_density(50, p).i, abs=1e-8)


@pytest.mark.parametrize('rate', [-0.2, 0.0, 0.1, 0.5])
def test_integrate_matches_closed_form(rate):
    p = MeanFieldParams(i0=0.005 if rate >= 0 else 0.9, effective_rate=rate)
    points = integrate_logistic(p, 100, 0.01)
    t = np.array([pt.t for pt in points])
    i = np.array([pt.i for pt in points])
    assert np.max(np.abs(i - density_curve(t, p))) < 1e-6
    assert all(abs(pt.s + pt.i - 1.0) < 1e-12 for pt in points)


def test_integrate_constant_without_rate():
    points = integrate_logistic(MeanFieldParams(0.3, 0.0), 10, 0.5)
    assert len(points) == 21
    assert all(pt.i == 0.3 for pt in points)


@pytest.mark.parametrize('t_max, dt', [(10, 0), (10, -0.1), (0.05, 0.1)])
def test_integrate_invalid(t_max, dt):
    with pytest.raises(InvalidInputError):
        integrate_logistic(MeanFieldParams(0.1, 0.1), t_max, dt)


# == TWO PHASES / FITTING ==

def test_two_phase_density():
    t = np.arange(0, 200)
    curve = two_phase_density(t, 0.005, 0.1, 0.0, t_a=40)
    before = density_curve(t[:40], MeanFieldParams(0.005, 0.1))
    assert np.allclose(curve[:40], before)
    assert np.allclose(curve[40:], closed_form_density(40, MeanFieldParams(0.005, 0.1)).i)


def test_two_phase_density_continuous():
    curve = two_phase_density(np.array([29.999999, 30.0]), 0.01, 0.2, 0.05, t_a=30)
    assert curve[1] == pytest.approx(curve[0], abs=1e-5)


def test_fit_logistic_rate_recovers_rate():
    t = np.arange(0, 101)
    i = density_curve(t, MeanFieldParams(0.005, 0.1))
    assert fit_logistic_rate(t, i) == pytest.approx(0.1, rel=1e-4)


def test_fit_logistic_rate_invalid():
    with pytest.raises(InvalidInputError):
        fit_logistic_rate([0, 1], [0.1, 0.2])
    with pytest.raises(InvalidInputError):
        fit_logistic_rate([0, 1, 2], [0.0, 0.1, 0.2])


def test_fit_logistic_rate_not_converging(monkeypatch):
    def no_fit(*args, **kwargs):
        raise RuntimeError('Optimal parameters not found: Number of calls to function has reached maxfev = 600.')
    monkeypatch.setattr(spread_meanfield, 'curve_fit', no_fit)

    with pytest.raises(InvalidInputError) as e:
        fit_logistic_rate(np.arange(10), np.linspace(0.1, 0.5, 10))
    assert 'did not converge' in str(e.value)
    assert isinstance(e.value.original_error, RuntimeError)


def test_synthetic_progress_series():
    frame = synthetic_progress_series(0.1, 0.005, t_f=100, points=11)
    assert list(frame.columns) == ['r_percent', 'density']
    assert frame['r_percent'].tolist() == pytest.approx([10.0 * k for k in range(11)])
    assert frame['density'].iloc[0] == pytest.approx(0.005)
    assert frame['density'].is_monotonic_increasing


# == AGENT-BASED CONSISTENCY ==

@pytest.mark.slow
def test_complete_graph_tracks_closed_form(k200, no_tf_eff):
    alpha = 1e-4
    config = SimConfig(i0=0.1, max_steps=300, eff=no_tf_eff)
    rates = np.full(200, alpha)
    traces = [run(k200, config, seed=k, rates=rates) for k in range(100)]
    mean = average_replicates(traces)

    t = np.arange(len(mean.i))
    expected = density_curve(t, MeanFieldParams(i0=0.1, effective_rate=alpha * 200))
    assert len(mean.i) == 301
    assert np.max(np.abs(mean.i - expected)) < 0.05
