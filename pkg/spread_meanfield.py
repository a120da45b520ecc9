'''Spread_MeanField

mean-field counterpart of the spreading dynamics

With a (piecewise) constant effective rate A, the known density follows the logistic equation

    di/dt = A * i * (1 - i),     i(0) = i0

whose solution is

    i(t) = i0 * e^(A t) / (1 - i0 + i0 * e^(A t))

A is the mean over the known nodes of the unclamped spreading rate. A fixed-step
Runge-Kutta integrator of the same equation serves as a numerical cross-check.

>>> p = MeanFieldParams(i0=0.005, effective_rate=0.1)
>>> round(closed_form_density(50, p).i, 4)
0.4272
'''

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.optimize import curve_fit

from spread_dynamics import neutral_confidence, raw_spread_rates
from spread_errors import InvalidConfigError, InvalidInputError, InternalStateError


@dataclass(frozen=True)
class MeanFieldParams:
    i0: float
    effective_rate: float

    def __post_init__(self):
        if not (0.0 < self.i0 < 1.0):
            raise InvalidConfigError("i0 must lie in (0, 1), got %r" % (self.i0,), value=self.i0)
        if not math.isfinite(self.effective_rate):
            raise InvalidConfigError("effective rate must be finite, got %r" % (self.effective_rate,),
                                     value=self.effective_rate)


@dataclass(frozen=True)
class DensityPoint:
    t: float
    s: float
    i: float


def effective_rate(state, g, params):
    '''A: mean unclamped spreading rate over the known nodes, with the current <c>'''
    if not state.known.any():
        raise InternalStateError("effective rate needs at least one known node")
    raw = raw_spread_rates(state, g, neutral_confidence(state), params)
    return float(np.mean(raw[state.known]))


def _logistic(t, i0, rate):
    # i(t) in the overflow-safe form 1 / (1 + (1 - i0)/i0 * e^(-A t))
    t = np.asarray(t, dtype=np.float64)
    with np.errstate(over='ignore'):
        return 1.0 / (1.0 + (1.0 - i0) / i0 * np.exp(-rate * t))


def closed_form_density(t, p):
    '''closed-form solution of the logistic equation at time t

    saturates to i = 1 (A > 0) or i = 0 (A < 0) when e^(A t) overflows
    '''
    if t < 0:
        raise InvalidInputError("t must be non-negative, got %r" % (t,), value=t)
    if t == 0:
        i = p.i0
    else:
        i = float(_logistic(t, p.i0, p.effective_rate))
    return DensityPoint(float(t), 1.0 - i, i)


def _rhs(i, rate):
    return rate * i * (1.0 - i)


def integrate_logistic(p, t_max, dt):
    '''fourth-order Runge-Kutta solution of di/dt = A i (1 - i) on the grid 0, dt, 2 dt, ... <= t_max'''
    if not (dt > 0):
        raise InvalidInputError("dt must be positive, got %r" % (dt,), value=dt)
    if t_max < dt:
        raise InvalidInputError("t_max must be at least dt, got t_max=%r, dt=%r" % (t_max, dt), value=t_max)

    n_steps = int(math.floor(t_max / dt + 1e-9))
    rate = p.effective_rate
    i = np.empty(n_steps + 1)
    i[0] = p.i0
    for n in range(n_steps):
        y = i[n]
        k1 = _rhs(y, rate)
        k2 = _rhs(y + 0.5 * dt * k1, rate)
        k3 = _rhs(y + 0.5 * dt * k2, rate)
        k4 = _rhs(y + dt * k3, rate)
        i[n + 1] = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)

    t = np.arange(n_steps + 1) * dt
    return [DensityPoint(float(tt), 1.0 - float(ii), float(ii)) for tt, ii in zip(t, i)]


def density_curve(t, p):
    '''vectorized closed form: known density for an array of times'''
    return _logistic(t, p.i0, p.effective_rate)


def two_phase_density(t, i0, rate_before, rate_after, t_a):
    '''closed form with the rate switching at t_a, re-solved from (t_a, i(t_a))'''
    t = np.asarray(t, dtype=np.float64)
    i_a = float(_logistic(t_a, i0, rate_before))
    before = _logistic(t, i0, rate_before)
    # i(t_a) can saturate to exactly 0 or 1, where the logistic is stationary
    if i_a <= 0.0 or i_a >= 1.0:
        after = np.full_like(t, i_a)
    else:
        after = _logistic(t - t_a, i_a, rate_after)
    return np.where(t < t_a, before, after)


def fit_logistic_rate(t, i, i0=None):
    '''least-squares estimate of A for a density series (i0 defaults to the first value)'''
    t = np.asarray(t, dtype=np.float64)
    i = np.asarray(i, dtype=np.float64)
    if len(t) != len(i) or len(t) < 3:
        raise InvalidInputError("need at least three (t, i) points of equal length", value=len(t))
    if i0 is None:
        i0 = float(i[0])
    if not (0.0 < i0 < 1.0):
        raise InvalidInputError("initial density must lie in (0, 1), got %r" % (i0,), value=i0)

    guess = 4.0 / max(float(t[-1] - t[0]), 1e-9)
    try:
        popt, _ = curve_fit(lambda tt, rate: _logistic(tt, i0, rate), t, i, p0=[guess])
    except RuntimeError as e:
        raise InvalidInputError("logistic fit did not converge: %s" % e, orig_error=e)
    return float(popt[0])


def synthetic_progress_series(rate, i0, t_f, points=101):
    '''closed-form density on spreading progress R = 100 t / t_f, as an r_percent,density table'''
    r = np.linspace(0.0, 100.0, points)
    density = _logistic(r / 100.0 * t_f, i0, rate)
    return pd.DataFrame({'r_percent': r, 'density': density})
