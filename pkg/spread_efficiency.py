'''Spread_Efficiency

intervention timing: end-of-spread detection, intervention position and efficiency scores

The efficiency of an announcement at position tau = t_a / t_f is a gain divided by the
sum of two costs:

    response cost       log_a(tau)        (very early announcements are expensive)
    time sensitivity    log_b(1 - tau)    (late announcements lose their effect)

    E_true(tau)  = eps1 * (T0 - Tt) / T0 / (log_a(tau) + log_b(1 - tau))
    E_false(tau) = eps2 * (I0 - If) / I0 / (log_a(tau) + log_b(1 - tau))

T0: duration of the free spread, Tt: steps to reach coverage when verified true,
I0: final known density of the free spread, If: final known density when verified false.

>>> from spread_config import EfficiencyParams
>>> round(efficiency_denominator(0.5, EfficiencyParams()), 4)
1.037
'''

import math
from dataclasses import dataclass

import numpy as np

from spread_config import Verdict
from spread_errors import InvalidInputError, DomainError


@dataclass(frozen=True)
class EfficiencyReport:
    tau: float
    verdict: Verdict
    numerator_fraction: float   # (T0 - Tt) / T0 or (I0 - If) / I0
    denominator: float
    score: float


# == END OF SPREAD ==

def detect_tf(series, eps=5e-4, window=5):
    '''end of spreading moment t_f

    smallest step t such that |i(u) - i(u-1)| < eps for all u in [t - window + 1, t];
    returns None if the series never stays quiet for window consecutive steps

    >>> detect_tf([0.1, 0.5, 0.9, 0.9, 0.9, 0.9], eps=5e-4, window=3)
    5
    >>> detect_tf([0.01 * t for t in range(20)], window=3) is None
    True
    '''
    series = np.asarray(series, dtype=np.float64)
    window = int(window)
    if window < 1:
        raise InvalidInputError("window must be a positive integer, got %r" % window, value=window)
    if len(series) < window + 1:
        raise InvalidInputError("series of length %d is too short for a window of %d" % (len(series), window),
                                value=len(series))

    # count/N densities carry float noise: a one-node step must not pass as a sub-eps step
    diffs = np.round(np.abs(np.diff(series)), 12)
    quiet = (diffs < eps).astype(np.int64)

    runs = np.convolve(quiet, np.ones(window, dtype=np.int64), mode='valid')
    hits = np.flatnonzero(runs == window)
    if len(hits) == 0:
        return None
    return int(hits[0]) + window


def steps_to_coverage(series, coverage=0.95):
    '''first step at which the known density reaches the coverage threshold (None if never)'''
    series = np.asarray(series, dtype=np.float64)
    hits = np.flatnonzero(series >= coverage)
    return int(hits[0]) if len(hits) else None


def intervention_position(t_a, t_f):
    '''tau = t_a / t_f

    >>> intervention_position(150, 1000)
    0.15
    '''
    if t_f is None or t_f <= 0:
        raise InvalidInputError("t_f must be positive, got %r" % (t_f,), value=t_f)
    if t_a < 0 or t_a > t_f:
        raise InvalidInputError("t_a must lie in [0, t_f], got t_a=%r, t_f=%r" % (t_a, t_f), value=t_a)
    return float(t_a) / float(t_f)


# == COST TERMS ==

def _check_tau(tau):
    if not (0.0 < tau < 1.0):
        raise DomainError("tau must lie strictly between 0 and 1, got %r" % (tau,), value=tau)


def response_cost(tau, a):
    _check_tau(tau)
    return math.log(tau) / math.log(a)


def time_sensitivity(tau, b):
    _check_tau(tau)
    return math.log(1.0 - tau) / math.log(b)


def efficiency_denominator(tau, p):
    return response_cost(tau, p.a) + time_sensitivity(tau, p.b)


def inhibition_rate(I0, If):
    '''relative reduction (I0 - If) / I0 of the final known density'''
    if not (I0 > 0):
        raise DomainError("I0 must be positive, got %r" % (I0,), value=I0)
    return (I0 - If) / I0


# == SCORES ==

def score_true(tau, T0, Tt, p):
    '''efficiency of an announcement verifying the information as true

    Tt = None (coverage never reached) scores 0
    '''
    denominator = efficiency_denominator(tau, p)
    if not (T0 > 0):
        raise DomainError("T0 must be positive, got %r" % (T0,), value=T0)
    if Tt is None:
        return EfficiencyReport(tau, Verdict.TRUE, 0.0, denominator, 0.0)
    if Tt < 0 or Tt > T0:
        raise DomainError("Tt must lie in [0, T0], got Tt=%r, T0=%r" % (Tt, T0), value=Tt)

    fraction = (T0 - Tt) / float(T0)
    return EfficiencyReport(tau, Verdict.TRUE, fraction, denominator, p.eps1 * fraction / denominator)


def score_false(tau, I0, If, p):
    '''efficiency of an announcement verifying the information as false (a rumor)'''
    denominator = efficiency_denominator(tau, p)
    if not (0.0 < I0 <= 1.0):
        raise DomainError("I0 must lie in (0, 1], got %r" % (I0,), value=I0)
    if If < 0 or If > I0:
        raise DomainError("If must lie in [0, I0], got If=%r, I0=%r" % (If, I0), value=If)

    fraction = inhibition_rate(I0, If)
    return EfficiencyReport(tau, Verdict.FALSE, fraction, denominator, p.eps2 * fraction / denominator)
