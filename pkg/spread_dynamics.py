'''Spread_Dynamics

two-stage information spreading on a network (SI dynamics with announcement control)

Every known node p carries a confidence c_p in [0,1] (0.5 = neutral) and a credibility
r_p in [-0.5, 0.5] (0 until the announcement). In every step each known node tries to pass
the information to each unknown neighbor with its spreading rate

    alpha_p = lambda1 * (c_p - <c>) + lambda2 * r_p * (k_p - <k>) / k_max

clamped to [0, 1]. <c> is the mean confidence of the known nodes before the announcement
and 0.5 afterwards.

Unconfirmed phase: new known nodes draw c uniform on [0, 1].
Announcement at t_a: the confidence of every known node is corrected towards the verdict and
nodes that were right (wrong) before the verdict gain (lose) credibility.
Confirmed phase: new known nodes draw c on [0, 0.5] (false) or [0.5, 1] (true).

Node state is kept in flat numpy arrays indexed by node id; a step is evaluated against the
known set at the start of the step (synchronous update).
'''

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from spread_config import Phase, Verdict
from spread_errors import InvalidConfigError, InvalidInputError, InternalStateError, IllegalTransitionError
from spread_efficiency import detect_tf, steps_to_coverage

log = logging.getLogger(__name__)

NEUTRAL_CONFIDENCE = 0.5


class NodeState(Enum):
    UNKNOWN = 'S'
    KNOWN = 'I'


@dataclass(frozen=True)
class NodeAttrs:
    state: NodeState
    confidence: float   # None while unknown
    credibility: float


class SpreadState(object):
    '''per-node epidemic state with confidence and credibility, plus the global phase'''

    def __init__(self, node_count):
        self.known = np.zeros(node_count, dtype=bool)
        self.confidence = np.full(node_count, np.nan)
        self.credibility = np.zeros(node_count)
        self.phase = Phase.UNCONFIRMED
        self.verdict = Verdict.FREE
        self.step_clock = 0
        self.t_a = None

    @property
    def node_count(self):
        return len(self.known)

    @property
    def known_count(self):
        return int(np.count_nonzero(self.known))

    @property
    def unknown_count(self):
        return self.node_count - self.known_count

    @property
    def density(self):
        return self.known_count / float(self.node_count)

    def attrs(self, p):
        if self.known[p]:
            return NodeAttrs(NodeState.KNOWN, float(self.confidence[p]), float(self.credibility[p]))
        return NodeAttrs(NodeState.UNKNOWN, None, float(self.credibility[p]))


@dataclass
class SpreadTrace:
    '''known node counts per step (index = step) with the intervention markers'''
    known_counts: np.ndarray
    node_count: int
    verdict: Verdict = Verdict.FREE
    t_a: int = None
    t_f: int = None
    converged: bool = False
    seed: int = None

    @property
    def i(self):
        return self.known_counts / float(self.node_count)

    @property
    def s(self):
        return (self.node_count - self.known_counts) / float(self.node_count)

    @property
    def steps(self):
        return len(self.known_counts) - 1

    @property
    def final_i(self):
        return float(self.known_counts[-1]) / self.node_count

    @property
    def phases(self):
        '''phase label per step; the row at t_a is already confirmed'''
        labels = np.full(len(self.known_counts), Phase.UNCONFIRMED.value, dtype=object)
        if self.t_a is not None:
            labels[self.t_a:] = Phase.CONFIRMED.value
        return labels

    def steps_to_coverage(self, coverage=0.95):
        return steps_to_coverage(self.i, coverage)


# == INITIALIZATION ==

def seed_count(n, i0):
    '''number of initial known nodes: round(i0 * N), at least one

    >>> seed_count(2000, 0.005), seed_count(100, 0.001)
    (10, 1)
    '''
    return min(n, max(1, int(round(i0 * n))))


def init_population(g, i0, rng):
    '''choose the initial known nodes uniformly at random and give them a confidence on [0, 1]'''
    if not (0.0 < i0 < 1.0):
        raise InvalidConfigError("i0 must lie in (0, 1), got %r" % (i0,), value=i0)

    state = SpreadState(g.node_count)
    seeds = rng.choice(g.node_count, size=seed_count(g.node_count, i0), replace=False)
    state.known[seeds] = True
    state.confidence[seeds] = rng.random(len(seeds))
    return state


# == SPREADING RATE ==

def neutral_confidence(state):
    '''<c>: mean confidence of the known nodes (unconfirmed phase) or 0.5 (confirmed phase)'''
    if state.phase is Phase.CONFIRMED:
        return NEUTRAL_CONFIDENCE
    if not state.known.any():
        raise InternalStateError("no known node to average confidence over")
    return float(np.mean(state.confidence[state.known]))


def _degree_weight(g):
    # (k_p - <k>) / k_max for all nodes
    if g.max_degree == 0:
        return np.zeros(g.node_count)
    return (g.degrees - g.avg_degree) / float(g.max_degree)


def raw_spread_rates(state, g, c_mean, params):
    '''unclamped rate of every node (NaN for unknown nodes)'''
    raw = params.lambda1 * (state.confidence - c_mean) + params.lambda2 * (state.credibility * _degree_weight(g))
    return np.where(state.known, raw, np.nan)


def spread_rates(state, g, c_mean, params):
    '''transmission probability alpha_p of every node, clamped to [0, 1]; 0 for unknown nodes'''
    raw = raw_spread_rates(state, g, c_mean, params)
    return np.clip(np.nan_to_num(raw, nan=0.0), 0.0, 1.0)


def spread_rate(node_id, state, g, c_mean, params):
    '''transmission probability alpha_p of one known node'''
    if not state.known[node_id]:
        raise InvalidInputError("node %d is not a known node" % node_id, value=node_id)

    weight = 0.0
    if g.max_degree > 0:
        weight = (g.degrees[node_id] - g.avg_degree) / float(g.max_degree)
    raw = params.lambda1 * (state.confidence[node_id] - c_mean) + \
        params.lambda2 * (state.credibility[node_id] * weight)
    return min(1.0, max(0.0, float(raw)))


# == ANNOUNCEMENT ==

def correct_confidence(state, beta, rng):
    '''confidence correction of all known nodes when the announcement reveals beta

    beta = true:  c < 0.5 -> r -= |c - 0.5|, c redrawn on (0.5, 1)
                  c >= 0.5 -> r += |c - 0.5|, c += U(0, 0.5), at most 1
    beta = false: c > 0.5 -> r -= |c - 0.5|, c redrawn on (0, 0.5)
                  c <= 0.5 -> r += |c - 0.5|, c -= U(0, 0.5), at least 0

    state is updated in place (phase, verdict and t_a are set) and returned
    '''
    if state.phase is Phase.CONFIRMED:
        raise IllegalTransitionError("announcement already happened at t=%r" % (state.t_a,), value=state.t_a)
    if beta not in (Verdict.TRUE, Verdict.FALSE):
        raise InvalidConfigError("announcement needs beta true or false, got %r" % (beta,), value=beta)

    idx = np.flatnonzero(state.known)
    c = state.confidence[idx]
    dif = np.abs(c - NEUTRAL_CONFIDENCE)
    u = rng.random(len(idx))

    if beta is Verdict.TRUE:
        wrong = c < NEUTRAL_CONFIDENCE
        new_c = np.where(wrong, NEUTRAL_CONFIDENCE + NEUTRAL_CONFIDENCE * u,
                         np.minimum(c + NEUTRAL_CONFIDENCE * u, 1.0))
    else:
        wrong = c > NEUTRAL_CONFIDENCE
        new_c = np.where(wrong, NEUTRAL_CONFIDENCE * u,
                         np.maximum(c - NEUTRAL_CONFIDENCE * u, 0.0))

    state.credibility[idx] += np.where(wrong, -dif, dif)
    state.confidence[idx] = new_c
    state.phase = Phase.CONFIRMED
    state.verdict = beta
    state.t_a = state.step_clock
    return state


def _new_confidence(state, count, rng):
    # confidence of nodes that just became known, by phase
    u = rng.random(count)
    if state.phase is Phase.UNCONFIRMED:
        return u
    if state.verdict is Verdict.FALSE:
        return NEUTRAL_CONFIDENCE * u
    return NEUTRAL_CONFIDENCE + NEUTRAL_CONFIDENCE * u


# == STEP ==

def step(state, g, params, rng, rates=None):
    '''one synchronous spreading step

    every known node p (as of the start of the step) tries each unknown neighbor independently
    with probability alpha_p; a node reached by several neighbors becomes known once.
    rates: optional precomputed per-node probabilities used instead of alpha_p

    returns (state, number of newly known nodes); state is updated in place
    '''
    if rates is None:
        rates = spread_rates(state, g, neutral_confidence(state), params)
    else:
        rates = np.clip(np.where(state.known, rates, 0.0), 0.0, 1.0)

    src = g.edge_src
    dst = g.indices
    candidates = state.known[src] & ~state.known[dst] & (rates[src] > 0)
    cand_src = src[candidates]
    cand_dst = dst[candidates]

    hits = rng.random(len(cand_src)) < rates[cand_src]
    newly = np.unique(cand_dst[hits])

    if len(newly):
        state.known[newly] = True
        state.confidence[newly] = _new_confidence(state, len(newly), rng)
        state.credibility[newly] = 0.0

    state.step_clock += 1
    return state, len(newly)


# == RUN ==

def run(g, config, announce_at=None, seed=None, rates=None):
    '''complete spreading process on network g

    config: SimConfig (i0, rate parameters, beta, max_steps, t_f rule)
    announce_at: step at which the announcement with config.beta happens (None: free spread)
    seed: seed of the numpy Generator for this run (default: config.seed)
    rates: optional fixed per-node transmission probabilities (homogeneous rate experiments)

    Stops at the end of spreading t_f (known density quiet for tf_window steps, never before
    the announcement) or after max_steps (trace.converged = False).
    '''
    if announce_at is not None:
        if config.beta is Verdict.FREE:
            raise InvalidConfigError("free spread cannot have an announcement", value=announce_at)
        if announce_at < 0:
            raise InvalidConfigError("announcement step must be non-negative, got %r" % (announce_at,),
                                     value=announce_at)

    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(seed)

    state = init_population(g, config.i0, rng)
    n = float(g.node_count)
    window = config.eff.tf_window
    counts = [state.known_count]
    t_f = None

    while state.step_clock < config.max_steps:
        if announce_at is not None and state.step_clock == announce_at:
            correct_confidence(state, config.beta, rng)

        state, _ = step(state, g, config.rate, rng, rates)
        counts.append(state.known_count)

        if len(counts) > window and (announce_at is None or state.step_clock > announce_at):
            if detect_tf(np.asarray(counts[-(window + 1):]) / n, config.eff.tf_epsilon, window) is not None:
                t_f = state.step_clock
                break

    trace = SpreadTrace(known_counts=np.asarray(counts, dtype=np.int64),
                        node_count=g.node_count,
                        verdict=state.verdict,
                        t_a=state.t_a,
                        t_f=t_f,
                        converged=t_f is not None,
                        seed=seed)

    if not trace.converged:
        log.debug("run with seed %s reached max_steps=%d without end of spreading", seed, config.max_steps)
    return trace
