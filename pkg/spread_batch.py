'''Spread_Batch

experiment harness around spread_dynamics: replicate sets, scenarios, intervention
timing sweeps and comparison with external spreading series

A scenario first runs the free spread replicate set (the baseline) to find the end of
spreading t_f of every replicate; for a verdict true/false it reruns each replicate with
the same network and the same seed, announcing at t_a = round(tau * t_f). Replicate k
always uses seed + k, so a scenario is a pure function of its SimConfig and intervention
runs are paired with their baseline run.
'''

import time
import logging
from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np
import pandas as pd
from scipy import stats

from spread_config import Verdict, Phase, describe
from spread_errors import SpreadError, InvalidConfigError, InvalidInputError
from spread_graph import generate
from spread_dynamics import run
from spread_efficiency import (EfficiencyReport, steps_to_coverage, intervention_position,
                               inhibition_rate, score_true, score_false)

log = logging.getLogger(__name__)


@dataclass
class MeanTrace:
    '''replicate-mean known density per step'''
    i: np.ndarray
    verdict: Verdict = Verdict.FREE
    t_a: int = None
    t_f: int = None
    converged: bool = True

    @property
    def s(self):
        return 1.0 - self.i

    @property
    def steps(self):
        return len(self.i) - 1

    @property
    def final_i(self):
        return float(self.i[-1])

    @property
    def phases(self):
        labels = np.full(len(self.i), Phase.UNCONFIRMED.value, dtype=object)
        if self.t_a is not None:
            labels[self.t_a:] = Phase.CONFIRMED.value
        return labels

    def steps_to_coverage(self, coverage=0.95):
        return steps_to_coverage(self.i, coverage)


@dataclass
class ScenarioResult:
    config: object
    mean_trace: MeanTrace
    baseline_mean_trace: MeanTrace
    traces: list
    baseline_traces: list
    efficiency: EfficiencyReport = None
    converged: bool = True
    runtime: float = 0.0

    @property
    def final_densities(self):
        return np.array([t.final_i for t in self.traces])

    @property
    def baseline_final_densities(self):
        return np.array([t.final_i for t in self.baseline_traces])

    @property
    def final_i(self):
        return float(np.mean(self.final_densities))

    @property
    def baseline_final_i(self):
        return float(np.mean(self.baseline_final_densities))

    @property
    def inhibition(self):
        '''relative suppression of the final density against the paired free spread'''
        return inhibition_rate(self.baseline_final_i, self.final_i)

    @property
    def coverage_steps(self):
        coverage = self.config.eff.coverage
        return [t.steps_to_coverage(coverage) for t in self.traces]

    @property
    def baseline_coverage_steps(self):
        coverage = self.config.eff.coverage
        return [t.steps_to_coverage(coverage) for t in self.baseline_traces]

    @property
    def intervention_positions(self):
        '''realized tau = t_a / t_f(baseline) per replicate'''
        return [intervention_position(t.t_a, _duration(b)) for t, b in zip(self.traces, self.baseline_traces)
                if t.t_a is not None and _duration(b) > 0]


@dataclass
class EfficiencyCurve:
    verdict: Verdict
    taus: list = field(default_factory=list)
    scores: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def to_frame(self):
        return pd.DataFrame({'tau': self.taus, 'score': self.scores})

    @property
    def argmax(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        if len(scores) == 0 or np.all(np.isnan(scores)):
            return None
        return self.taus[int(np.nanargmax(scores))]


@dataclass
class Comparison:
    r_percent: np.ndarray
    sim_density: np.ndarray
    ext_density: np.ndarray
    sim_rate: np.ndarray
    ext_rate: np.ndarray
    deviation: float

    def to_frame(self):
        return pd.DataFrame({'r_percent': self.r_percent,
                             'sim_density': self.sim_density,
                             'ext_density': self.ext_density,
                             'sim_rate': self.sim_rate,
                             'ext_rate': self.ext_rate})


def _duration(trace):
    # t_f of a run, or its length when it hit max_steps
    return trace.t_f if trace.t_f is not None else trace.steps


# == REPLICATES ==

_WORKER_GRAPH = None


def _init_worker(g):
    global _WORKER_GRAPH
    _WORKER_GRAPH = g


def _run_one(args):
    config, announce_at, seed = args
    return run(_WORKER_GRAPH, config, announce_at=announce_at, seed=seed)


def run_replicates(g, config, announce_ats=None, verbose=False):
    '''run config.replicates replicates on network g (replicate k with seed config.seed + k)

    announce_ats: list with the announcement step per replicate (None: free spread)
    results are returned in replicate order, also when running on a process pool (config.workers > 1)
    '''
    if announce_ats is None:
        announce_ats = [None] * config.replicates
    if len(announce_ats) != config.replicates:
        raise InvalidInputError("need one announcement step per replicate", value=len(announce_ats))

    jobs = [(config, a, config.seed + k) for k, a in enumerate(announce_ats)]

    def report(k, trace):
        log.info("# %d / %d: seed %d, %d steps, final i = %.4f%s", k + 1, len(jobs), trace.seed, trace.steps,
                 trace.final_i, "" if trace.converged else " (not converged)")

    if config.workers > 1:
        with Pool(processes=config.workers, initializer=_init_worker, initargs=(g,)) as pool:
            traces = pool.map(_run_one, jobs)
        if verbose:
            for k, trace in enumerate(traces):
                report(k, trace)
    else:
        traces = []
        for k, (cfg, a, seed) in enumerate(jobs):
            trace = run(g, cfg, announce_at=a, seed=seed)
            if verbose:
                report(k, trace)
            traces.append(trace)
    return traces


def average_replicates(traces):
    '''pointwise mean density of replicate traces, shorter traces held at their final value

    t_a and t_f of the mean trace are the rounded means over the replicates that have them
    '''
    if len(traces) == 0:
        raise InvalidInputError("cannot average an empty set of traces")

    length = max(len(t.i) for t in traces)
    padded = np.empty((len(traces), length))
    for k, t in enumerate(traces):
        i = t.i
        padded[k, :len(i)] = i
        padded[k, len(i):] = i[-1]

    def rounded_mean(values):
        values = [v for v in values if v is not None]
        return int(round(np.mean(values))) if values else None

    return MeanTrace(i=padded.mean(axis=0),
                     verdict=traces[0].verdict,
                     t_a=rounded_mean([t.t_a for t in traces]),
                     t_f=rounded_mean([t.t_f for t in traces]),
                     converged=all(t.converged for t in traces))


# == SCENARIOS ==

def run_baseline(config, g=None, verbose=False):
    '''free spread replicate set for config (network generated from config.graph_spec if not given)'''
    if g is None:
        g = generate(config.graph_spec)
    return run_replicates(g, config.replace(beta=Verdict.FREE, tau=None), verbose=verbose)


def _efficiency(config, baseline, traces):
    tau = config.tau
    eff = config.eff

    if config.beta is Verdict.FALSE:
        I0 = float(np.mean([t.final_i for t in baseline]))
        If = float(np.mean([t.final_i for t in traces]))
        if If > I0:
            log.warning("tau=%g: final density %.4f above free spread %.4f, no suppression", tau, If, I0)
            If = I0
        return score_false(tau, I0, If, eff)

    T0 = float(np.mean([_duration(t) for t in baseline]))
    reached = [t.steps_to_coverage(eff.coverage) for t in traces]
    reached = [s for s in reached if s is not None]
    if not reached:
        log.warning("tau=%g: coverage %.2f never reached", tau, eff.coverage)
        return score_true(tau, T0, None, eff)
    Tt = float(np.mean(reached))
    if Tt > T0:
        log.warning("tau=%g: coverage after %.1f steps, later than the free spread duration %.1f", tau, Tt, T0)
        Tt = T0
    return score_true(tau, T0, Tt, eff)


def run_scenario(config, baseline=None, g=None, verbose=True):
    '''one spreading scenario: free spread baseline plus (for beta true/false) the paired intervention runs

    baseline: precomputed free spread traces for the same config (e.g. from run_baseline), reused by sweeps
    g: precomputed network for config.graph_spec
    '''
    start = time.time()
    if verbose:
        log.info("Scenario: %s", describe(config))

    if g is None:
        g = generate(config.graph_spec)
    if baseline is None:
        baseline = run_baseline(config, g, verbose=verbose)
    elif len(baseline) != config.replicates:
        raise InvalidInputError("baseline has %d replicates, config asks for %d" % (len(baseline), config.replicates),
                                value=len(baseline))

    if config.beta is Verdict.FREE:
        traces = baseline
        efficiency = None
    else:
        announce_ats = [int(round(config.tau * _duration(b))) for b in baseline]
        traces = run_replicates(g, config, announce_ats, verbose=verbose)
        efficiency = _efficiency(config, baseline, traces)

    converged = all(t.converged for t in baseline) and all(t.converged for t in traces)
    result = ScenarioResult(config=config,
                            mean_trace=average_replicates(traces),
                            baseline_mean_trace=average_replicates(baseline),
                            traces=traces,
                            baseline_traces=baseline,
                            efficiency=efficiency,
                            converged=converged,
                            runtime=time.time() - start)

    if verbose:
        log.info("SCENARIO FINISHED. %d replicate(s), %.2f sec, final i = %.4f (free spread %.4f)",
                 config.replicates, result.runtime, result.final_i, result.baseline_final_i)
        if not converged:
            log.warning("some replicates reached max_steps=%d without end of spreading", config.max_steps)
    return result


def parse_grid(text):
    '''lo:hi:step grid specification to an ascending list of tau values (hi included)

    >>> parse_grid('0.1:0.3:0.1')
    [0.1, 0.2, 0.3]
    '''
    try:
        lo, hi, step = [float(x) for x in text.split(':')]
    except ValueError:
        raise InvalidInputError("grid must be given as lo:hi:step, got %r" % (text,), value=text)
    if not (step > 0) or hi < lo:
        raise InvalidInputError("grid needs step > 0 and hi >= lo, got %r" % (text,), value=text)
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 10) for k in range(n)]


def sweep_tau(config, grid, verbose=True):
    '''efficiency score for each intervention position in grid (ascending, inside (0, 1))

    the free spread baseline is run once; a failing grid point is recorded with score NaN
    and its error message instead of aborting the sweep
    '''
    grid = [float(x) for x in grid]
    if not grid:
        raise InvalidInputError("tau grid is empty")
    if any(not (0.0 < x < 1.0) for x in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidInputError("tau grid must be ascending inside (0, 1)", value=grid)
    if config.beta is Verdict.FREE:
        raise InvalidConfigError("a tau sweep needs beta true or false")

    start = time.time()
    g = generate(config.graph_spec)
    baseline = run_baseline(config, g)

    curve = EfficiencyCurve(verdict=config.beta)
    for n, tau in enumerate(grid):
        try:
            result = run_scenario(config.replace(tau=tau), baseline=baseline, g=g, verbose=False)
            report = result.efficiency
            curve.scores.append(report.score)
            curve.errors.append(None)
        except SpreadError as e:
            log.error("tau=%g: %s", tau, e)
            report = None
            curve.scores.append(float('nan'))
            curve.errors.append(str(e))
        curve.taus.append(tau)
        curve.reports.append(report)
        if verbose:
            log.info("# %d / %d: tau = %.4f, E = %.6g", n + 1, len(grid), tau, curve.scores[-1])

    if verbose:
        log.info("SWEEP FINISHED. %d grid point(s), %.2f sec, best tau = %s", len(grid), time.time() - start,
                 curve.argmax)
    return curve


# == ANALYSIS ==

def paired_sign_test(x, y):
    '''one-sided sign test p-value for x < y over paired samples (ties dropped)'''
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise InvalidInputError("paired samples must have equal length", value=(len(x), len(y)))
    diff = y - x
    n = int(np.count_nonzero(diff != 0))
    if n == 0:
        return 1.0
    k = int(np.count_nonzero(diff > 0))
    return float(stats.binomtest(k, n, 0.5, alternative='greater').pvalue)


def compare_series(sim, external, normalize=False, points=101, t_f=None):
    '''align a simulated trace with an external spreading series on progress R = 100 t / t_f

    sim: MeanTrace or SpreadTrace; t_f defaults to the trace's t_f (or its last step)
    external: DataFrame with columns r_percent, density (density non-decreasing, r_percent in [0, 100])
    normalize: divide both density series by their final value
    returns a Comparison with both series linearly resampled on a shared R grid, their first
    differences (growth rates) and the sup-norm deviation
    '''
    if not {'r_percent', 'density'} <= set(external.columns):
        raise InvalidInputError("external series needs columns r_percent, density", value=list(external.columns))
    ext_r = external['r_percent'].to_numpy(dtype=np.float64)
    ext_i = external['density'].to_numpy(dtype=np.float64)
    if len(ext_r) < 2:
        raise InvalidInputError("external series needs at least two points", value=len(ext_r))
    if np.any(np.diff(ext_r) <= 0) or ext_r[0] < 0 or ext_r[-1] > 100:
        raise InvalidInputError("external progress must increase within [0, 100]")
    if np.any(np.diff(ext_i) < -1e-12):
        raise InvalidInputError("external densities must be non-decreasing")

    sim_i = np.asarray(sim.i, dtype=np.float64)
    if t_f is None:
        t_f = sim.t_f if sim.t_f is not None else len(sim_i) - 1
    if not t_f or t_f <= 0:
        raise InvalidInputError("simulated trace needs t_f > 0", value=t_f)
    sim_r = 100.0 * np.arange(len(sim_i)) / float(t_f)

    if normalize:
        if not (ext_i[-1] > 0):
            raise InvalidInputError("cannot normalize an external series with final density %r" % (ext_i[-1],),
                                    value=ext_i[-1])
        sim_i = sim_i / sim_i[-1]
        ext_i = ext_i / ext_i[-1]

    grid = np.linspace(0.0, 100.0, points)
    sim_on_grid = np.interp(grid, sim_r, sim_i)
    ext_on_grid = np.interp(grid, ext_r, ext_i)

    return Comparison(r_percent=grid,
                      sim_density=sim_on_grid,
                      ext_density=ext_on_grid,
                      sim_rate=np.diff(sim_on_grid, prepend=np.nan),
                      ext_rate=np.diff(ext_on_grid, prepend=np.nan),
                      deviation=float(np.max(np.abs(sim_on_grid - ext_on_grid))))
