'''Spread_IO

reading and writing of spreading results

Trace files (CSV):       step,r_percent,s,i,phase      (one row per step, r_percent = 100 * step / t_f)
Efficiency curves (CSV): tau,score
Summaries (JSON):        t_a, t_f, final_i, converged, verdict, score (+ scenario details)
Comparisons (CSV):       r_percent,sim_density,ext_density,sim_rate,ext_rate
Edge lists (text):       one "u v" pair per line

External spreading series are read from CSV with the columns r_percent,density.
Floats are written with 9 significant digits.
'''

import os
import json
import logging

import numpy as np
import pandas as pd

from spread_config import as_dict
from spread_errors import ExportError, InvalidInputError
from spread_dynamics import SpreadTrace
from spread_batch import MeanTrace, ScenarioResult, EfficiencyCurve, Comparison

log = logging.getLogger(__name__)

FLOAT_FORMAT = '%.9g'
FORMATS = ('csv', 'json')


# == CONVERSION ==

def trace_to_dataframe(trace):
    '''SpreadTrace or MeanTrace as a table step,r_percent,s,i,phase'''
    i = np.asarray(trace.i, dtype=np.float64)
    steps = np.arange(len(i))
    t_f = trace.t_f if trace.t_f else max(len(i) - 1, 1)
    return pd.DataFrame({'step': steps,
                         'r_percent': 100.0 * steps / float(t_f),
                         's': 1.0 - i,
                         'i': i,
                         'phase': trace.phases})


def summary(result):
    '''dict of the key numbers of a trace, scenario or efficiency curve (JSON serializable)'''
    if isinstance(result, ScenarioResult):
        trace = result.mean_trace
        eff = result.efficiency
        return {'t_a': trace.t_a,
                't_f': trace.t_f,
                'final_i': result.final_i,
                'converged': result.converged,
                'verdict': result.config.beta.value,
                'score': eff.score if eff is not None else None,
                'efficiency': as_dict(eff) if eff is not None else None,
                'baseline_final_i': result.baseline_final_i,
                'baseline_t_f': result.baseline_mean_trace.t_f,
                'final_densities': result.final_densities.tolist(),
                'coverage_steps': result.coverage_steps,
                'baseline_coverage_steps': result.baseline_coverage_steps,
                'config': result.config.to_mapping()}

    if isinstance(result, (SpreadTrace, MeanTrace)):
        return {'t_a': result.t_a,
                't_f': result.t_f,
                'final_i': result.final_i,
                'converged': result.converged,
                'verdict': result.verdict.value,
                'score': None}

    if isinstance(result, EfficiencyCurve):
        return {'verdict': result.verdict.value,
                'argmax': result.argmax,
                'points': [{'tau': t, 'score': _json_float(s), 'error': e}
                           for t, s, e in zip(result.taus, result.scores, result.errors)]}

    raise InvalidInputError("cannot summarize a %s" % type(result).__name__, value=type(result).__name__)


def _json_float(x):
    # NaN is not valid JSON
    return None if x is None or np.isnan(x) else float(x)


# == EXPORT ==

def _frame(result):
    if isinstance(result, ScenarioResult):
        return trace_to_dataframe(result.mean_trace)
    if isinstance(result, (SpreadTrace, MeanTrace)):
        return trace_to_dataframe(result)
    if isinstance(result, (EfficiencyCurve, Comparison)):
        return result.to_frame()
    if isinstance(result, pd.DataFrame):
        return result
    raise InvalidInputError("cannot write a %s as CSV" % type(result).__name__, value=type(result).__name__)


def export(result, path, fmt='csv', verbose=False):
    '''write a result to path

    fmt csv:  trace table (traces, scenarios), tau,score table (efficiency curves),
              comparison table (comparisons) or any DataFrame
    fmt json: summary()
    '''
    if fmt not in FORMATS:
        raise InvalidInputError("export format must be one of %s, got %r" % (", ".join(FORMATS), fmt), value=fmt)

    if fmt == 'csv':
        frame = _frame(result)
    else:
        content = summary(result)

    try:
        if fmt == 'csv':
            frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        else:
            with open(path, 'w') as f:
                json.dump(content, f, indent=2)
    except (IOError, OSError) as e:
        raise ExportError("Cannot write output file", path=path, orig_error=e)

    if verbose:
        log.info("Written %s", path)
    return path


def write_edge_list(g, path):
    '''network as a whitespace separated edge list, one "u v" pair per line (u < v)'''
    try:
        np.savetxt(path, g.edges, fmt='%d', delimiter=' ')
    except (IOError, OSError) as e:
        raise ExportError("Cannot write edge list", path=path, orig_error=e)
    return path


# == IMPORT ==

def _read_csv(path):
    if not os.path.isfile(path):
        raise ExportError("File not found", path=path)
    try:
        return pd.read_csv(path, sep=',')
    except (IOError, OSError, ValueError) as e:
        raise ExportError("Cannot read CSV file", path=path, orig_error=e)


def read_trace_csv(path):
    '''trace table written by export (columns step,r_percent,s,i,phase)'''
    frame = _read_csv(path)
    expected = ['step', 'r_percent', 's', 'i', 'phase']
    if list(frame.columns) != expected:
        raise InvalidInputError("%s: expected columns %s, got %s" % (path, ",".join(expected),
                                                                     ",".join(frame.columns)), value=path)
    return frame


def read_external_series(path):
    '''external spreading series with columns r_percent,density (extra columns are ignored)'''
    frame = _read_csv(path)
    missing = {'r_percent', 'density'} - set(frame.columns)
    if missing:
        raise InvalidInputError("%s: missing column(s) %s" % (path, ", ".join(sorted(missing))), value=path)
    frame = frame[['r_percent', 'density']].dropna()
    if len(frame) == 0:
        raise InvalidInputError("%s: no data rows" % path, value=path)
    return frame.reset_index(drop=True)


def read_edge_list(path):
    '''edge list written by write_edge_list as an (E, 2) int array'''
    if not os.path.isfile(path):
        raise ExportError("File not found", path=path)
    try:
        edges = np.loadtxt(path, dtype=np.int64, ndmin=2)
    except ValueError as e:
        raise InvalidInputError("%s: not an integer edge list (%s)" % (path, e), value=path, orig_error=e)
    if edges.size == 0:
        edges = np.empty((0, 2), dtype=np.int64)
    return edges
