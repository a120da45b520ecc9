'''Spread_Run

command line front end of the spreading simulator

    python spread_run.py simulate --beta false --tau 0.15 --out run.csv
    python spread_run.py sweep --beta true --grid 0.05:0.95:0.05 --out eff.csv
    python spread_run.py meanfield --t-max 200 --out meanfield.csv
    python spread_run.py compare --external series.csv --normalize --out compare.csv
    python spread_run.py graph-dump --network ws --avg-degree 4 --out edges.txt

Parameters come from (highest precedence first) command line flags, a JSON config
file (--config, same keys as the flags), a preset (--preset) and the base experiment
setup. Errors are reported as a single line on stderr with exit code 2.
'''

import sys
import json
import logging
import argparse

import numpy as np
import pandas as pd

from Logger import setup_logging
from spread_config import DEFAULTS, PRESETS, config_from_mapping, load_config_file, describe
from spread_errors import SpreadError, ExportError, InvalidInputError
from spread_graph import generate, degree_stats, is_connected
from spread_dynamics import init_population
from spread_meanfield import (MeanFieldParams, effective_rate, integrate_logistic, density_curve,
                              fit_logistic_rate)
from spread_batch import run_scenario, sweep_tau, parse_grid, compare_series
from spread_io import export, summary, read_external_series, read_trace_csv, write_edge_list

log = logging.getLogger(__name__)

PROG = 'spread_run'
DEFAULT_GRID = '0.05:0.95:0.05'

# (flag, config key, type, help)
CONFIG_FLAGS = [
    ('--network', 'network', str, 'network model: ba (scale-free) or ws (small world)'),
    ('--n', 'n', int, 'number of nodes N'),
    ('--avg-degree', 'avg_degree', float, 'target average degree <k> (WS: even integer k)'),
    ('--ws-p', 'ws_p', float, 'WS rewiring probability'),
    ('--graph-seed', 'graph_seed', int, 'seed of the network generator [default: --seed]'),
    ('--i0', 'i0', float, 'initial known density'),
    ('--lambda1', 'lambda1', float, 'confidence weight of the spreading rate'),
    ('--lambda2', 'lambda2', float, 'credibility weight of the spreading rate'),
    ('--beta', 'beta', str, 'verdict of the announcement: true, false or free (no announcement)'),
    ('--tau', 'tau', float, 'intervention position t_a / t_f in (0, 1), required unless --beta free'),
    ('--replicates', 'replicates', int, 'number of replicate runs'),
    ('--seed', 'seed', int, 'base seed; replicate k uses seed + k'),
    ('--max-steps', 'max_steps', int, 'step limit of a single run'),
    ('--workers', 'workers', int, 'number of worker processes for the replicates'),
    ('--eps1', 'eps1', float, 'weight of the truth acceleration gain'),
    ('--eps2', 'eps2', float, 'weight of the rumor suppression gain'),
    ('--a', 'a', float, 'base of the response cost log_a(tau)'),
    ('--b', 'b', float, 'base of the time sensitivity log_b(1 - tau)'),
    ('--coverage', 'coverage', float, 'known density counted as full coverage'),
    ('--tf-epsilon', 'tf_epsilon', float, 'end of spreading: density change threshold'),
    ('--tf-window', 'tf_window', int, 'end of spreading: number of consecutive quiet steps'),
]

CHOICES = {'network': ('ba', 'ws'), 'beta': ('true', 'false', 'free')}


class DiagnosticArgumentParser(argparse.ArgumentParser):
    '''raises instead of exiting so that parse_and_dispatch controls the exit code'''

    def error(self, message):
        raise CommandLineError(message)


class CommandLineError(Exception):
    pass


def _help(text, key):
    default = DEFAULTS[key]
    if default is None:
        return text
    return '%s [default: %s]' % (text, default)


def _common_arguments():
    common = argparse.ArgumentParser(add_help=False)

    group = common.add_argument_group('simulation parameters')
    for flag, key, typ, text in CONFIG_FLAGS:
        group.add_argument(flag, dest=key, type=typ, choices=CHOICES.get(key), default=None,
                           help=_help(text, key))

    group = common.add_argument_group('input / output')
    group.add_argument('--config', help='JSON file with parameter values (same keys as the flags)', default=None)
    group.add_argument('--preset', choices=sorted(PRESETS), help='named scenario preset', default=None)
    group.add_argument('--out', help='output file (if omitted, a JSON summary is printed)', default=None)
    group.add_argument('--format', choices=('csv', 'json'), help='output format [default: csv]', default='csv')
    group.add_argument('--log', help='also write log messages to this file (appending)', default=None)
    group.add_argument('--quiet', action='store_true', help='log warnings and errors only', default=False)
    return common


def build_parser():
    common = _common_arguments()
    argparser = DiagnosticArgumentParser(prog=PROG, description='Two-stage information spreading simulator '
                                         'with authority announcement at an intervention position tau.')
    sub = argparser.add_subparsers(dest='command', metavar='command', parser_class=DiagnosticArgumentParser)
    sub.required = True

    sub.add_parser('simulate', parents=[common], help='run one scenario (free spread + intervention runs)')

    p = sub.add_parser('sweep', parents=[common], help='efficiency score over a grid of intervention positions')
    p.add_argument('--grid', help='tau grid as lo:hi:step [default: %s]' % DEFAULT_GRID, default=DEFAULT_GRID)

    p = sub.add_parser('meanfield', parents=[common], help='mean-field (logistic) density curve')
    p.add_argument('--rate', type=float, default=None,
                   help='effective rate A (if omitted, measured on the initial state of a generated network)')
    p.add_argument('--t-max', dest='t_max', type=float, default=200.0, help='end time [default: 200]')
    p.add_argument('--dt', type=float, default=0.1, help='integration step [default: 0.1]')
    p.add_argument('--fit-trace', dest='fit_trace', default=None,
                   help='trace CSV (step,...,i) to fit the effective rate A to instead')

    p = sub.add_parser('compare', parents=[common], help='compare the simulated spread with an external series')
    p.add_argument('--external', required=True, help='CSV with columns r_percent,density')
    p.add_argument('--normalize', action='store_true', default=False,
                   help='divide both series by their final density')
    p.add_argument('--points', type=int, default=101, help='number of progress grid points [default: 101]')

    sub.add_parser('graph-dump', parents=[common], help='write the generated network as an edge list (--out)')
    return argparser


def build_config(args):
    '''SimConfig from preset, config file and flags (later ones take precedence)'''
    mapping = {}
    if args.preset is not None:
        mapping.update(PRESETS[args.preset])
    if args.config is not None:
        mapping.update(load_config_file(args.config))
    for _, key, _, _ in CONFIG_FLAGS:
        value = getattr(args, key)
        if value is not None:
            mapping[key] = value
    return config_from_mapping(mapping)


def _write(result, args):
    if args.out is None:
        print(json.dumps(summary(result), indent=2))
    else:
        export(result, args.out, args.format, verbose=True)


# == COMMANDS ==

def cmd_simulate(args, config):
    result = run_scenario(config, verbose=not args.quiet)
    _write(result, args)


def cmd_sweep(args, config):
    curve = sweep_tau(config, parse_grid(args.grid), verbose=not args.quiet)
    _write(curve, args)


def cmd_meanfield(args, config):
    if args.fit_trace is not None:
        trace = read_trace_csv(args.fit_trace)
        rate = fit_logistic_rate(trace['step'].to_numpy(), trace['i'].to_numpy())
        i0 = float(trace['i'].iloc[0])
        log.info("Fitted effective rate A = %.6g to %s", rate, args.fit_trace)
    elif args.rate is not None:
        rate, i0 = args.rate, config.i0
    else:
        g = generate(config.graph_spec)
        state = init_population(g, config.i0, np.random.default_rng(config.seed))
        rate, i0 = effective_rate(state, g, config.rate), state.density
        log.info("Effective rate A = %.6g on the initial state (%d known nodes)", rate, state.known_count)

    p = MeanFieldParams(i0=i0, effective_rate=rate)
    points = integrate_logistic(p, args.t_max, args.dt)
    t = np.array([pt.t for pt in points])
    frame = pd.DataFrame({'t': t,
                          's': [pt.s for pt in points],
                          'i': [pt.i for pt in points],
                          'i_closed_form': density_curve(t, p)})

    if args.format == 'json' or args.out is None:
        content = {'i0': i0, 'effective_rate': rate, 't_max': float(t[-1]), 'final_i': float(frame['i'].iloc[-1]),
                   'max_deviation': float(np.max(np.abs(frame['i'] - frame['i_closed_form'])))}
        if args.out is None:
            print(json.dumps(content, indent=2))
            return
        try:
            with open(args.out, 'w') as f:
                json.dump(content, f, indent=2)
        except (IOError, OSError) as e:
            raise ExportError("Cannot write output file", path=args.out, orig_error=e)
    else:
        export(frame, args.out, 'csv', verbose=True)


def cmd_compare(args, config):
    external = read_external_series(args.external)
    result = run_scenario(config, verbose=not args.quiet)
    comparison = compare_series(result.mean_trace, external, normalize=args.normalize, points=args.points)
    log.info("Maximum deviation between simulated and external series: %.6g", comparison.deviation)
    if args.out is None or args.format == 'json':
        content = {'deviation': comparison.deviation, 'normalize': args.normalize, 'external': args.external,
                   't_f': result.mean_trace.t_f}
        if args.out is None:
            print(json.dumps(content, indent=2))
            return
        try:
            with open(args.out, 'w') as f:
                json.dump(content, f, indent=2)
        except (IOError, OSError) as e:
            raise ExportError("Cannot write output file", path=args.out, orig_error=e)
    else:
        export(comparison, args.out, 'csv', verbose=True)


def cmd_graph_dump(args, config):
    if args.out is None:
        raise InvalidInputError("graph-dump needs --out")
    g = generate(config.graph_spec)
    _, avg_degree, max_degree = degree_stats(g)
    log.info("%r, connected: %s", g, is_connected(g))
    write_edge_list(g, args.out)
    log.info("Written %s (%d edges, <k> = %.4f, k_max = %d)", args.out, g.edge_count, avg_degree, max_degree)


COMMANDS = {
    'simulate': cmd_simulate,
    'sweep': cmd_sweep,
    'meanfield': cmd_meanfield,
    'compare': cmd_compare,
    'graph-dump': cmd_graph_dump,
}


def parse_and_dispatch(argv):
    '''run the command line argv (without program name); returns the exit code'''
    argparser = build_parser()
    try:
        args = argparser.parse_args(argv)
    except CommandLineError as e:
        sys.stderr.write("%s: error: %s\n" % (PROG, e))
        return 2
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else 0

    logger = None
    try:
        logger = setup_logging(args.log, verbose=not args.quiet)
        config = build_config(args)
        log.debug("Configuration: %s", describe(config))
        COMMANDS[args.command](args, config)
    except SpreadError as e:
        sys.stderr.write("%s: error: %s\n" % (PROG, e))
        return 2
    except (IOError, OSError) as e:
        sys.stderr.write("%s: error: %s\n" % (PROG, e))
        return 2
    finally:
        if logger is not None:
            logger.close()
    return 0


def main():
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == '__main__':
    main()
