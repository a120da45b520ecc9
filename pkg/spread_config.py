'''Spread_Config

parameter sets of the two-stage spreading simulator

GraphSpec, RateParams, EfficiencyParams and SimConfig are frozen dataclasses validated on
construction. Their defaults are the base experiment setup (BASE_SETUP):

    N = 2000, <k> = 5, i0 = 0.005, lambda1 = 0.3875, lambda2 = 0.1194,
    eps1 = 0.812, eps2 = 0.188, a = 0.2121, b = 0.3089

Configurations can also be built from a flat key/value mapping (the same keys as the
command line flags, with underscores), e.g. read from a JSON config file:

>>> cfg = config_from_mapping({'beta': 'false', 'tau': 0.15, 'n': 500})
>>> cfg.graph_spec.n, cfg.beta.value, cfg.tau
(500, 'false', 0.15)
'''

import json
import math
from dataclasses import dataclass, field, replace, asdict
from enum import Enum

from spread_errors import InvalidSpecError, InvalidConfigError, ExportError


# base experiment setup
BASE_SETUP = {
    'n': 2000,
    'avg_degree': 5.0,
    'i0': 0.005,
    'lambda1': 0.3875,
    'lambda2': 0.1194,
    'eps1': 0.812,
    'eps2': 0.188,
    'a': 0.2121,
    'b': 0.3089,
}

MAX_SEED = 2 ** 64


class GraphKind(Enum):
    BA = 'ba'
    WS = 'ws'


class Verdict(Enum):
    '''information authenticity (beta) revealed by the announcement; FREE = never verified'''
    TRUE = 'true'
    FALSE = 'false'
    FREE = 'free'


class Phase(Enum):
    UNCONFIRMED = 'unconfirmed'
    CONFIRMED = 'confirmed'


def parse_verdict(value):
    '''accepts a Verdict, a bool, None or one of the strings true/false/free/none'''
    if isinstance(value, Verdict):
        return value
    if value is None:
        return Verdict.FREE
    if isinstance(value, bool):
        return Verdict.TRUE if value else Verdict.FALSE
    key = str(value).strip().lower()
    if key == 'none':
        key = 'free'
    try:
        return Verdict(key)
    except ValueError:
        raise InvalidConfigError("beta must be one of true, false, free; got %r" % (value,), value=value)


def _check_seed(seed, what='seed'):
    if not isinstance(seed, int) or seed < 0 or seed >= MAX_SEED:
        raise InvalidConfigError("%s must be a 64-bit unsigned integer, got %r" % (what, seed), value=seed)


@dataclass(frozen=True)
class GraphSpec:
    kind: GraphKind = GraphKind.BA
    n: int = BASE_SETUP['n']
    target_avg_degree: float = BASE_SETUP['avg_degree']
    rewire_prob: float = 0.1   # WS only
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.kind, GraphKind):
            try:
                object.__setattr__(self, 'kind', GraphKind(str(self.kind).lower()))
            except ValueError:
                raise InvalidSpecError("network kind must be ba or ws, got %r" % (self.kind,), value=self.kind)
        if int(self.n) != self.n or self.n < 1:
            raise InvalidSpecError("n must be a positive integer, got %r" % (self.n,), value=self.n)
        object.__setattr__(self, 'n', int(self.n))
        if not (self.target_avg_degree > 0) or not math.isfinite(self.target_avg_degree):
            raise InvalidSpecError("average degree must be positive, got %r" % (self.target_avg_degree,),
                                   value=self.target_avg_degree)
        if self.n < self.target_avg_degree + 1:
            raise InvalidSpecError("n=%d too small for average degree %g" % (self.n, self.target_avg_degree),
                                   value=self.n)
        if self.kind is GraphKind.WS:
            k = self.target_avg_degree
            if k != int(k) or int(k) % 2 != 0:
                raise InvalidSpecError("WS degree k must be an even integer, got %r" % (k,), value=k)
            if k >= self.n:
                raise InvalidSpecError("WS degree k=%d must be smaller than n=%d" % (k, self.n), value=k)
        if not (0.0 <= self.rewire_prob <= 1.0):
            raise InvalidSpecError("rewire probability must lie in [0, 1], got %r" % (self.rewire_prob,),
                                   value=self.rewire_prob)
        try:
            _check_seed(self.seed, 'graph seed')
        except InvalidConfigError as e:
            raise InvalidSpecError(str(e), value=self.seed)


@dataclass(frozen=True)
class RateParams:
    lambda1: float = BASE_SETUP['lambda1']
    lambda2: float = BASE_SETUP['lambda2']

    def __post_init__(self):
        for name in ('lambda1', 'lambda2'):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise InvalidConfigError("%s must be finite and non-negative, got %r" % (name, v), value=v)


@dataclass(frozen=True)
class EfficiencyParams:
    eps1: float = BASE_SETUP['eps1']
    eps2: float = BASE_SETUP['eps2']
    a: float = BASE_SETUP['a']
    b: float = BASE_SETUP['b']
    coverage: float = 0.95
    tf_epsilon: float = 5e-4
    tf_window: int = 5

    def __post_init__(self):
        for name in ('eps1', 'eps2', 'a', 'b'):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise InvalidConfigError("%s must lie in (0, 1), got %r" % (name, v), value=v)
        if abs(self.eps1 + self.eps2 - 1.0) > 1e-9:
            raise InvalidConfigError("eps1 + eps2 must equal 1, got %r + %r" % (self.eps1, self.eps2),
                                     value=(self.eps1, self.eps2))
        if not (0.0 < self.coverage <= 1.0):
            raise InvalidConfigError("coverage must lie in (0, 1], got %r" % (self.coverage,), value=self.coverage)
        if not (self.tf_epsilon > 0):
            raise InvalidConfigError("tf_epsilon must be positive, got %r" % (self.tf_epsilon,),
                                     value=self.tf_epsilon)
        if int(self.tf_window) != self.tf_window or self.tf_window < 1:
            raise InvalidConfigError("tf_window must be a positive integer, got %r" % (self.tf_window,),
                                     value=self.tf_window)


@dataclass(frozen=True)
class SimConfig:
    graph_spec: GraphSpec = field(default_factory=GraphSpec)
    i0: float = BASE_SETUP['i0']
    rate: RateParams = field(default_factory=RateParams)
    beta: Verdict = Verdict.FREE
    tau: float = None
    replicates: int = 50
    seed: int = 0
    max_steps: int = 5000
    eff: EfficiencyParams = field(default_factory=EfficiencyParams)
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'beta', parse_verdict(self.beta))
        if not (0.0 < self.i0 < 1.0):
            raise InvalidConfigError("i0 must lie in (0, 1), got %r" % (self.i0,), value=self.i0)
        if self.beta is not Verdict.FREE:
            if self.tau is None:
                raise InvalidConfigError("beta=%s requires tau" % self.beta.value)
            if not (0.0 < self.tau < 1.0):
                raise InvalidConfigError("tau must lie in (0, 1), got %r" % (self.tau,), value=self.tau)
        elif self.tau is not None and not (0.0 < self.tau < 1.0):
            raise InvalidConfigError("tau must lie in (0, 1), got %r" % (self.tau,), value=self.tau)
        for name in ('replicates', 'max_steps', 'workers'):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise InvalidConfigError("%s must be a positive integer, got %r" % (name, v), value=v)
        _check_seed(self.seed)

    def replace(self, **changes):
        return replace(self, **changes)

    def to_mapping(self):
        '''flat key/value representation (inverse of config_from_mapping)'''
        return {
            'network': self.graph_spec.kind.value,
            'n': self.graph_spec.n,
            'avg_degree': self.graph_spec.target_avg_degree,
            'ws_p': self.graph_spec.rewire_prob,
            'graph_seed': self.graph_spec.seed,
            'i0': self.i0,
            'lambda1': self.rate.lambda1,
            'lambda2': self.rate.lambda2,
            'beta': self.beta.value,
            'tau': self.tau,
            'replicates': self.replicates,
            'seed': self.seed,
            'max_steps': self.max_steps,
            'workers': self.workers,
            'eps1': self.eff.eps1,
            'eps2': self.eff.eps2,
            'a': self.eff.a,
            'b': self.eff.b,
            'coverage': self.eff.coverage,
            'tf_epsilon': self.eff.tf_epsilon,
            'tf_window': self.eff.tf_window,
        }


DEFAULTS = SimConfig().to_mapping()
DEFAULTS['graph_seed'] = None   # None: use the run seed


def config_from_mapping(mapping, base=None):
    '''build a SimConfig from a flat mapping of overrides

    mapping: dict with keys as in SimConfig.to_mapping(); keys missing or set to None keep the value of base
    base: flat mapping with the values to start from (default: DEFAULTS)
    '''
    values = dict(DEFAULTS if base is None else base)
    unknown = set(mapping) - set(DEFAULTS)
    if unknown:
        raise InvalidConfigError("unknown configuration key(s): " + ", ".join(sorted(unknown)), value=sorted(unknown))
    for k, v in mapping.items():
        if v is not None:
            values[k] = v

    seed = values['seed']
    graph_seed = values['graph_seed'] if values['graph_seed'] is not None else seed

    graph_spec = GraphSpec(kind=values['network'],
                           n=values['n'],
                           target_avg_degree=values['avg_degree'],
                           rewire_prob=values['ws_p'],
                           seed=graph_seed)
    rate = RateParams(lambda1=values['lambda1'], lambda2=values['lambda2'])
    eff = EfficiencyParams(eps1=values['eps1'], eps2=values['eps2'], a=values['a'], b=values['b'],
                           coverage=values['coverage'], tf_epsilon=values['tf_epsilon'],
                           tf_window=values['tf_window'])
    return SimConfig(graph_spec=graph_spec, i0=values['i0'], rate=rate, beta=values['beta'],
                     tau=values['tau'], replicates=values['replicates'], seed=seed,
                     max_steps=values['max_steps'], eff=eff, workers=values['workers'])


def load_config_file(filename):
    '''read a flat JSON object of configuration overrides (keys as in DEFAULTS)'''
    try:
        with open(filename, 'r') as f:
            mapping = json.load(f)
    except (IOError, OSError) as e:
        raise ExportError("Cannot read config file", path=filename, orig_error=e)
    except ValueError as e:
        raise InvalidConfigError("Config file is not valid JSON: %s (%s)" % (filename, e), value=filename, orig_error=e)
    if not isinstance(mapping, dict):
        raise InvalidConfigError("Config file must contain a JSON object: " + filename, value=filename)
    return {k.replace('-', '_'): v for k, v in mapping.items()}


# scenario presets mirroring the base experiments: free spread, rumor verified early,
# truth verified at 20 %, late intervention, small world network, 25x network size
PRESETS = {
    'free':       {'beta': 'free', 'tau': None},
    'false':      {'beta': 'false', 'tau': 0.15},
    'true':       {'beta': 'true', 'tau': 0.2},
    'late-false': {'beta': 'false', 'tau': 0.6},
    'ws':         {'network': 'ws', 'avg_degree': 4, 'ws_p': 0.1, 'beta': 'true', 'tau': 0.15},
    'large':      {'n': 50000, 'beta': 'false', 'tau': 0.15, 'replicates': 10},
}


def describe(config):
    '''one-line summary for log messages'''
    return json.dumps(config.to_mapping(), sort_keys=True)


def as_dict(obj):
    '''dataclass to plain dict with enums converted to their values'''
    def convert(v):
        if isinstance(v, Enum):
            return v.value
        if isinstance(v, dict):
            return {k: convert(x) for k, x in v.items()}
        return v
    return convert(asdict(obj))
