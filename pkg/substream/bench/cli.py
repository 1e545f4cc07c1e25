"""
Command-line entry point.

    substream bench      tracker panels over trials (aggregate + record CSVs)
    substream ode        limiting ODE trajectories
    substream phase      PETRELS phase diagram (Monte Carlo and ODE)
    substream mc-vs-ode  rank-one Monte Carlo against the ODE limit
    substream plot       render a bench or mc-vs-ode CSV (needs matplotlib)

Every option can also be given in a `--config` file of
`key = value` lines; flags take precedence over the file, which
takes precedence over the defaults. Exit status: 0 on success,
1 for invalid input, 2 for failures while running.
"""
import sys
import argparse
import logging
from typing import Sequence

import numpy as np

from ..core.kinds import (
    ScenarioKind, LoadingDraw, OdeModel, WELL_CONDITIONED_LOADING, ILL_CONDITIONED_LOADING,
)
from ..core.errors import ConfigError
from ..core.params import read_param_file, _parse_value
from ..core.datagen import SpikedModelConfig, ScenarioConfig
from ..core._version import version
from ..math.theory import OdeParams, integrate, mc_vs_ode_report, phase_grid
from .records import write_csv
from .runner import BenchConfig, DEFAULT_PANEL, run_bench, write_outputs

logger = logging.getLogger(__name__)

__all__ = [
    'main',
    'build_parser',
    'parse_grid',
]

INT_KEYS = {'d', 'k', 'trials', 'snapshots', 'record_every', 'change_at', 'seed', 'workers', 'samples'}
FLOAT_KEYS = {'sigma', 'alpha', 'delta0', 'tau', 'mu', 's0', 'g0', 'delta_prime', 't_max', 'h'}
BOOL_KEYS = {'timing', 'debug'}

DEFAULTS = {
    'bench' : {
        'scenario' : 'static', 'd' : 200, 'k' : 10, 'sigma' : None, 'alpha' : None,
        'loading' : None, 'trackers' : ','.join(t.value for t in DEFAULT_PANEL),
        'trials' : 50, 'snapshots' : None, 'record_every' : 10, 'change_at' : None,
        'delta0' : None, 'seed' : 0, 'workers' : None, 'timing' : True, 'debug' : False,
        'out' : None,
    },
    'ode' : {
        'model' : 'oja-grouse', 'alpha' : None, 'sigma' : None, 'tau' : None, 'mu' : None,
        's0' : 0.1, 'g0' : None, 'delta_prime' : 1.0, 't_max' : 10.0, 'h' : 1e-2,
        'samples' : 201, 'out' : None,
    },
    'phase' : {
        'sigma' : None, 'alpha_grid' : None, 'mu_grid' : None, 'd' : 2000, 'trials' : 1,
        't_max' : 20.0, 's0' : 0.1, 'seed' : 0, 'workers' : None, 'out' : None,
    },
    'mc-vs-ode' : {
        'model' : 'oja-grouse', 'alpha' : 0.17, 'sigma' : 0.2, 'tau' : None, 'mu' : None,
        's0' : 0.1, 'g0' : None, 'delta_prime' : 1.0, 't_max' : 10.0, 'h' : 1e-3,
        'd' : 2000, 'trials' : 50, 'seed' : 0, 'record_every' : None, 'workers' : None,
        'out' : None,
    },
    'plot' : {
        'input' : None, 'x' : 'n', 'out' : None,
    },
}

# fallbacks for settings left unset, per scenario
SCENARIO_DEFAULTS = {
    ScenarioKind.STATIC : {'sigma' : 1e-5, 'alpha' : 0.5, 'snapshots' : 5000, 'loading' : 'ones'},
    ScenarioKind.ABRUPT_CHANGE : {
        'sigma' : 1e-5, 'alpha' : 0.3, 'snapshots' : 8000, 'loading' : 'uniform',
    },
    ScenarioKind.ROTATING : {
        'sigma' : 1e-5, 'alpha' : 0.3, 'snapshots' : 5000, 'loading' : 'ones', 'delta0' : 1e-5,
    },
}

class _Parser(argparse.ArgumentParser):
    """ Usage errors exit with status 1 """

    def error(self, message : str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")

def parse_grid(text : str, field : str)->np.ndarray:
    """ 'start:stop:count' (inclusive linspace) or a comma-separated list """
    text = str(text).strip()
    try:
        if ':' in text:
            start, stop, count = text.split(':')
            count = int(count)
            if count < 1:
                raise ValueError
            return np.linspace(float(start), float(stop), count)
        return np.array([float(val) for val in text.split(',') if val.strip()])
    except ValueError:
        raise ConfigError(field, f"expected start:stop:count or a comma list, got {text!r}")

def _coerce(key : str, val):
    if val is None:
        return None
    try:
        if key in INT_KEYS:
            if isinstance(val, float) and not val.is_integer():
                raise ValueError
            return int(val)
        if key in FLOAT_KEYS:
            return float(val)
        if key in BOOL_KEYS:
            if isinstance(val, str):
                if val.lower() not in ('true', 'false', '1', '0', 'yes', 'no'):
                    raise ValueError
                return val.lower() in ('true', '1', 'yes')
            return bool(val)
    except (TypeError, ValueError):
        raise ConfigError(key, f"cannot interpret {val!r}")
    return val

def _add_common(parser : argparse.ArgumentParser):
    parser.add_argument('-v', '--verbose', action='count', default=0,
        help="-v for progress (INFO), -vv for DEBUG")
    parser.add_argument('--config', default=None,
        help="parameter file of 'key = value' lines; flags override it")
    parser.add_argument('--out', default=None,
        help="output CSV path (stdout when omitted)")

def build_parser()->argparse.ArgumentParser:
    parser = _Parser(
        prog='substream',
        description="Streaming PCA / subspace tracking experiments.",
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {version}")
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    bench = sub.add_parser('bench', help="run tracker panels over trials")
    _add_common(bench)
    bench.add_argument('--scenario', choices=[s.value for s in ScenarioKind],
        help="static (default), abrupt or rotating")
    bench.add_argument('--d', type=int, help="ambient dimension (default 200)")
    bench.add_argument('--k', type=int, help="subspace rank (default 10)")
    bench.add_argument('--sigma', type=float, help="noise level (default 1e-5)")
    bench.add_argument('--alpha', type=float,
        help="observation probability (default 0.5 static, 0.3 otherwise)")
    bench.add_argument('--loading',
        help="ones, ill, uniform, uniform-shared or a comma list of k positive values")
    bench.add_argument('--trackers',
        help="comma list of trackers (default grouse,petrels,oja,md-isvd,brand,pimc)")
    bench.add_argument('--param', action='append', default=[], metavar='TRACKER.KEY=VALUE',
        help="tracker parameter, e.g. brand.discount=0.95 (repeatable)")
    bench.add_argument('--trials', type=int, help="number of trials (default 50)")
    bench.add_argument('--snapshots', type=int,
        help="stream length (default 5000, 8000 for abrupt)")
    bench.add_argument('--record-every', dest='record_every', type=int,
        help="metric stride in snapshots (default 10)")
    bench.add_argument('--change-at', dest='change_at', type=int,
        help="abrupt change snapshot (default: half the stream)")
    bench.add_argument('--delta0', type=float, help="rotation speed (default 1e-5)")
    bench.add_argument('--seed', type=int, help="base seed (default 0)")
    bench.add_argument('--workers', type=int, help="worker processes (default: SUBSTREAM_THREADS or cores)")
    bench.add_argument('--no-timing', dest='timing', action='store_const', const=False,
        help="write wall_ns as 0 for byte-identical reruns")
    bench.add_argument('--debug', dest='debug', action='store_const', const=True,
        help="add a stream checksum column to the records")

    ode = sub.add_parser('ode', help="integrate a limiting ODE")
    _add_common(ode)
    _add_ode_args(ode)
    ode.add_argument('--samples', type=int, help="number of output times (default 201)")

    phase = sub.add_parser('phase', help="PETRELS phase diagram")
    _add_common(phase)
    phase.add_argument('--sigma', type=float, help="noise level (required)")
    phase.add_argument('--alpha-grid', dest='alpha_grid', help="start:stop:count or comma list")
    phase.add_argument('--mu-grid', dest='mu_grid', help="start:stop:count or comma list")
    phase.add_argument('--d', type=int, help="dimension of the Monte Carlo runs (default 2000)")
    phase.add_argument('--trials', type=int, help="trials per cell (default 1)")
    phase.add_argument('--t-max', dest='t_max', type=float, help="rescaled horizon (default 20)")
    phase.add_argument('--s0', type=float, help="initial cosine similarity (default 0.1)")
    phase.add_argument('--seed', type=int, help="base seed (default 0)")
    phase.add_argument('--workers', type=int, help="worker processes")

    mc = sub.add_parser('mc-vs-ode', help="rank-one Monte Carlo against the ODE limit")
    _add_common(mc)
    _add_ode_args(mc)
    mc.add_argument('--d', type=int, help="dimension (default 2000)")
    mc.add_argument('--trials', type=int, help="trials (default 50)")
    mc.add_argument('--seed', type=int, help="base seed (default 0)")
    mc.add_argument('--record-every', dest='record_every', type=int,
        help="snapshot stride (default ceil(d/20))")
    mc.add_argument('--workers', type=int, help="worker processes")

    plot = sub.add_parser('plot', help="plot a bench aggregate or mc-vs-ode CSV")
    _add_common(plot)
    plot.add_argument('--in', dest='input', help="CSV written by bench or mc-vs-ode")
    plot.add_argument('--x', choices=['n', 'time'], help="x axis for bench files (default n)")
    return parser

def _add_ode_args(parser : argparse.ArgumentParser):
    parser.add_argument('--model', choices=[m.value for m in OdeModel], help="oja-grouse or petrels")
    parser.add_argument('--alpha', type=float, help="observation probability")
    parser.add_argument('--sigma', type=float, help="noise level")
    parser.add_argument('--tau', type=float, help="rescaled step, eta = tau/d (oja-grouse)")
    parser.add_argument('--mu', type=float, help="rescaled discount, lambda = 1 - mu/d (petrels)")
    parser.add_argument('--s0', type=float, help="initial cosine similarity")
    parser.add_argument('--g0', type=float, help="initial g (petrels, default delta')")
    parser.add_argument('--delta-prime', dest='delta_prime', type=float,
        help="rescaled RLS initialization, delta = delta'/d (default 1)")
    parser.add_argument('--t-max', dest='t_max', type=float, help="rescaled horizon")
    parser.add_argument('--h', type=float, help="RK4 step")

def resolve_settings(command : str, args : argparse.Namespace)->tuple[dict, dict]:
    """
    Defaults, then the config file, then flags. Returns the
    settings and the per-tracker parameters.
    """
    settings = dict(DEFAULTS[command])
    tracker_params = {}
    if args.config:
        params = read_param_file(args.config)
        for key, val in params.flags().items():
            if key not in settings:
                raise ConfigError(key, f"not a setting of '{command}' (config file {args.config})")
            settings[key] = val
        tracker_params = params.tracker_params
    for key in settings:
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    for spec in getattr(args, 'param', None) or []:
        if ('=' not in spec) or ('.' not in spec.split('=', 1)[0]):
            raise ConfigError('param', f"expected TRACKER.KEY=VALUE, got {spec!r}")
        lhs, rhs = spec.split('=', 1)
        tracker, key = lhs.split('.', 1)
        tracker_params.setdefault(tracker.strip(), {})[key.strip()] = _parse_value(rhs)
    return {key : _coerce(key, val) for key, val in settings.items()}, tracker_params

def _loading(spec, k : int):
    """ (loading vector or None, LoadingDraw) from a --loading value """
    if isinstance(spec, (list, tuple)):
        return np.asarray(spec, dtype=float), LoadingDraw.GIVEN
    spec = str(spec).strip().lower()
    if spec == 'ones':
        return (np.asarray(WELL_CONDITIONED_LOADING) if k == len(WELL_CONDITIONED_LOADING) else np.ones(k)), LoadingDraw.GIVEN
    if spec == 'ill':
        if k != len(ILL_CONDITIONED_LOADING):
            raise ConfigError('loading', f"the ill-conditioned preset has {len(ILL_CONDITIONED_LOADING)} entries but k = {k}")
        return np.asarray(ILL_CONDITIONED_LOADING), LoadingDraw.GIVEN
    if spec == 'uniform':
        return None, LoadingDraw.UNIFORM_PER_TRIAL
    if spec == 'uniform-shared':
        return None, LoadingDraw.UNIFORM_SHARED
    try:
        values = np.array([float(val) for val in spec.split(',')])
    except ValueError:
        raise ConfigError('loading', f"expected ones, ill, uniform, uniform-shared or a comma list, got {spec!r}")
    return values, LoadingDraw.GIVEN

def _trackers(spec, tracker_params : dict)->list[tuple[str, dict]]:
    names = spec if isinstance(spec, (list, tuple)) else str(spec).split(',')
    names = [str(name).strip() for name in names if str(name).strip()]
    unknown = set(tracker_params) - set(names)
    if unknown:
        raise ConfigError('param', f"parameters given for trackers not in the panel: {sorted(unknown)}")
    return [(name, tracker_params.get(name, {})) for name in names]

def _open_out(path : str):
    if path is None:
        return sys.stdout, False
    return open(path, 'w', newline='', encoding='utf-8'), True

def cmd_bench(settings : dict, tracker_params : dict)->int:
    kind = ScenarioKind(settings['scenario'])
    for key, val in SCENARIO_DEFAULTS[kind].items():
        if settings.get(key) is None:
            settings[key] = val
    settings = {key : _coerce(key, val) for key, val in settings.items()}
    loading, draw = _loading(settings['loading'], settings['k'])

    model = SpikedModelConfig(settings['d'], settings['k'], loading, settings['sigma'], settings['alpha'])
    scenario = ScenarioConfig(
        kind = kind,
        snapshots = settings['snapshots'],
        seed = settings['seed'],
        change_at = settings['change_at'] if kind is ScenarioKind.ABRUPT_CHANGE else None,
        delta0 = settings['delta0'] if kind is ScenarioKind.ROTATING else 0.0,
        loading_draw = draw,
    )
    cfg = BenchConfig(
        scenario, model,
        trackers = _trackers(settings['trackers'], tracker_params),
        trials = settings['trials'],
        record_every = settings['record_every'],
        seed = settings['seed'],
        output_path = settings['out'],
        workers = settings['workers'],
        timing = settings['timing'],
        debug = settings['debug'],
    )
    records, aggregates = run_bench(cfg)
    if cfg.output_path:
        write_outputs(cfg.output_path, records, aggregates)
    else:
        write_csv(sys.stdout, aggregates)
    return 0

def _ode_params(settings : dict)->OdeParams:
    for key in ('alpha', 'sigma'):
        if settings[key] is None:
            raise ConfigError(key, "is required")
    return OdeParams(
        settings['alpha'], settings['sigma'],
        tau = settings['tau'], mu = settings['mu'],
        s0 = settings['s0'], g0 = settings['g0'], delta_prime = settings['delta_prime'],
        t_max = settings['t_max'], h = settings['h'],
    )

def cmd_ode(settings : dict, tracker_params : dict)->int:
    p = _ode_params(settings)
    if settings['samples'] < 2:
        raise ConfigError('samples', f"need at least 2 output times, got {settings['samples']}")
    times = np.linspace(0.0, p.t_max, settings['samples'])
    traj = integrate(OdeModel(settings['model']), p, times)
    stream, close = _open_out(settings['out'])
    try:
        stream.write("t,s,g,error\n")
        for idx in range(len(traj)):
            g = repr(float(traj.g[idx])) if traj.g is not None else ''
            stream.write(f"{float(traj.times[idx])!r},{float(traj.s[idx])!r},{g},{float(traj.error[idx])!r}\n")
    finally:
        if close:
            stream.close()
    return 0

def cmd_phase(settings : dict, tracker_params : dict)->int:
    for key in ('sigma', 'alpha_grid', 'mu_grid'):
        if settings[key] is None:
            raise ConfigError(key, "is required")
    rows = phase_grid(
        settings['sigma'],
        parse_grid(settings['alpha_grid'], 'alpha_grid'),
        parse_grid(settings['mu_grid'], 'mu_grid'),
        settings['d'],
        trials = settings['trials'],
        t_max = settings['t_max'],
        s0 = settings['s0'],
        seed = settings['seed'],
        workers = settings['workers'],
    )
    stream, close = _open_out(settings['out'])
    try:
        write_csv(stream, rows)
    finally:
        if close:
            stream.close()
    return 0

def cmd_mc_vs_ode(settings : dict, tracker_params : dict)->int:
    p = _ode_params(settings)
    rows = mc_vs_ode_report(
        OdeModel(settings['model']), p, settings['d'], settings['trials'],
        seed = settings['seed'], record_every = settings['record_every'], workers = settings['workers'],
    )
    stream, close = _open_out(settings['out'])
    try:
        write_csv(stream, rows)
    finally:
        if close:
            stream.close()
    return 0

def cmd_plot(settings : dict, tracker_params : dict)->int:
    from . import plotting
    if settings['input'] is None:
        raise ConfigError('input', "is required")
    if settings['out'] is None:
        raise ConfigError('out', "is required (image path)")
    plotting.plot_file(settings['input'], settings['out'], x = settings['x'])
    return 0

COMMANDS = {
    'bench' : cmd_bench,
    'ode' : cmd_ode,
    'phase' : cmd_phase,
    'mc-vs-ode' : cmd_mc_vs_ode,
    'plot' : cmd_plot,
}

def _configure_logging(verbosity : int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level = level, format = "%(levelname)s %(name)s: %(message)s")

def main(argv : Sequence[str] = None)->int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    _configure_logging(args.verbose)
    try:
        settings, tracker_params = resolve_settings(args.command, args)
        return COMMANDS[args.command](settings, tracker_params)
    except ValueError as e:
        logger.debug("Invalid input", exc_info = True)
        print(f"substream {args.command}: error: {e}", file = sys.stderr)
        return 1
    except Exception as e:
        logger.debug("Run failed", exc_info = True)
        print(f"substream {args.command}: failed: {e.__class__.__name__}: {e}", file = sys.stderr)
        return 2

if __name__ == '__main__':
    sys.exit(main())
