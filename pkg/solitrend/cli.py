"""Command line interface: simulations, closed forms, tables and chart analysis.

Every run writes its artifacts and one ``manifest.json`` into the output
directory. Exit status is 0 on success, 1 for rejected input and 2 for
numerical failures.

Copyright 2026 The solitrend developers

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
or implied. See the License for the specific language governing
permissions and limitations under the License."""


import argparse
import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd
import scipy
import matplotlib

from . import __version__
from .errors import SolitrendError, ValidationError, NumericalError
from .waves import Grid1D, sample_profile, find_peaks, save_field, load_field
from .analytic import (
    sech2, SolitonParam, TrainSpec, CnoidalParams, forced_soliton, return_time,
    train_profile, superpose_trains, train_predictions, cnoidal, figure_specs, figure_peaks)
from .kdv import SolverConfig, invariant_log, save_invariant_log, fission, SCHEMES
from .lattice import (
    ChainConfig, integrate_chain, chain_from_profile, continuum_soliton_strain,
    continuum_compare, chain_energy, save_chain_trajectory)
from .oscillator import (
    ReferenceState, ProbState2, integrate_harmonic, integrate_nonharmonic,
    oscillation_period, fit_nonharmonic, osc_params, save_trajectory)
from .fib import table1, table2, table_to_csv, format_table
from .market import (
    DEFAULT_SEED, Swing, load_ohlc, detect_pivots, swings_from_pivots,
    retracement_levels, alternate_price_projection, expansion_levels,
    soliton_projection, fit_soliton_train, ratio_scorecard, score_ratios,
    fit_report, report_to_json, report_from_json, train_model)
from .plotting import emit_svg, ChartStyle


logger = logging.getLogger(__name__)

__all__ = ['RunManifest', 'build_parser', 'run', 'main']

OUT_ENV = 'SOLITREND_OUT'
MANIFEST = 'manifest.json'
EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2

DEFAULT_TIME = {'kdv': 1., 'chain': 50., 'oscillator': 200.}


def sha256(path):
    h = hashlib.sha256()
    with open(path, 'rb') as fd:
        for block in iter(lambda: fd.read(1 << 16), b''):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Record of a run: what was asked, with which inputs, what was written."""

    command: Optional[str]
    argv: List[str]
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None
    versions: dict = field(default_factory=dict)
    configs: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    status: str = 'running'
    message: str = ''
    wall_time: float = 0.

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def _versions():
    schemes = sorted(set(SCHEMES.values()))
    return {
        'solitrend': __version__,
        'schemes': {s: __version__ for s in schemes},
        'numpy': np.__version__, 'scipy': scipy.__version__,
        'pandas': pd.__version__, 'matplotlib': matplotlib.__version__,
        }


class Run:
    """Output directory bookkeeping of one command."""

    def __init__(self, out, manifest):
        self.out = Path(out)
        self.manifest = manifest

    def path(self, name):
        self.out.mkdir(parents=True, exist_ok=True)
        return self.out / name

    def input(self, filename):
        if not os.path.isfile(filename):
            raise ValidationError('input file %s does not exist' % filename)
        self.manifest.inputs[str(filename)] = sha256(filename)
        return filename

    def config(self, name, cfg):
        self.manifest.configs[name] = asdict(cfg)

    def written(self, name):
        path = self.out / name
        self.manifest.outputs[str(path)] = sha256(path)
        logger.info('wrote %s', path)
        return path

    def text(self, name, text):
        with open(self.path(name), 'w', encoding='utf-8', newline='\n') as fd:
            fd.write(text)
        return self.written(name)

    def json(self, name, doc):
        return self.text(name, json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + '\n')

    def save(self, name, saver, *args, **kwargs):
        saver(self.path(name), *args, **kwargs)
        return self.written(name)


# -- Commands

def _grid(args):
    return Grid1D(args.grid_length, args.grid_nx)


def _time(args):
    return args.time if args.time is not None else DEFAULT_TIME[args.system]


def cmd_simulate(args, run):

    T = _time(args)

    if args.system == 'kdv':
        grid = _grid(args)
        cfg = SolverConfig(scheme=args.scheme, dt=args.dt, C=args.forcing)
        run.config('solver', cfg)
        spec = TrainSpec(args.train, args.kappa, x0=0.25 * grid.length)
        field0 = sample_profile(lambda x: train_profile(spec, x), grid)

        def snapshot(step, f):
            run.save('kdv_snapshot_%06i.csv' % step, save_field, f)

        if args.snapshot_every < 0:
            raise ValidationError('--snapshot-every must be >= 0, got %i' % args.snapshot_every)
        final, log = invariant_log(
            field0, cfg, T, every=args.every,
            callback=snapshot if args.snapshot_every else None,
            callback_every=args.snapshot_every or 1)
        run.save('kdv_final.csv', save_field, final)
        run.save('kdv_invariants.csv', save_invariant_log, log)

        solitons = fission(field0, cfg, T, expected_n=args.train, gap=min(0.5, 0.5 * T))
        predicted = train_predictions(spec)
        run.json('kdv_report.json', {
            'amplitudes': [s.amplitude for s in solitons],
            'speeds': [s.speed for s in solitons],
            'positions': [s.position for s in solitons],
            'predicted_amplitudes': predicted.amplitudes[::-1].tolist(),
            'predicted_speeds': predicted.speeds[::-1].tolist(),
            'invariant_drift': (log[-1, 1:] - log[0, 1:]).tolist(),
            })
        print('fission amplitudes: ' + ', '.join('%.4f' % s.amplitude for s in solitons))

    elif args.system == 'chain':
        cfg = ChainConfig(k=args.stiffness, alpha=args.alpha, C1=args.chain_drive, dt=args.dt)
        run.config('chain', cfg)
        N = args.grid_nx
        if cfg.alpha != 0:
            P0 = continuum_soliton_strain(cfg, N, args.kappa)
        else:
            P0 = args.kappa**2 * sech2(args.kappa * (np.arange(N) - 0.5 * N))
        state = chain_from_profile(P0, cfg)
        traj = integrate_chain(state, cfg, T, every=args.every)
        run.save('chain_trajectory.csv', save_chain_trajectory, traj)

        result = continuum_compare(traj, cfg)
        e0, e1 = chain_energy(traj.state(0), cfg), chain_energy(traj.state(-1), cfg)
        run.json('chain_report.json', {
            'correlation': result.correlation, 'route': result.route,
            'tau': result.tau, 'T': result.T, 'notes': list(result.notes),
            'energy': [e0, e1],
            })
        print('continuum correlation (%s): %.4f' % (result.route, result.correlation))

    else:
        ref = ReferenceState(args.p10, args.p20, args.gamma)
        run.config('reference', ref)
        init = ProbState2(*args.init)
        integrate = integrate_harmonic if args.model == 'harmonic' else integrate_nonharmonic
        traj = integrate(ref, init, args.dt, T)
        run.save('oscillator_trajectory.csv', save_trajectory, traj)

        doc = {'params': asdict(osc_params(ref)),
               'invariant': traj.invariant_name,
               'invariant_drift': float(np.max(np.abs(traj.invariant - traj.invariant[0])))}
        try:
            doc['period'] = oscillation_period(traj, ref)
        except NumericalError as e:
            logger.warning('%s', e)
        if args.model == 'nonharmonic':
            doc['fit'] = dict(zip(['k', 'alpha', 'C1'], fit_nonharmonic(traj, ref)))
        run.json('oscillator_report.json', doc)
        print('%s drift: %.3e' % (traj.invariant_name, doc['invariant_drift']))


def cmd_analytic(args, run):

    grid = _grid(args)
    t = args.time if args.time is not None else 0.

    if args.kind == 'soliton':
        p = SolitonParam(args.kappa, 0.25 * grid.length, args.forcing)
        field = sample_profile(lambda x: forced_soliton(p, x, t), grid)
        doc = {'amplitude': p.amplitude, 'speed': p.speed}
        if p.C > 0:
            doc['return_time'] = return_time(p)._asdict()
        run.save('soliton.csv', save_field, field)
        run.json('soliton.json', doc)

    elif args.kind == 'train':
        spec = TrainSpec(args.train, args.kappa, x0=0.25 * grid.length, C=args.forcing)
        field = superpose_trains([spec], grid, t)
        pred = train_predictions(spec)
        run.save('train.csv', save_field, field)
        run.json('train.json', {k: v.tolist() for k, v in pred._asdict().items()})

    elif args.kind == 'cnoidal':
        params = CnoidalParams.from_roots(*args.roots)
        field = sample_profile(lambda x: cnoidal(params, args.forcing, x, t), grid)
        run.save('cnoidal.csv', save_field, field)
        run.json('cnoidal.json', {
            'v': params.v, 'a': params.a, 'b': params.b, 'roots': list(params.roots),
            'm': params.m, 'wavelength': float(params.wavelength)})

    else:
        figs = [args.fig] if args.fig is not None else [2, 3, 4, 5]
        doc = {}
        for n in figs:
            fig = figure_specs(n)
            field = superpose_trains(fig.specs, fig.grid, fig.t)
            run.save('figure%i.csv' % n, save_field, field)
            run.text('figure%i.svg' % n, emit_svg(field, style=ChartStyle(title='figure %i' % n)))
            doc[str(n)] = {
                'peaks': [list(p) for p in figure_peaks(n)],
                'heights': [s.height for s in fig.specs],
                'measured': [pk.height for pk in find_peaks(field)[:sum(s.n for s in fig.specs)]],
                }
        run.json('figures.json', doc)
        for n in figs:
            print('figure %s: %s' % (n, doc[str(n)]['peaks']))


def cmd_tables(args, run):
    for name, table in [('table1', table1()), ('table2', table2())]:
        run.text(name + '.csv', table_to_csv(table))
        text = format_table(table)
        run.text(name + '.txt', text + '\n')
        print(text + '\n')


def _try_report(make, *args):
    try:
        return make(*args)
    except ValidationError as e:
        logger.warning('projection skipped: %s', e)
        return None


def cmd_analyze(args, run):

    series = load_ohlc(run.input(args.csv))
    pivots = detect_pivots(series, args.threshold)
    swings = swings_from_pivots(series, pivots)
    stamps = series['timestamp']

    run.text('pivots.csv', pd.DataFrame({
        'index': [p.index for p in pivots],
        'timestamp': [stamps.iloc[p.index].isoformat() for p in pivots],
        'price': [p.price for p in pivots],
        'kind': [p.kind for p in pivots],
        }).to_csv(index=False, lineterminator='\n'))
    run.text('swings.csv', pd.DataFrame({
        'start': [s.start.index for s in swings], 'end': [s.end.index for s in swings],
        'direction': [s.direction for s in swings],
        'price_range': [s.price_range for s in swings],
        'bars': [s.bars for s in swings], 'seconds': [s.seconds for s in swings],
        }).to_csv(index=False, lineterminator='\n'))

    if not swings:
        raise ValidationError('no swings at threshold %g, lower --threshold' % args.threshold)

    reports = {'retracement': retracement_levels(swings[-1])}
    if len(swings) >= 2:
        reports['expansion'] = _try_report(expansion_levels, swings[-2], swings[-1])
    if len(swings) >= 3:
        anchor = swings[-1].start
        reports['app'] = _try_report(
            alternate_price_projection, swings[-3], anchor.price, anchor.index)
    for name, report in reports.items():
        if report is not None:
            run.text('%s.json' % name, report_to_json(report))
    print('%i pivots, %i swings' % (len(pivots), len(swings)))


def cmd_fit(args, run):

    series = load_ohlc(run.input(args.csv))
    fit = fit_soliton_train(series, args.pulses, seed=args.seed, workers=args.workers)
    card = ratio_scorecard(fit) if len(fit.pulses) >= 2 else None
    run.text('fit.json', report_to_json(fit_report(fit, card)))

    tau = np.arange(len(series), dtype=float)
    model = train_model(tau, fit.pulses, fit.C, fit.offset) + fit.trend[0] * tau + fit.trend[1]
    run.text('fit_curve.csv', pd.DataFrame(
        {'bar': tau.astype(int), 'close': series['close'], 'model': model}
        ).to_csv(index=False, lineterminator='\n'))
    print('rms residual %.6g (%s)' % (fit.residual, fit.status))


def cmd_project(args, run):

    swing = Swing.from_prices(args.start_price, args.start_price + args.range,
                              bars=args.span, start_index=args.origin)
    report = soliton_projection(swing, args.horizon)
    run.text('soliton_projection.json', report_to_json(report))
    for level, t in zip(report.levels, report.times):
        print('%-18s price %.6g  time %.6g' % (level.label, level.value, t.value))

    if args.anchor is not None:
        run.text('app.json', report_to_json(alternate_price_projection(swing, args.anchor)))
    if args.amplitudes:
        rows = score_ratios(args.amplitudes, args.times or None)
        run.json('scorecard.json', [r._asdict() for r in rows])


def cmd_plot(args, run):

    source = run.input(args.input)
    with open(source) as fd:
        first = fd.readline()
    data = load_field(source) if first.startswith('#') else load_ohlc(source)

    report = None
    if args.overlay:
        with open(run.input(args.overlay), encoding='utf-8') as fd:
            report = report_from_json(fd.read())
    name = Path(source).stem + '.svg'
    run.text(name, emit_svg(data, report, ChartStyle(title=Path(source).stem)))


def cmd_replay(args, run):
    with open(run.input(args.manifest), encoding='utf-8') as fd:
        argv = json.load(fd)['argv']
    if argv and argv[0] == 'replay':
        raise ValidationError('a replay manifest cannot be replayed')
    return argv


COMMANDS = {
    'simulate': cmd_simulate, 'analytic': cmd_analytic, 'tables': cmd_tables,
    'analyze': cmd_analyze, 'fit': cmd_fit, 'project': cmd_project,
    'plot': cmd_plot, 'replay': cmd_replay,
    }


# -- Parser

class ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        raise ValidationError('%s: %s' % (self.prog, message))


def build_parser():

    fmt = argparse.ArgumentDefaultsHelpFormatter
    common = ArgumentParser(add_help=False)
    common.add_argument('--out', default=os.environ.get(OUT_ENV, 'solitrend-out'),
                        help='output directory (environment %s)' % OUT_ENV)
    common.add_argument('--seed', type=int, default=DEFAULT_SEED, help='random seed')
    common.add_argument('--workers', type=int, default=1, help='worker pool size')
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for progress, -vv for numerical details')

    grid = ArgumentParser(add_help=False)
    grid.add_argument('--grid-nx', type=int, default=512, help='grid points (chain sites)')
    grid.add_argument('--grid-length', type=float, default=40., help='periodic domain length')
    grid.add_argument('--kappa', type=float, default=1., help='soliton wavenumber')
    grid.add_argument('--forcing', type=float, default=0., help='constant forcing C')
    grid.add_argument('--train', type=int, default=1, help='solitons in the initial train')
    grid.add_argument('--time', type=float, default=None,
                      help='final time (simulate: kdv %g, chain %g, oscillator %g; analytic: 0)'
                      % (DEFAULT_TIME['kdv'], DEFAULT_TIME['chain'], DEFAULT_TIME['oscillator']))

    parser = ArgumentParser(
        prog='solitrend', formatter_class=fmt,
        description='Soliton model of market trends: simulations, closed forms, '
        'Fibonacci tables and price chart projections.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('simulate', parents=[common, grid], formatter_class=fmt,
                       help='evolve the market equation, the chain or the oscillators')
    p.add_argument('system', choices=['kdv', 'chain', 'oscillator'])
    p.add_argument('--dt', type=float, default=1e-3, help='time step')
    p.add_argument('--scheme', choices=['zk', 'spectral'], default='spectral',
                   help='kdv integrator')
    p.add_argument('--every', type=int, default=100, help='steps between log records')
    p.add_argument('--snapshot-every', type=int, default=0,
                   help='steps between kdv field snapshots, 0 for none')
    p.add_argument('--alpha', type=float, default=0.25, help='chain nonlinearity')
    p.add_argument('--stiffness', type=float, default=1., help='chain stiffness k')
    p.add_argument('--chain-drive', type=float, default=0., help='chain constant drive C1')
    p.add_argument('--model', choices=['harmonic', 'nonharmonic'], default='harmonic',
                   help='oscillator system')
    p.add_argument('--p10', type=float, default=0.5, help='oscillator reference p10')
    p.add_argument('--p20', type=float, default=0.5, help='oscillator reference p20')
    p.add_argument('--gamma', type=float, default=0.1, help='oscillator coupling')
    p.add_argument('--init', type=float, nargs=2, default=[0.5, 0.52], metavar=('P1', 'P2'),
                   help='oscillator initial state')

    p = sub.add_parser('analytic', parents=[common, grid], formatter_class=fmt,
                       help='closed form profiles and the synthetic chart figures')
    p.add_argument('kind', choices=['soliton', 'train', 'cnoidal', 'figures'])
    p.add_argument('--roots', type=float, nargs=3, default=[-1., 0., 2.],
                   metavar=('F1', 'F2', 'F3'), help='cnoidal cubic roots')
    p.add_argument('--fig', type=int, choices=[2, 3, 4, 5], default=None,
                   help='single figure (default all)')

    sub.add_parser('tables', parents=[common], formatter_class=fmt,
                   help='Fibonacci against soliton tables')

    p = sub.add_parser('analyze', parents=[common], formatter_class=fmt,
                       help='zigzag swings and ratio projections of an OHLC csv')
    p.add_argument('csv')
    p.add_argument('--threshold', type=float, default=0.05, help='zigzag reversal fraction')

    p = sub.add_parser('fit', parents=[common], formatter_class=fmt,
                       help='fit a soliton train to an OHLC csv')
    p.add_argument('csv')
    p.add_argument('--pulses', type=int, default=2, help='number of pulses')

    p = sub.add_parser('project', parents=[common], formatter_class=fmt,
                       help='soliton m^2 and alternate price projections from explicit anchors')
    p.add_argument('--range', type=float, required=True, help='first swing price range A1')
    p.add_argument('--span', type=int, default=1, help='first swing duration T1 in bars')
    p.add_argument('--start-price', type=float, default=0., help='trend origin price')
    p.add_argument('--origin', type=int, default=0, help='trend origin bar')
    p.add_argument('--horizon', type=int, default=4, help='last pulse projected')
    p.add_argument('--anchor', type=float, default=None, help='alternate projection anchor price')
    p.add_argument('--amplitudes', type=float, nargs='+', default=None,
                   help='observed tops to score against m^2')
    p.add_argument('--times', type=float, nargs='+', default=None,
                   help='observed top times to score against m^2')

    p = sub.add_parser('plot', parents=[common], formatter_class=fmt,
                       help='SVG chart of a field or OHLC csv')
    p.add_argument('input')
    p.add_argument('--overlay', default=None, help='projection report json')

    p = sub.add_parser('replay', parents=[common], formatter_class=fmt,
                       help='re-run the command recorded in a manifest')
    p.add_argument('manifest')

    return parser


def _configure_logging(verbose):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger('solitrend').setLevel(level)


def _write_manifest(out, manifest):
    try:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        (path / MANIFEST).write_text(manifest.to_json(), encoding='utf-8')
    except OSError as e:
        print('solitrend: cannot write manifest: %s' % e, file=sys.stderr)


def run(argv=None):
    """
    Run one command and return the exit status.

    The manifest is written even when the command fails; its ``status``
    is ``'ok'``, ``'invalid'`` or ``'failed'``. A replay writes its own
    manifest, with the digest of the replayed one, before re-running the
    recorded command.
    """

    argv = list(sys.argv[1:] if argv is None else argv)
    manifest = RunManifest(None, argv, versions=_versions())
    out = os.environ.get(OUT_ENV, 'solitrend-out')
    start = time.perf_counter()
    status = EXIT_OK
    replay = None

    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args.verbose)
        out = args.out
        manifest.command = args.command
        manifest.params = {k: v for k, v in vars(args).items() if k != 'verbose'}
        manifest.seed = args.seed
        if args.workers < 1:
            raise ValidationError('--workers must be >= 1, got %i' % args.workers)

        result = COMMANDS[args.command](args, Run(out, manifest))
        if args.command == 'replay':
            replay = result
            manifest.message = 'replays: %s' % ' '.join(result)
        manifest.status = 'ok'

    except ValidationError as e:
        status, manifest.status, manifest.message = EXIT_VALIDATION, 'invalid', str(e)
        print('solitrend: error: %s' % e, file=sys.stderr)
    except NumericalError as e:
        status, manifest.status, manifest.message = EXIT_NUMERICAL, 'failed', str(e)
        print('solitrend: numerical failure: %s' % e, file=sys.stderr)
    except SolitrendError as e:
        status, manifest.status, manifest.message = EXIT_VALIDATION, 'invalid', str(e)
        print('solitrend: error: %s' % e, file=sys.stderr)
    except OSError as e:
        status, manifest.status, manifest.message = EXIT_VALIDATION, 'invalid', str(e)
        print('solitrend: error: %s' % e, file=sys.stderr)

    manifest.wall_time = time.perf_counter() - start
    _write_manifest(out, manifest)

    if replay is not None:
        logger.info('replaying %s', ' '.join(replay))
        return run(replay)
    return status


def main():
    sys.exit(run())
