"""OHLC price series: zigzag swings, ratio projections and soliton train fits.

Time is measured in bar index units throughout; timestamps are only
carried along for reporting.

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


import json
import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd
import scipy.optimize
import scipy.signal

from .errors import ValidationError, EmptySeriesError, OhlcFormatError
from .analytic import sech2
from .fib import RETRACEMENT_RATIOS, MINER_RATIOS, fib_limit_ratios, percent_difference


logger = logging.getLogger(__name__)

__all__ = [
    'DEFAULT_SEED', 'OHLC_COLUMNS', 'OhlcBar', 'Pivot', 'Swing', 'Level', 'TimeLevel',
    'ProjectionReport', 'Pulse', 'SolitonFit', 'ScoreRow',
    'load_ohlc', 'save_ohlc', 'ohlc_frame', 'detect_pivots', 'swings_from_pivots',
    'retracement_levels', 'alternate_price_projection', 'expansion_levels',
    'soliton_projection', 'fit_soliton_train', 'train_model', 'score_ratios',
    'ratio_scorecard', 'fit_report', 'report_to_json', 'report_from_json',
    'synthetic_series',
    ]

DEFAULT_SEED = 20200917

OHLC_COLUMNS = ('timestamp', 'open', 'high', 'low', 'close', 'volume')

METHODS = ('retracement', 'APP', 'expansion', 'soliton-m²', 'soliton-fit')


class OhlcBar(NamedTuple):
    timestamp: pd.Timestamp
    open: float
    high: float
    low: float
    close: float
    volume: float = float('nan')


class Pivot(NamedTuple):
    index: int
    price: float
    kind: str  # 'high' or 'low'


@dataclass(frozen=True)
class Swing:
    """
    Pivot to pivot price move.

    Parameters
    ----------

    start, end : Pivot
        Swing extremes, ``end.index > start.index``.
    seconds : float, optional
        Wall clock duration, when the series has timestamps.

    """

    start: Pivot
    end: Pivot
    seconds: Optional[float] = None

    def __post_init__(self):
        if self.end.index <= self.start.index:
            raise ValidationError(
                'swing must move forward in time, got bars %i -> %i'
                % (self.start.index, self.end.index))
        if self.end.price == self.start.price:
            raise ValidationError('swing at bar %i has zero price range' % self.start.index)
        if not (self.start.price >= 0 and self.end.price >= 0):
            raise ValidationError('swing prices must be non-negative')

    @classmethod
    def from_prices(cls, start_price, end_price, bars=1, start_index=0):
        up = end_price > start_price
        return cls(Pivot(start_index, float(start_price), 'low' if up else 'high'),
                   Pivot(start_index + bars, float(end_price), 'high' if up else 'low'))

    @property
    def direction(self):
        return 'up' if self.end.price > self.start.price else 'down'

    @property
    def sign(self):
        return 1. if self.direction == 'up' else -1.

    @property
    def price_range(self):
        return abs(self.end.price - self.start.price)

    @property
    def bars(self):
        return self.end.index - self.start.index


class Level(NamedTuple):
    ratio: float
    value: float
    label: str


class TimeLevel(NamedTuple):
    ratio: float
    value: float
    rounded: int
    label: str


@dataclass(frozen=True)
class ProjectionReport:
    """
    Projected price levels and times, each tagged with its generating ratio.

    ``anchors`` holds ``{'name', 'index', 'price'}`` records of the pivots
    the projection was measured from; ``fit`` is only set for soliton
    train fits.
    """

    method: str
    anchors: Tuple[dict, ...] = ()
    levels: Tuple[Level, ...] = ()
    times: Tuple[TimeLevel, ...] = ()
    fit: Optional[dict] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError('unknown projection method %r' % self.method)
        for level in self.levels:
            if not (np.isfinite(level.value) and level.value > 0):
                raise ValidationError(
                    '%s level %s = %g is not a positive price'
                    % (self.method, level.label, level.value))


# -- Ingestion

def _source_name(source):
    return getattr(source, 'name', source if isinstance(source, str) else '<stream>')


def load_ohlc(source):
    """
    Read and validate an OHLC CSV file.

    Parameters
    ----------

    source : str or file-like
        CSV with header ``timestamp,open,high,low,close[,volume]``,
        ISO-8601 timestamps.

    Returns
    -------

    frame : pandas.DataFrame
        Columns ``timestamp`` (UTC), ``open``, ``high``, ``low``,
        ``close``, ``volume`` (NaN when absent), sorted by time.

    Raises
    ------

    EmptySeriesError
        No data rows.
    OhlcFormatError
        Malformed row, OHLC inequality violation or duplicate
        timestamp, with the offending line number.

    """

    name = _source_name(source)
    try:
        raw = pd.read_csv(source, dtype=str, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise EmptySeriesError('%s: empty file' % name) from None
    except pd.errors.ParserError as e:
        m = re.search(r'line (\d+)', str(e))
        raise OhlcFormatError('%s: malformed row' % name,
                              int(m.group(1)) if m else None) from None

    raw.columns = [str(c).strip().lower() for c in raw.columns]
    missing = [c for c in OHLC_COLUMNS[:-1] if c not in raw.columns]
    if missing:
        raise OhlcFormatError('%s: missing column(s) %s' % (name, ', '.join(missing)), 1)
    if len(raw) == 0:
        raise EmptySeriesError('%s: no price rows' % name)

    frame = pd.DataFrame({
        'timestamp': pd.to_datetime(raw['timestamp'], utc=True, errors='coerce', format='ISO8601')})
    for col in OHLC_COLUMNS[1:]:
        values = raw[col] if col in raw.columns else pd.Series([None] * len(raw))
        frame[col] = pd.to_numeric(values, errors='coerce').astype(float)

    def reject(mask, message):
        bad = np.flatnonzero(np.asarray(mask))
        if len(bad):
            i = int(bad[0])
            raise OhlcFormatError('%s: %s' % (message, ', '.join(
                '%s=%s' % (c, raw.iloc[i][c]) for c in raw.columns)), i + 2)

    prices = frame[['open', 'high', 'low', 'close']]
    volume_given = raw['volume'].notna() if 'volume' in raw.columns else False
    reject(frame['timestamp'].isna(), 'unparsable timestamp')
    reject(prices.isna().any(axis=1) | (volume_given & frame['volume'].isna()),
           'unparsable number')
    reject(~np.isfinite(prices).all(axis=1) | (prices <= 0).any(axis=1), 'prices must be positive')
    reject((frame['low'] > prices[['open', 'close']].min(axis=1))
           | (frame['high'] < prices[['open', 'close']].max(axis=1)),
           'violates low <= open, close <= high')
    reject(frame['volume'] < 0, 'negative volume')
    reject(frame['timestamp'].duplicated(), 'duplicate timestamp')

    if not frame['timestamp'].is_monotonic_increasing:
        logger.debug('%s: sorting %i bars by timestamp', name, len(frame))
        frame = frame.sort_values('timestamp', kind='mergesort')
    return frame.reset_index(drop=True)


def ohlc_frame(bars):
    """Series frame from a sequence of :class:`OhlcBar`."""
    frame = pd.DataFrame([tuple(b) for b in bars], columns=list(OHLC_COLUMNS))
    frame['timestamp'] = pd.to_datetime(frame['timestamp'], utc=True)
    return frame


def save_ohlc(filename, frame):
    out = frame.copy()
    out['timestamp'] = out['timestamp'].map(lambda ts: ts.isoformat())
    out.to_csv(filename, index=False, columns=list(OHLC_COLUMNS),
               lineterminator='\n')


def _closes(series):
    if isinstance(series, pd.DataFrame):
        c = series['close'].to_numpy(dtype=float)
    else:
        c = np.asarray(series, dtype=float).ravel()
    if len(c) == 0:
        raise EmptySeriesError('price series is empty')
    return c


# -- Swings

def detect_pivots(series, threshold):
    """
    Zigzag pivots on closing prices.

    A pivot is confirmed once the close reverses from the running
    extreme by at least the fraction ``threshold``. The first and last
    bar are always included as provisional pivots, and the kinds
    strictly alternate between ``'high'`` and ``'low'``.

    Parameters
    ----------

    series : pandas.DataFrame or array_like
        OHLC frame or plain closing prices.
    threshold : float
        Reversal fraction, e.g. 0.05 for 5%.

    Returns
    -------

    pivots : list of Pivot

    """

    if not threshold > 0:
        raise ValidationError('zigzag threshold must be positive, got %r' % threshold)
    c = _closes(series)
    n = len(c)
    if n == 1:
        return [Pivot(0, float(c[0]), 'low')]

    up, down = 1. + threshold, 1. - threshold
    idx = [0]
    trend, hi, lo, ext = 0, 0, 0, 0

    for i in range(1, n):
        if trend == 0:
            if c[i] > c[hi]:
                hi = i
            if c[i] < c[lo]:
                lo = i
            if c[i] >= c[lo] * up:
                if lo != 0:
                    idx.append(lo)
                trend, ext = 1, i
            elif c[i] <= c[hi] * down:
                if hi != 0:
                    idx.append(hi)
                trend, ext = -1, i
        elif trend == 1:
            if c[i] > c[ext]:
                ext = i
            elif c[i] <= c[ext] * down:
                idx.append(ext)
                trend, ext = -1, i
        else:
            if c[i] < c[ext]:
                ext = i
            elif c[i] >= c[ext] * up:
                idx.append(ext)
                trend, ext = 1, i

    if trend != 0 and ext != idx[-1]:
        idx.append(ext)
    if idx[-1] != n - 1:
        idx.append(n - 1)

    first = 'high' if c[idx[0]] > c[idx[1]] else 'low'
    other = {'high': 'low', 'low': 'high'}
    pivots, kind = [], first
    for i in idx:
        pivots.append(Pivot(i, float(c[i]), kind))
        kind = other[kind]

    logger.debug('zigzag(%g): %i pivots on %i bars', threshold, len(pivots), n)
    return pivots


def swings_from_pivots(series, pivots):
    """Swings between consecutive pivots; flat pairs are skipped."""

    stamps = series['timestamp'] if isinstance(series, pd.DataFrame) else None
    swings = []
    for a, b in zip(pivots[:-1], pivots[1:]):
        if a.price == b.price:
            logger.debug('skipping flat swing at bars %i -> %i', a.index, b.index)
            continue
        seconds = None
        if stamps is not None:
            seconds = (stamps.iloc[b.index] - stamps.iloc[a.index]).total_seconds()
        swings.append(Swing(a, b, seconds))
    return swings


# -- Projections

def _anchor(name, pivot):
    return {'name': name, 'index': int(pivot.index), 'price': float(pivot.price)}


def _percent_label(r):
    return '%g%%' % round(100 * r, 1)


def _time_level(ratio, value, label):
    return TimeLevel(ratio, float(value), int(math.floor(value + 0.5)), label)


def retracement_levels(swing):
    """
    Retracement levels :math:`P_{end} - r \\Delta P` of a swing for the
    ratios 0.382, 0.500, 0.618 and 1.000; the 1.000 level is the swing
    start.
    """
    levels = tuple(
        Level(r, swing.end.price - r * swing.price_range * swing.sign, _percent_label(r))
        for r in RETRACEMENT_RATIOS)
    return ProjectionReport(
        'retracement', (_anchor('start', swing.start), _anchor('end', swing.end)), levels)


def alternate_price_projection(swing, anchor_price, anchor_time=None):
    """
    Alternate price projection of a swing from a new anchor.

    Parameters
    ----------

    swing : Swing
        Swing whose price range and duration are projected.
    anchor_price : float
        Price the projection starts from, positive.
    anchor_time : float, optional
        Bar index of the anchor, default the end of ``swing``.

    Returns
    -------

    report : ProjectionReport
        Levels :math:`P_a + r \\Delta P` and times :math:`t_a + r \\Delta t`
        for the ratios 0.62, 1.00, 1.62, 2.00, 2.62 and 4.24. Times are
        kept exact and also rounded to whole bars.

    """

    if not anchor_price > 0:
        raise ValidationError('anchor price must be positive, got %r' % anchor_price)
    if anchor_time is None:
        anchor_time = swing.end.index
    return _miner_projection('APP', swing, anchor_price, anchor_time,
                             ({'name': 'anchor', 'index': anchor_time, 'price': float(anchor_price)},))


def _miner_projection(method, swing, anchor_price, anchor_time, anchors):
    levels = tuple(
        Level(r, anchor_price + r * swing.price_range * swing.sign, _percent_label(r))
        for r in MINER_RATIOS)
    times = tuple(
        _time_level(r, anchor_time + r * swing.bars, _percent_label(r)) for r in MINER_RATIOS)
    anchors = (_anchor('swing start', swing.start), _anchor('swing end', swing.end)) + anchors
    return ProjectionReport(method, anchors, levels, times)


def expansion_levels(swing_a, swing_b):
    """Miner expansion: ``swing_a`` projected from the end of its counter swing ``swing_b``."""
    if swing_a.direction == swing_b.direction:
        raise ValidationError('expansion needs a counter swing, both swings are %s'
                              % swing_a.direction)
    return _miner_projection('expansion', swing_a, swing_b.end.price, swing_b.end.index,
                             (_anchor('counter end', swing_b.end),))


def soliton_projection(first_swing, horizon_n=4, origin=None):
    """
    Trend tops and times of a soliton train fitted to the first swing.

    The m-th top lies :math:`m^2` first-swing ranges from the trend
    origin, reached after :math:`m^2` first-swing durations.
    A falling first swing projects downwards; tops at or below a zero
    price are left out, together with their times, and logged.

    Parameters
    ----------

    first_swing : Swing
        Initial trend swing, range :math:`A_1` and duration :math:`T_1`.
    horizon_n : int
        Last pulse projected, at least 2.
    origin : float, optional
        Bar index of the trend origin, default the swing start.

    """

    if int(horizon_n) != horizon_n or horizon_n < 2:
        raise ValidationError('horizon must be an integer >= 2, got %r' % horizon_n)
    if origin is None:
        origin = first_swing.start.index
    A1, T1, base = first_swing.price_range, first_swing.bars, first_swing.start.price
    levels, times = [], []
    for m in range(2, horizon_n + 1):
        label = 'soliton-m² (m=%i)' % m
        value = base + first_swing.sign * m * m * A1
        if not value > 0:
            logger.warning('%s dropped: %g is not a positive price', label, value)
            continue
        levels.append(Level(float(m * m), value, label))
        times.append(_time_level(float(m * m), origin + m * m * T1, label))
    return ProjectionReport(
        'soliton-m²', (_anchor('origin', first_swing.start), _anchor('first top', first_swing.end)),
        tuple(levels), tuple(times))


# -- Soliton train fit

class Pulse(NamedTuple):
    amplitude: float
    kappa: float
    center: float


@dataclass(frozen=True)
class SolitonFit:
    """
    Least squares fit of
    :math:`\\sum_m a_m \\mathrm{sech}^2(\\kappa_m (\\tau - c_m)) - C \\tau + d`
    to a detrended price series.

    ``trend`` is the removed linear trend ``(slope, intercept)``.
    ``history`` is the RMS residual at the start and after every simplex
    iteration of the winning refinement; ``best_history`` is the lowest
    residual so far, from the coarse stage to the final point.
    """

    pulses: Tuple[Pulse, ...]
    C: float
    offset: float
    trend: Tuple[float, float]
    residual: float
    status: str
    seed: int
    n_starts: int
    history: Tuple[float, ...] = ()
    best_history: Tuple[float, ...] = ()
    warnings: Tuple[str, ...] = field(default=())

    def as_dict(self):
        return {
            'params': [p._asdict() for p in self.pulses],
            'C': self.C, 'offset': self.offset,
            'trend': {'slope': self.trend[0], 'intercept': self.trend[1]},
            'residual': self.residual, 'status': self.status,
            'seed': self.seed, 'n_starts': self.n_starts,
            'warnings': list(self.warnings),
            }


def train_model(tau, pulses, C=0., offset=0.):
    """Evaluate the fitted pulse train on bar times ``tau``."""
    tau = np.asarray(tau, dtype=float)
    y = offset - C * tau
    for p in pulses:
        y = y + p.amplitude * sech2(p.kappa * (tau - p.center))
    return y


class _TrainObjective:
    """Variable projection: amplitudes, C and offset solved linearly."""

    def __init__(self, tau, y):
        self.tau, self.y = tau, y
        self.scale = max(np.sqrt(np.mean(y**2)), np.finfo(float).tiny)

    def basis(self, theta):
        n = len(theta) // 2
        centers, kappas = theta[:n], np.exp(theta[n:])
        cols = [sech2(k * (self.tau - c)) for c, k in zip(centers, kappas)]
        cols += [-self.tau, np.ones_like(self.tau)]
        return np.column_stack(cols)

    def linear(self, theta):
        coef, *_ = np.linalg.lstsq(self.basis(theta), self.y, rcond=None)
        return coef

    def __call__(self, theta):
        if not np.all(np.isfinite(theta)):
            return np.inf
        A = self.basis(theta)
        coef, *_ = np.linalg.lstsq(A, self.y, rcond=None)
        return float(np.sqrt(np.mean((A @ coef - self.y)**2)))


def _refine(objective, theta0, max_iter):
    history = [objective(theta0)]
    res = scipy.optimize.minimize(
        objective, theta0, method='Nelder-Mead',
        callback=lambda xk: history.append(objective(xk)),
        options=dict(maxiter=max_iter, maxfev=4 * max_iter, xatol=1e-9, fatol=1e-13,
                     adaptive=len(theta0) > 4))
    return res, history


def fit_soliton_train(series, n_pulses, seed=DEFAULT_SEED, workers=None,
                      n_jitter=4, n_refine=4, max_iter=4000):
    """
    Fit an ``n_pulses`` soliton train template to a price series.

    The linear trend is removed first. Starting points combine the most
    prominent peaks of the detrended series with a grid of pulse widths
    and seeded jitter; the best coarse starts are refined with the
    Nelder-Mead simplex, and the lowest residual wins (ties go to the
    lowest start index).

    Parameters
    ----------

    series : pandas.DataFrame or array_like
        OHLC frame or plain closing prices.
    n_pulses : int
        Number of pulses, at least 1.
    seed : int
        Seed of the start jitter; equal seeds give identical fits.
    workers : int, optional
        Thread pool size for the refinement runs.
    n_jitter : int
        Jittered copies of every grid start.
    n_refine : int
        Number of coarse starts refined.
    max_iter : int
        Simplex iteration budget per refinement.

    Returns
    -------

    fit : SolitonFit
        Pulses sorted by center. ``status`` is ``'converged'`` or
        ``'budget-exhausted'`` (best point found so far).

    """

    if int(n_pulses) != n_pulses or n_pulses < 1:
        raise ValidationError('number of pulses must be an integer >= 1, got %r' % n_pulses)
    n_pulses = int(n_pulses)
    c = _closes(series)
    n = len(c)
    if n < 3 * n_pulses + 2:
        raise ValidationError('%i bars are too few for %i pulses' % (n, n_pulses))

    tau = np.arange(n, dtype=float)
    slope, intercept = np.polyfit(tau, c, 1)
    y = c - (slope * tau + intercept)
    objective = _TrainObjective(tau, y)
    notes = []

    peaks, props = scipy.signal.find_peaks(y, prominence=0.)
    order = np.argsort(-props['prominences'], kind='stable')
    centers = sorted(float(p) for p in peaks[order[:n_pulses]])
    if len(centers) < n_pulses:
        msg = 'series has %i peaks, fewer than the %i pulses requested' % (len(centers), n_pulses)
        logger.warning(msg)
        notes.append(msg)
        fill = np.linspace(0, n - 1, n_pulses + 2)[1:-1]
        centers = sorted(centers + [float(x) for x in fill[len(centers):]])

    rng = np.random.default_rng(seed)
    widths = n / np.array([200., 100., 50., 25., 12.])
    starts = []
    for w in widths:
        base = np.concatenate([centers, np.full(n_pulses, -np.log(w))])
        starts.append(base)
        for _ in range(n_jitter):
            jitter = np.concatenate([rng.normal(0, w, n_pulses), rng.normal(0, 0.3, n_pulses)])
            starts.append(base + jitter)

    coarse = np.array([objective(s) for s in starts])
    chosen = np.argsort(coarse, kind='stable')[:n_refine]
    logger.debug('soliton fit: %i starts, refining %s', len(starts), list(chosen))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        runs = list(pool.map(lambda i: _refine(objective, starts[i], max_iter), chosen))

    best = min(range(len(runs)), key=lambda j: (runs[j][0].fun, chosen[j]))
    res, history = runs[best]
    best_history = np.minimum.accumulate([min(coarse)] + history + [res.fun])

    theta = res.x
    coef = objective.linear(theta)
    pulses = sorted(
        (Pulse(float(a), float(np.exp(lk)), float(ct))
         for a, ct, lk in zip(coef[:n_pulses], theta[:n_pulses], theta[n_pulses:])),
        key=lambda p: p.center)

    status = 'converged' if res.success else 'budget-exhausted'
    if not res.success:
        msg = 'soliton fit stopped after %i iterations: %s' % (res.nit, res.message)
        logger.warning(msg)
        notes.append(msg)

    fit = SolitonFit(tuple(pulses), float(coef[n_pulses]), float(coef[n_pulses + 1]),
                     (float(slope), float(intercept)), float(res.fun), status, seed,
                     len(starts), tuple(float(h) for h in history),
                     tuple(float(h) for h in best_history), tuple(notes))
    logger.info('soliton fit with %i pulses: rms residual %.4g (%s)',
                n_pulses, fit.residual, status)
    return fit


# -- Scorecard

class ScoreRow(NamedTuple):
    pulse: int
    quantity: str  # 'amplitude' or 'time'
    ratio: float
    template: float
    template_percent: float
    fibonacci: float
    fibonacci_percent: float
    flagged: bool


def score_ratios(amplitudes, times=None, flag_percent=10.):
    """
    Compare ratios to the first pulse with the :math:`m^2` template and
    the nearest Fibonacci ratio :math:`\\phi^k`.

    Deviations use the max-denominator percent difference. Rows whose
    template deviation exceeds ``flag_percent`` are flagged.
    """

    fib = fib_limit_ratios(range(0, 12), 30)
    rows = []
    for quantity, values in [('amplitude', amplitudes), ('time', times)]:
        if values is None:
            continue
        values = [float(v) for v in values]
        if len(values) < 2:
            raise ValidationError('scorecard needs at least two pulses, got %i' % len(values))
        if not values[0] > 0 or min(values) <= 0:
            raise ValidationError('%s ratios need positive values, got %s' % (quantity, values))
        for m, v in enumerate(values, start=1):
            ratio = v / values[0]
            template = float(m * m)
            nearest = min(fib, key=lambda f: abs(f - ratio))
            dev = percent_difference(ratio, template)
            rows.append(ScoreRow(m, quantity, ratio, template, dev, nearest,
                                 percent_difference(ratio, nearest), dev > flag_percent))
    return rows


def ratio_scorecard(fit, flag_percent=10.):
    """Amplitude and center time ratios of a fit, see :func:`score_ratios`."""
    if len(fit.pulses) < 2:
        raise ValidationError('scorecard needs a fit with at least two pulses')
    return score_ratios([p.amplitude for p in fit.pulses],
                        [p.center for p in fit.pulses], flag_percent)


def fit_report(fit, scorecard=None):
    """Wrap a fit (and its scorecard) in a :class:`ProjectionReport`."""
    d = fit.as_dict()
    if scorecard is not None:
        d['scorecard'] = [r._asdict() for r in scorecard]
    return ProjectionReport('soliton-fit', fit=d)


# -- Report serialization

def report_to_json(report):
    doc = {
        'method': report.method,
        'anchors': list(report.anchors),
        'levels': [l._asdict() for l in report.levels],
        'times': [t._asdict() for t in report.times],
        'fit': report.fit,
        }
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def report_from_json(text):
    try:
        doc = json.loads(text)
        return ProjectionReport(
            doc['method'], tuple(doc.get('anchors', ())),
            tuple(Level(**l) for l in doc.get('levels', ())),
            tuple(TimeLevel(**t) for t in doc.get('times', ())),
            doc.get('fit'))
    except (ValueError, KeyError, TypeError) as e:
        if isinstance(e, ValidationError):
            raise
        raise ValidationError('not a projection report: %s' % e) from None


# -- Synthetic data

def synthetic_series(pulses, n_bars=400, C=0., trend=(0., 100.), noise=0.,
                     seed=DEFAULT_SEED, start='2020-01-01', freq='D'):
    """
    Seeded OHLC frame whose closes follow a soliton train template.

    Parameters
    ----------

    pulses : sequence of Pulse
    n_bars : int
    C : float
        Background drift of the template.
    trend : (slope, intercept)
        Linear trend added to the closes.
    noise : float
        Standard deviation of additive Gaussian noise on the closes.

    """

    rng = np.random.default_rng(seed)
    tau = np.arange(n_bars, dtype=float)
    close = trend[1] + trend[0] * tau + train_model(tau, pulses, C)
    if noise > 0:
        close = close + rng.normal(0., noise, n_bars)
    if np.any(close <= 0):
        raise ValidationError('synthetic closes must stay positive, raise the trend intercept')

    opn = np.concatenate([[close[0]], close[:-1]])
    spread = np.abs(rng.normal(0., 0.002, n_bars)) * close
    return pd.DataFrame({
        'timestamp': pd.date_range(start, periods=n_bars, freq=freq, tz='UTC'),
        'open': opn,
        'high': np.maximum(opn, close) + spread,
        'low': np.minimum(opn, close) - spread,
        'close': close,
        'volume': np.round(rng.uniform(1e5, 1e6, n_bars)),
        })
