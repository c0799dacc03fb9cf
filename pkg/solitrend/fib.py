"""Fibonacci numbers, ratio sets and the Fibonacci versus soliton tables.

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


import io
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd

from .errors import ValidationError


__all__ = [
    'RatioRow', 'RatioTable', 'RETRACEMENT_RATIOS', 'MINER_RATIOS',
    'fib_numbers', 'fib_limit_ratios', 'miner_ratios', 'retracement_ratios',
    'percent_difference', 'nearest_ratio', 'table1', 'table2',
    'table_to_frame', 'table_to_csv', 'table_from_csv', 'format_table',
    ]

RETRACEMENT_RATIOS = (0.382, 0.500, 0.618, 1.000)
MINER_RATIOS = (0.62, 1.00, 1.62, 2.00, 2.62, 4.24)


class RatioRow(NamedTuple):
    index: int
    reference: float
    model: Optional[float] = None
    difference: Optional[float] = None


@dataclass(frozen=True)
class RatioTable:
    """Reference values against model values, blanks kept as ``None``."""

    title: str
    reference_label: str
    model_label: str
    rows: Tuple[RatioRow, ...]
    note: str = ''


def fib_numbers(count):
    """First ``count`` Fibonacci numbers starting 0, 1, 1, 2, ..."""
    if int(count) != count or count < 1:
        raise ValidationError('count must be an integer >= 1, got %r' % count)
    seq = [0, 1]
    while len(seq) < count:
        seq.append(seq[-1] + seq[-2])
    return seq[:count]


def fib_limit_ratios(k_values, i=20):
    """
    Ratios :math:`F_{i+k}/F_i`; a negative ``k`` gives the mirror ratio
    :math:`F_{i-l}/F_i` with ``l = -k``.

    >>> [round(r, 3) for r in fib_limit_ratios([1, 2, 3, -1, -2])]
    [1.618, 2.618, 4.236, 0.618, 0.382]

    """

    k_values = list(k_values)
    lo, hi = min(k_values + [0]), max(k_values + [0])
    if i + lo < 1:
        raise ValidationError('index %i too small for k = %i' % (i, lo))
    F = fib_numbers(i + hi + 1)
    return [F[i + k] / F[i] for k in k_values]


def miner_ratios():
    return list(MINER_RATIOS)


def retracement_ratios():
    return list(RETRACEMENT_RATIOS)


def percent_difference(a, b):
    """Difference in percent of the larger value, :math:`100 |a - b| / \\max(a, b)`."""
    top = max(a, b)
    if top <= 0:
        raise ValidationError('percent difference needs a positive value, got %r, %r' % (a, b))
    return 100. * abs(a - b) / top


def nearest_ratio(value, ratios):
    """Closest ratio of a set and the percent difference to it."""
    ratios = np.asarray(list(ratios), dtype=float)
    best = float(ratios[np.argmin(np.abs(ratios - value))])
    return best, percent_difference(value, best)


def _table(title, reference_label, model_label, reference, model, note=''):
    rows = []
    for i, (a, b) in enumerate(zip(reference, model), start=1):
        diff = None if b is None else round(percent_difference(a, b), 1)
        rows.append(RatioRow(i, float(a), None if b is None else float(b), diff))
    return RatioTable(title, reference_label, model_label, tuple(rows), note)


def table1():
    """
    Fibonacci ratios against soliton amplitude ratios. The amplitude
    column is tabulated data without a generating rule.
    """
    return _table(
        'Fibonacci ratios and corresponding soliton amplitudes',
        'fibonacci', 'soliton',
        [1., 1.62, 2.62, 4.24, 6.85, 11.09, 17.94],
        [1., None, 3., 4., 6., 10., 16.],
        note='soliton column is tabulated data (no generating rule)')


def table2():
    """Fibonacci numbers against the soliton arrival time ratios :math:`m^2`."""
    return _table(
        'Fibonacci numbers and corresponding soliton time spacing',
        'fibonacci', 'soliton',
        [1, 2, 3, 5, 8, 13, 21, 34],
        [1, None, None, 4, 9, 16, 25, 36])


# -- Serialization

def table_to_frame(table):
    frame = pd.DataFrame(
        [tuple(r) for r in table.rows],
        columns=['index', table.reference_label, table.model_label, 'difference_percent'])
    return frame.astype({'index': int, table.reference_label: float,
                         table.model_label: float, 'difference_percent': float})


def table_to_csv(table):
    buf = io.StringIO()
    buf.write('# %s\n' % table.title)
    if table.note:
        buf.write('# note: %s\n' % table.note)
    table_to_frame(table).to_csv(buf, index=False, lineterminator='\n')
    return buf.getvalue()


def table_from_csv(text):

    lines = text.splitlines()
    title, note = '', ''
    for line in lines:
        if not line.startswith('#'):
            break
        if line.startswith('# note: '):
            note = line[len('# note: '):]
        else:
            title = line[2:]

    frame = pd.read_csv(io.StringIO(text), comment='#')
    _, ref_label, model_label, _ = frame.columns

    def value(x):
        return None if pd.isna(x) else float(x)

    rows = tuple(
        RatioRow(int(r[0]), float(r[1]), value(r[2]), value(r[3]))
        for r in frame.itertuples(index=False))
    return RatioTable(title, ref_label, model_label, rows, note)


def format_table(table):
    """Aligned text block with ``-`` for blanks."""

    def cell(x, fmt):
        return '-' if x is None else fmt % x

    out = [table.title,
           '%5s  %10s  %10s  %8s' % ('#', table.reference_label, table.model_label, 'diff %')]
    for r in table.rows:
        out.append('%5i  %10s  %10s  %8s' % (
            r.index, cell(r.reference, '%.2f'), cell(r.model, '%g'), cell(r.difference, '%.1f')))
    if table.note:
        out.append('note: ' + table.note)
    return '\n'.join(out)
