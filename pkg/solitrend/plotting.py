"""Line charts of wave fields and price series, rendered to SVG.

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
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
import matplotlib
from matplotlib.figure import Figure

from .errors import ValidationError, EmptySeriesError
from .waves import WaveField


logger = logging.getLogger(__name__)

__all__ = ['ChartStyle', 'chart_data', 'render_chart', 'emit_svg']

# Fixed id salt and no date stamp, so equal input gives equal bytes.
SVG_RC = {'svg.fonttype': 'none', 'svg.hashsalt': 'solitrend'}
SVG_METADATA = {'Date': None}


@dataclass(frozen=True)
class ChartStyle:
    width: float = 8.
    height: float = 4.5
    title: str = ''
    color: str = 'C0'
    level_color: str = 'C3'
    time_color: str = 'C2'
    linewidth: float = 1.2


def chart_data(data):
    """
    Abscissa, ordinate and axis labels of a chartable object.

    ``WaveField`` plots ``u(x)``; an OHLC frame plots the closes against
    the bar index; an ``(x, y)`` pair is taken as is.
    """

    if isinstance(data, WaveField):
        return data.x, data.samples, 'x', 'u(x, t=%g)' % data.t
    if isinstance(data, pd.DataFrame):
        if len(data) == 0:
            raise EmptySeriesError('nothing to plot: empty price series')
        return np.arange(len(data), dtype=float), data['close'].to_numpy(float), 'bar', 'close'
    x, y = (np.asarray(a, dtype=float) for a in data)
    return x, y, 'x', 'y'


def render_chart(data, report=None, style=ChartStyle()):
    """
    Line chart with an optional projection overlay.

    Parameters
    ----------

    data : WaveField, pandas.DataFrame or (x, y)
    report : ProjectionReport, optional
        Price levels are drawn as labelled horizontal lines, projected
        times as vertical markers.
    style : ChartStyle

    Returns
    -------

    fig : matplotlib.figure.Figure
        Linear axes, the first line holds the data polyline.

    """

    x, y, xlabel, ylabel = chart_data(data)
    if len(y) == 0 or len(x) != len(y):
        raise ValidationError('nothing to plot: %i abscissae, %i values' % (len(x), len(y)))
    if not np.all(np.isfinite(y)):
        raise ValidationError('chart data is not finite')

    fig = Figure(figsize=(style.width, style.height))
    ax = fig.add_subplot(1, 1, 1)
    ax.plot(x, y, '-', color=style.color, lw=style.linewidth)
    ax.set_xscale('linear')
    ax.set_yscale('linear')
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if style.title:
        ax.set_title(style.title)

    if report is not None:
        for level in report.levels:
            ax.axhline(level.value, color=style.level_color, lw=0.8, ls='--')
            ax.text(x[0], level.value, level.label, color=style.level_color,
                    va='bottom', ha='left', fontsize='small')
        for t in report.times:
            ax.axvline(t.value, color=style.time_color, lw=0.8, ls=':')

    ax.grid(True, lw=0.3)
    logger.debug('chart: %i points, %i overlay levels', len(y),
                 0 if report is None else len(report.levels))
    return fig


def emit_svg(data, report=None, style=ChartStyle()):
    """Self-contained SVG document of :func:`render_chart`."""
    fig = render_chart(data, report, style)
    buf = io.BytesIO()
    with matplotlib.rc_context(SVG_RC):
        fig.savefig(buf, format='svg', metadata=SVG_METADATA)
    return buf.getvalue().decode('utf-8')
