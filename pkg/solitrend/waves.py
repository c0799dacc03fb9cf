"""Periodic grids, sampled wave fields, norms and peak diagnostics.

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


import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.fft

from .errors import ValidationError


logger = logging.getLogger(__name__)

__all__ = [
    'Grid1D', 'WaveField', 'Peak', 'FieldNorms',
    'sample_profile', 'find_peaks', 'field_norms', 'shift_field',
    'spectral_derivative', 'save_field', 'load_field',
    ]


@dataclass(frozen=True)
class Grid1D:
    """
    Uniform periodic grid on :math:`[0, L)`.

    Parameters
    ----------

    length : float
        Domain length :math:`L`.
    nx : int
        Number of grid points, at least 8.

    """

    length: float
    nx: int

    def __post_init__(self):
        if not np.isfinite(self.length) or self.length <= 0:
            raise ValidationError('grid length must be positive, got %r' % self.length)
        if int(self.nx) != self.nx or self.nx < 8:
            raise ValidationError('grid needs an integer nx >= 8, got %r' % self.nx)
        object.__setattr__(self, 'nx', int(self.nx))
        object.__setattr__(self, 'length', float(self.length))

    @property
    def dx(self):
        return self.length / self.nx

    @property
    def x(self):
        return np.arange(self.nx) * self.dx

    def wrap(self, index):
        return index % self.nx


@dataclass(frozen=True, eq=False)
class WaveField:
    """
    Real field sampled on a :class:`Grid1D` at time ``t``.

    The samples are copied on construction and stored read-only.
    """

    grid: Grid1D
    samples: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        u = np.array(self.samples, dtype=float)
        if u.shape != (self.grid.nx,):
            raise ValidationError(
                'field has %s samples, grid expects %i' % (u.shape, self.grid.nx))
        if not np.all(np.isfinite(u)):
            raise ValidationError('field samples must be finite')
        u.flags.writeable = False
        object.__setattr__(self, 'samples', u)
        object.__setattr__(self, 't', float(self.t))

    @property
    def x(self):
        return self.grid.x

    def replace(self, samples, t=None):
        return WaveField(self.grid, samples, self.t if t is None else t)


class Peak(NamedTuple):
    position: float
    height: float
    index: int


class FieldNorms(NamedTuple):
    l2: float
    linf: float


def sample_profile(f, grid, t=0.0):
    """
    Sample the profile ``f(x)`` on the grid points ``i*dx``.

    ``f`` is called once with the array of grid points; scalar
    results are broadcast.
    """

    x = grid.x
    u = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    bad = ~np.isfinite(u)
    if np.any(bad):
        raise ValidationError('profile is not finite at x = %g' % x[bad][0])
    return WaveField(grid, u, t)


def find_peaks(field, min_height=None):
    """
    Local maxima of a field above ``min_height``.

    Positions and heights are refined with the parabola through the
    three samples around each maximum.

    Parameters
    ----------

    field : WaveField
    min_height : float, optional
        Detection threshold. Default 1% of max|u|.

    Returns
    -------

    peaks : list of Peak
        Sorted by descending height.

    """

    u = field.samples
    grid = field.grid
    if min_height is None:
        min_height = 0.01 * np.max(np.abs(u))
        if min_height == 0:
            return []
    elif min_height <= 0:
        raise ValidationError('min_height must be positive, got %r' % min_height)

    um, up = np.roll(u, 1), np.roll(u, -1)
    idx = np.flatnonzero((u > um) & (u >= up) & (u > min_height))

    peaks = []
    for i in idx:
        a, b, c = um[i], u[i], up[i]
        curv = a - 2 * b + c
        shift = 0.5 * (a - c) / curv if curv != 0 else 0.
        height = b - 0.25 * (a - c) * shift
        position = ((i + shift) * grid.dx) % grid.length
        peaks.append(Peak(position, height, int(i)))

    logger.debug('find_peaks: %i maxima above %g', len(peaks), min_height)
    return sorted(peaks, key=lambda p: -p.height)


def field_norms(field):
    u = field.samples
    # exactly rounded sum, independent of sample order
    l2 = np.sqrt(math.fsum(u**2) * field.grid.dx)
    linf = np.max(np.abs(u))
    return FieldNorms(float(l2), float(linf))


def shift_field(field, k):
    """Periodic shift by ``k`` grid points."""
    return field.replace(np.roll(field.samples, k))


def spectral_derivative(u, length, order=1):
    """
    Fourier derivative of periodic samples ``u`` on a domain of
    length ``length``. The Nyquist mode is dropped for odd orders.
    """

    u = np.asarray(u, dtype=float)
    n = u.shape[-1]
    ik = 2j * np.pi * scipy.fft.rfftfreq(n, d=length / n)
    if order % 2 == 1 and n % 2 == 0:
        ik[-1] = 0.
    return scipy.fft.irfft(ik**order * scipy.fft.rfft(u), n=n)


# -- CSV serialization

def save_field(filename, field):
    """Write ``x,value`` rows with ``# t=`` and ``# length=`` headers."""
    data = np.column_stack((field.x, field.samples))
    header = 't=%r\nlength=%r\nx,value' % (field.t, field.grid.length)
    np.savetxt(filename, data, delimiter=',', header=header, comments='# ')


def load_field(filename):

    meta = {}
    with open(filename) as fd:
        for line in fd:
            if not line.startswith('#'):
                break
            key, sep, value = line[1:].strip().partition('=')
            if sep:
                meta[key.strip()] = float(value)

    data = np.loadtxt(filename, delimiter=',', comments='#', ndmin=2)
    if data.shape[0] == 0:
        raise ValidationError('%s holds no samples' % filename)
    nx = data.shape[0]
    length = meta.get('length', nx * (data[1, 0] - data[0, 0]) if nx > 1 else 1.)
    return WaveField(Grid1D(length, nx), data[:, 1], meta.get('t', 0.))
