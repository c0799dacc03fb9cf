"""Closed-form solutions of the Market equation.

All profiles are written for the normalisation

.. math:: u_t + 6 u u_x + u_{xxx} + C = 0

and transported to the unit-nonlinearity form with dispersion
:math:`\\delta` by :func:`to_market_frame`. The cnoidal family is the
exception: it solves the travelling-wave equation of the
unit-nonlinearity form directly.

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
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.special import ellipk

from .errors import ValidationError, ComplexRootsError, NoReturnError
from .waves import Grid1D, WaveField, sample_profile


logger = logging.getLogger(__name__)

__all__ = [
    'SolitonParam', 'TrainSpec', 'CnoidalParams', 'ReturnTime',
    'TrainPredictions', 'JacobiElliptic', 'MarketFrame', 'Figure',
    'soliton', 'forced_soliton', 'return_time', 'train_profile',
    'train_predictions', 'superpose_trains', 'merge_amplitude',
    'linear_wave', 'jacobi_elliptic', 'cnoidal', 'cnoidal_slope',
    'to_market_frame', 'from_market_frame', 'figure_specs', 'figure_peaks',
    ]


def sech2(theta):
    e = np.exp(-2. * np.abs(theta))
    return 4. * e / (1. + e)**2


# -- Parameter types

@dataclass(frozen=True)
class SolitonParam:
    """
    Single soliton with wavenumber ``kappa``, center ``x0`` and constant
    forcing ``C``. Amplitude :math:`2\\kappa^2`, unforced speed
    :math:`4\\kappa^2`.
    """

    kappa: float
    x0: float = 0.
    C: float = 0.

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValidationError('kappa must be positive, got %r' % self.kappa)
        if self.C < 0:
            raise ValidationError('forcing C must be non-negative, got %r' % self.C)

    @property
    def amplitude(self):
        return 2 * self.kappa**2

    @property
    def speed(self):
        return 4 * self.kappa**2


@dataclass(frozen=True)
class TrainSpec:
    """
    Soliton train of ``n`` members grown from the profile
    :math:`n(n+1)\\kappa^2 \\mathrm{sech}^2 \\kappa (x - x_0)`.

    Parameters
    ----------

    n : int
        Number of solitons.
    kappa : float
        Wavenumber of the smallest member.
    x0 : float, optional
        Common origin.
    C : float, optional
        Constant forcing.
    offset : float, optional
        Time offset when superposing several trains.
    amplitudes : tuple of float, optional
        Override of the member amplitudes :math:`2 m^2 \\kappa^2`, used for
        merged solitons.

    """

    n: int
    kappa: float
    x0: float = 0.
    C: float = 0.
    offset: float = 0.
    amplitudes: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError('train size n must be an integer >= 1, got %r' % self.n)
        if not self.kappa > 0:
            raise ValidationError('kappa must be positive, got %r' % self.kappa)
        if self.C < 0:
            raise ValidationError('forcing C must be non-negative, got %r' % self.C)
        if self.amplitudes is not None:
            amps = tuple(float(a) for a in self.amplitudes)
            if len(amps) != self.n or min(amps) <= 0:
                raise ValidationError('need %i positive amplitudes, got %r' % (self.n, amps))
            object.__setattr__(self, 'amplitudes', amps)

    @property
    def height(self):
        return self.n * (self.n + 1) * self.kappa**2

    def members(self):
        """Member solitons of the resolved train."""
        if self.amplitudes is None:
            kappas = [m * self.kappa for m in range(1, self.n + 1)]
        else:
            kappas = [np.sqrt(a / 2) for a in self.amplitudes]
        return [SolitonParam(k, self.x0, self.C) for k in kappas]


@dataclass(frozen=True)
class CnoidalParams:
    """
    Periodic travelling wave :math:`f` of speed ``v`` with

    .. math:: f'^2 = -f^3/3 + v f^2 + a f + b

    The roots :math:`f_1 \\le f_2 \\le f_3` of the cubic and the modulus
    :math:`m = (f_3 - f_2)/(f_3 - f_1)` are derived on construction.

    Raises
    ------

    ComplexRootsError
        When the cubic has a complex pair (negative discriminant).

    """

    v: float
    a: float
    b: float
    roots: Tuple[float, float, float] = field(init=False)
    m: float = field(init=False)

    def __post_init__(self):
        # monic form f^3 + B f^2 + C f + D
        B, C, D = -3 * self.v, -3 * self.a, -3 * self.b
        disc = 18 * B * C * D - 4 * B**3 * D + B**2 * C**2 - 4 * C**3 - 27 * D**2
        scale = max(abs(B), abs(C)**0.5, abs(D)**(1 / 3), 1.)**6
        if disc < -1e-12 * scale:
            raise ComplexRootsError(disc)

        f1, f2, f3 = np.sort(np.real(np.roots([1., B, C, D])))
        m = (f3 - f2) / (f3 - f1) if f3 > f1 else 0.
        object.__setattr__(self, 'roots', (float(f1), float(f2), float(f3)))
        object.__setattr__(self, 'm', float(min(max(m, 0.), 1.)))

    @classmethod
    def from_roots(cls, f1, f2, f3):
        f1, f2, f3 = sorted((f1, f2, f3))
        v = (f1 + f2 + f3) / 3
        a = -(f1 * f2 + f1 * f3 + f2 * f3) / 3
        b = f1 * f2 * f3 / 3
        return cls(v, a, b)

    @property
    def scale(self):
        """Argument scale :math:`\\Delta = \\sqrt{(f_3 - f_1)/12}`."""
        f1, _, f3 = self.roots
        return np.sqrt((f3 - f1) / 12)

    @property
    def wavelength(self):
        return 2 * ellipk(self.m) / self.scale


class ReturnTime(NamedTuple):
    t1: float
    t1_printed: float


class TrainPredictions(NamedTuple):
    amplitudes: np.ndarray
    speeds: np.ndarray
    arrival_ratios: np.ndarray


class JacobiElliptic(NamedTuple):
    sn: np.ndarray
    cn: np.ndarray
    dn: np.ndarray


class MarketFrame(NamedTuple):
    X: np.ndarray
    T: np.ndarray
    P: np.ndarray
    C: float


# -- Solitons

def soliton(p, x, t):
    """
    .. math:: u = 2\\kappa^2 \\mathrm{sech}^2(\\kappa (x - x_0) - 4 \\kappa^3 t)
    """
    if p.C != 0:
        raise ValidationError('soliton() is unforced, use forced_soliton() for C = %r' % p.C)
    k = p.kappa
    return 2 * k**2 * sech2(k * (np.asarray(x) - p.x0) - 4 * k**3 * t)


def forced_soliton(p, x, t):
    """
    Soliton on the uniformly draining background :math:`-Ct`,

    .. math::

        u = 2\\kappa^2 \\mathrm{sech}^2(\\kappa (x - x_0) - 4 \\kappa^3 t
            + 3 C \\kappa t^2) - C t

    obtained from the unforced soliton by a time dependent Galilean boost.
    Its peak moves as :math:`x_0 + 4\\kappa^2 t - 3 C t^2`.
    """
    k, C = p.kappa, p.C
    theta = k * (np.asarray(x) - p.x0) - 4 * k**3 * t + 3 * C * k * t**2
    return 2 * k**2 * sech2(theta) - C * t


def return_time(p):
    """
    First positive time at which the forced soliton peak is back at
    :math:`x_0`, :math:`T_1 = 4\\kappa^2 / (3C)`. The cubic
    law :math:`8\\kappa^3/C` is returned alongside as ``t1_printed`` for
    comparison.
    """
    if p.C <= 0:
        raise NoReturnError('an unforced soliton (C = 0) never returns to its origin')
    return ReturnTime(4 * p.kappa**2 / (3 * p.C), 8 * p.kappa**3 / p.C)


def train_profile(spec, x):
    return spec.height * sech2(spec.kappa * (np.asarray(x) - spec.x0))


def train_predictions(spec):
    m = np.arange(1, spec.n + 1)
    return TrainPredictions(
        amplitudes=2. * m**2 * spec.kappa**2,
        speeds=4. * m**2 * spec.kappa**2,
        arrival_ratios=(m**2).astype(float))


def _resolved_train(spec, x, t):
    tau = t - spec.offset
    u = sum(forced_soliton(p, x, tau) for p in spec.members())
    # members share one background
    return u + (spec.n - 1) * spec.C * tau


def superpose_trains(specs, grid, t):
    """
    Sum of resolved soliton trains, each evaluated at its own time
    ``t - spec.offset``.

    Parameters
    ----------

    specs : sequence of TrainSpec
    grid : Grid1D
    t : float

    Returns
    -------

    field : WaveField

    """

    specs = list(specs)
    if not specs:
        raise ValidationError('superpose_trains needs at least one train')
    return sample_profile(lambda x: sum(_resolved_train(s, x, t) for s in specs), grid, t)


def merge_amplitude(a1, a2):
    if a1 <= 0 or a2 <= 0:
        raise ValidationError('amplitudes must be positive, got %r, %r' % (a1, a2))
    return 0.5 * (a1 + a2)


def linear_wave(f, C2, x, t):
    """
    Linear wave :math:`W = f(x + t) - C_2 t`, solving
    :math:`W_t - W_x + C_2 = 0`.
    """
    return f(np.asarray(x) + t) - C2 * t


# -- Elliptic functions

def jacobi_elliptic(u, m, tol=1e-14, max_iter=32):
    """
    Jacobi elliptic functions sn, cn, dn by the arithmetic-geometric
    mean and descending Landen transformation.

    Parameters
    ----------

    u : array_like
        Argument.
    m : array_like
        Parameter :math:`m = k^2` in :math:`[0, 1]`.

    Returns
    -------

    sn, cn, dn : JacobiElliptic

    """

    u, m = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(m, dtype=float))
    if np.any((m < 0) | (m > 1)) or np.any(~np.isfinite(m)):
        raise ValidationError('parameter m must lie in [0, 1]')

    one = (m == 1)
    mm = np.where(one, 0., m)

    a, b, c = np.ones_like(mm), np.sqrt(1 - mm), np.sqrt(mm)
    a_n, c_n = [a], [c]
    while np.max(np.abs(c), initial=0.) > tol:
        if len(a_n) > max_iter:
            break
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        a_n.append(a)
        c_n.append(c)
    N = len(a_n) - 1
    logger.debug('jacobi_elliptic: %i Landen steps', N)

    phi = 2.**N * a_n[N] * u
    for n in range(N, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c_n[n] / a_n[n] * np.sin(phi)))

    sn, cn = np.sin(phi), np.cos(phi)
    dn = np.sqrt(1 - mm * sn**2)

    if np.any(one):
        sn = np.where(one, np.tanh(u), sn)
        cn = np.where(one, 1 / np.cosh(u), cn)
        dn = np.where(one, 1 / np.cosh(u), dn)

    return JacobiElliptic(sn, cn, dn)


def _cnoidal_profile(params, xi):
    f1, f2, f3 = params.roots
    _, cn, _ = jacobi_elliptic(params.scale * xi, params.m)
    return f2 + (f3 - f2) * cn**2


def cnoidal(params, C, x, t, boost=0.5):
    """
    Forced cnoidal wave

    .. math:: u = f(x - v t + \\beta C t^2) - C t, \\quad
        f(\\xi) = f_2 + (f_3 - f_2) \\mathrm{cn}^2(\\Delta \\xi \\mid m)

    solving :math:`u_t + u u_x + u_{xxx} + C = 0` for the boost
    coefficient :math:`\\beta = 1/2`.
    """
    xi = np.asarray(x) - params.v * t + boost * C * t**2
    return _cnoidal_profile(params, xi) - C * t


def cnoidal_slope(params, xi):
    """Analytic derivative :math:`f'(\\xi)` of the stationary profile."""
    f1, f2, f3 = params.roots
    d = params.scale
    sn, cn, dn = jacobi_elliptic(d * np.asarray(xi), params.m)
    return -2 * (f3 - f2) * d * sn * cn * dn


# -- Frame maps

def to_market_frame(x, t, u, delta, C=0.):
    """
    Map a solution of the normalised equation to
    :math:`P_T + P P_X + \\delta P_{XXX} + C_P = 0`:
    :math:`X = \\sqrt\\delta x`, :math:`T = \\sqrt\\delta t`,
    :math:`P = 6 u`, :math:`C_P = 6 C / \\sqrt\\delta`.
    """
    if not delta > 0:
        raise ValidationError('dispersion delta must be positive, got %r' % delta)
    s = np.sqrt(delta)
    return MarketFrame(s * np.asarray(x), s * np.asarray(t), 6 * np.asarray(u), 6 * C / s)


def from_market_frame(X, T, P, delta, C_P=0.):
    if not delta > 0:
        raise ValidationError('dispersion delta must be positive, got %r' % delta)
    s = np.sqrt(delta)
    return MarketFrame(np.asarray(X) / s, np.asarray(T) / s, np.asarray(P) / 6, C_P * s / 6)


# -- Synthetic chart figures

class Figure(NamedTuple):
    specs: tuple
    grid: Grid1D
    t: float


def figure_specs(fig):
    """
    Soliton trains regenerating the synthetic charts: two solitons
    (``fig=2``), three solitons (``3``), three solitons with the last two
    merged (``4``) and three two-soliton trains (``5``). Each figure is
    evaluated at a time where its members are separated.
    """

    if fig == 2:
        specs = (TrainSpec(2, 0.5, x0=10.),)
        return Figure(specs, Grid1D(80., 2048), 5.)
    if fig == 3:
        specs = (TrainSpec(3, 0.5, x0=10.),)
        return Figure(specs, Grid1D(80., 2048), 5.)
    if fig == 4:
        amps = (0.5, 2., merge_amplitude(4.5, 2.25))
        specs = (TrainSpec(3, 0.5, x0=10., amplitudes=amps),)
        return Figure(specs, Grid1D(80., 2048), 5.)
    if fig == 5:
        specs = tuple(
            TrainSpec(2, np.sqrt(a / 2), x0=x0)
            for a, x0 in zip([8., 8.82, 9.68], [10., 40., 70.]))
        return Figure(specs, Grid1D(120., 4096), 0.25)
    raise ValidationError('figure must be one of 2, 3, 4, 5, got %r' % fig)


def figure_peaks(fig):
    """Member amplitudes of each train of a figure, from the closed form."""
    return [tuple(p.amplitude for p in s.members()) for s in figure_specs(fig).specs]
