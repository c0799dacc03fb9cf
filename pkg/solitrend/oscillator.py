"""Participant entropy and the two-state probability oscillators.

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
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import entr

from .errors import ValidationError, UndefinedEntropyError, StateExitError, NumericalError


logger = logging.getLogger(__name__)

__all__ = [
    'MarketCounts', 'ProbState2', 'ReferenceState', 'OscParams',
    'ParticipantProbabilities', 'EntropySplit', 'TaylorEntropy', 'Trajectory',
    'participant_probabilities', 'entropy_split', 'shannon_entropy',
    'entropy_taylor', 'd_star', 'd_double_star', 'osc_params',
    'integrate_harmonic', 'integrate_nonharmonic', 'oscillation_period',
    'fit_nonharmonic', 'save_trajectory',
    ]


# -- Value types

@dataclass(frozen=True)
class MarketCounts:
    """Number of bulls (N+) and bears (N-) in the market."""

    bulls: int
    bears: int

    def __post_init__(self):
        for name in ['bulls', 'bears']:
            n = getattr(self, name)
            if int(n) != n or n < 0:
                raise ValidationError('%s must be a non-negative integer, got %r' % (name, n))
        if self.bulls + self.bears < 1:
            raise ValidationError('market needs at least one participant')

    @property
    def total(self):
        return self.bulls + self.bears


def _check_open_unit(name, value):
    if not (0. < value < 1.):
        raise ValidationError('%s must lie in (0, 1), got %r' % (name, value))


@dataclass(frozen=True)
class ProbState2:
    p1: float
    p2: float

    def __post_init__(self):
        _check_open_unit('p1', self.p1)
        _check_open_unit('p2', self.p2)


@dataclass(frozen=True)
class ReferenceState:
    """
    Reference probabilities :math:`p_{10}, p_{20}` and coupling rate
    :math:`\\gamma` of the two-state oscillators.
    """

    p10: float
    p20: float
    gamma: float

    def __post_init__(self):
        _check_open_unit('p10', self.p10)
        _check_open_unit('p20', self.p20)
        if self.gamma == 0 or not np.isfinite(self.gamma):
            raise ValidationError('gamma must be finite and non-zero, got %r' % self.gamma)


@dataclass(frozen=True)
class OscParams:
    """
    Oscillator constants. ``k`` is the stiffness of the second order
    equation :math:`p_2''/k = -p_2 + \\alpha p_2^2 + C_1` as obtained by
    differentiating the first order system, ``k_printed`` the shortcut
    :math:`2\\gamma/p_{20}`, which is not dimensionally consistent
    with ``chi``.
    """

    chi: float
    k: float
    alpha: float
    C1: float
    C2: float
    k_printed: float


class ParticipantProbabilities(NamedTuple):
    p_plus: float
    p_minus: float
    p: float
    M: int
    K: int


class EntropySplit(NamedTuple):
    T: float
    R: float


class TaylorEntropy(NamedTuple):
    approx_H: float
    d_star: float


class Trajectory(NamedTuple):
    """Sampled oscillator orbit with the conserved quantity along it."""
    t: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    invariant: np.ndarray
    invariant_name: str


# -- Entropy bookkeeping

def participant_probabilities(counts):
    N = counts.total
    M = counts.bulls - counts.bears
    K = N - M
    return ParticipantProbabilities(
        p_plus=counts.bulls / N, p_minus=counts.bears / N, p=K / N, M=M, K=K)


def _in_base(value, base):
    return value if base is None else value / np.log(base)


def entropy_split(p_plus, p_minus, p, base=None):
    """
    Informative and redundant entropy of the participant distribution,

    .. math:: T = -(p^+ - p^-) \\ln(p^+ - p^-), \\quad R = -p \\ln p

    Raises
    ------

    UndefinedEntropyError
        If :math:`p^+ \\le p^-`.

    """

    dp = p_plus - p_minus
    if dp <= 0:
        raise UndefinedEntropyError(
            'informative entropy needs p_plus > p_minus, got %r <= %r' % (p_plus, p_minus))
    if not (0. < p <= 1.):
        raise ValidationError('p must lie in (0, 1], got %r' % p)
    return EntropySplit(float(_in_base(entr(dp), base)), float(_in_base(entr(p), base)))


def shannon_entropy(p, base=None):
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValidationError('probabilities must be non-negative, got %s' % p)
    return float(_in_base(np.sum(entr(p)), base))


def entropy_taylor(p, p0):
    """
    Second order Taylor expansion of the Shannon entropy around the
    reference state ``p0``,

    .. math:: H(p) \\approx H(p_0) - \\sum_i (1 + \\ln p_{i0})(p_i - p_{i0}) - D^*

    with :math:`D^* = \\sum_i (p_i - p_{i0})^2 / (2 p_{i0}) \\ge 0`.
    """

    p, p0 = np.asarray(p, dtype=float), np.asarray(p0, dtype=float)
    if p.shape != p0.shape:
        raise ValidationError('p and p0 differ in length: %i != %i' % (p.size, p0.size))
    if np.any(p0 <= 0):
        raise ValidationError('reference components must be positive, got %s' % p0)

    dp = p - p0
    ds = float(np.sum(dp**2 / (2 * p0)))
    approx = shannon_entropy(p0) - np.sum((1 + np.log(p0)) * dp) - ds
    return TaylorEntropy(float(approx), ds)


def d_star(p, ref):
    return (p.p1 - ref.p10)**2 / (2 * ref.p10) + (p.p2 - ref.p20)**2 / (2 * ref.p20)


def d_double_star(p, ref):
    q = p.p2 - ref.p20
    return (p.p1 - ref.p10)**2 / (2 * ref.p10) + q**2 / (2 * ref.p20) \
        - q**3 / (6 * ref.p20**2)


def osc_params(ref):

    p10, p20, gamma = ref.p10, ref.p20, ref.gamma
    chi = gamma**2 / (p10 * p20)
    params = OscParams(
        chi=chi, k=2 * chi, alpha=1. / (4 * p20), C1=0.75 * p20, C2=p20,
        k_printed=2 * gamma / p20)

    logger.debug('oscillator stiffness k = %g (printed formula gives %g)',
                 params.k, params.k_printed)
    return params


# -- Integrators

def _rk4(rhs, y, dt, nsteps, check):
    """Classical fourth order Runge-Kutta with fixed step on a float pair."""

    t = np.arange(nsteps + 1) * dt
    out = np.empty((nsteps + 1, 2))
    out[0] = y
    y1, y2 = y
    h = 0.5 * dt
    for n in range(nsteps):
        a1, a2 = rhs(y1, y2)
        b1, b2 = rhs(y1 + h * a1, y2 + h * a2)
        c1, c2 = rhs(y1 + h * b1, y2 + h * b2)
        d1, d2 = rhs(y1 + dt * c1, y2 + dt * c2)
        y1 += dt / 6 * (a1 + 2 * b1 + 2 * c1 + d1)
        y2 += dt / 6 * (a2 + 2 * b2 + 2 * c2 + d2)
        check(y1, y2, t[n + 1])
        out[n + 1] = y1, y2
    return t, out


def _nsteps(dt, T):
    if dt <= 0 or T <= 0:
        raise ValidationError('dt and T must be positive, got dt=%r, T=%r' % (dt, T))
    return int(round(T / dt))


def _check_unit(p1, p2, t):
    if not (0. < p1 < 1. and 0. < p2 < 1.):
        raise StateExitError(
            'state (p1, p2) = (%.6g, %.6g) left (0, 1) at t = %.6g; '
            'reduce the initial amplitude' % (p1, p2, t))


def integrate_harmonic(ref, init, dt, T):
    """
    Integrate the harmonic system

    .. math::

        \\dot p_1 = \\frac{\\gamma}{p_{20}} (p_2 - p_{20}), \\quad
        \\dot p_2 = -\\frac{\\gamma}{p_{10}} (p_1 - p_{10})

    which conserves :math:`D^*` and oscillates with angular frequency
    :math:`\\sqrt{\\chi}`.

    Parameters
    ----------

    ref : ReferenceState
    init : ProbState2
    dt : float
        Fixed time step, also the sampling interval.
    T : float
        Final time.

    Returns
    -------

    trajectory : Trajectory
        With ``invariant`` holding :math:`D^*`.

    """

    p10, p20, gamma = ref.p10, ref.p20, ref.gamma
    g1, g2 = gamma / p20, gamma / p10

    def rhs(p1, p2):
        return g1 * (p2 - p20), -g2 * (p1 - p10)

    t, y = _rk4(rhs, (init.p1, init.p2), dt, _nsteps(dt, T), _check_unit)
    invariant = (y[:, 0] - p10)**2 / (2 * p10) + (y[:, 1] - p20)**2 / (2 * p20)
    return Trajectory(t, y[:, 0], y[:, 1], invariant, 'd_star')


def integrate_nonharmonic(ref, init, dt, T):
    """
    Integrate the non-harmonic system

    .. math::

        \\dot p_1 = -\\gamma \\left[ \\frac{q}{p_{20}} - \\frac{q^2}{2 p_{20}^2} \\right], \\quad
        \\dot p_2 = \\frac{\\gamma}{p_{10}} (p_1 - p_{10}), \\quad q = p_2 - p_{20}

    which conserves :math:`D^{**}`. The orbit is confined by the cubic
    well as long as :math:`q < 2 p_{20}`.
    """

    p10, p20, gamma = ref.p10, ref.p20, ref.gamma
    g2 = gamma / p10

    def rhs(p1, p2):
        q = p2 - p20
        return -gamma * (q / p20 - q * q / (2 * p20**2)), g2 * (p1 - p10)

    def check(p1, p2, t):
        if p2 - p20 >= 2 * p20:
            raise StateExitError(
                'orbit escaped the cubic well at t = %.6g (p2 = %.6g); '
                'reduce the initial amplitude' % (t, p2))
        _check_unit(p1, p2, t)

    t, y = _rk4(rhs, (init.p1, init.p2), dt, _nsteps(dt, T), check)
    q = y[:, 1] - p20
    invariant = (y[:, 0] - p10)**2 / (2 * p10) + q**2 / (2 * p20) - q**3 / (6 * p20**2)
    return Trajectory(t, y[:, 0], y[:, 1], invariant, 'd_double_star')


# -- Trajectory analysis

def oscillation_period(traj, ref):
    """Mean spacing of the upward zero crossings of :math:`p_1 - p_{10}`."""

    s = traj.p1 - ref.p10
    idx = np.flatnonzero((s[:-1] < 0) & (s[1:] >= 0))
    if len(idx) < 2:
        raise NumericalError('need two upward crossings to measure a period, found %i' % len(idx))
    t = traj.t
    crossings = t[idx] - s[idx] * (t[idx + 1] - t[idx]) / (s[idx + 1] - s[idx])
    return float(np.mean(np.diff(crossings)))


def fit_nonharmonic(traj, ref):
    """
    Regress the finite difference :math:`p_2''` against
    :math:`\\{1, p_2, p_2^2\\}` and return the measured ``(k, alpha, C1)``.

    The regression is done in the centered variable :math:`q = p_2 - p_{20}`
    and mapped back, which keeps the normal equations well conditioned
    for small amplitudes.
    """

    dt = traj.t[1] - traj.t[0]
    p2 = traj.p2
    acc = (p2[2:] - 2 * p2[1:-1] + p2[:-2]) / dt**2
    q = p2[1:-1] - ref.p20

    A = np.column_stack((np.ones_like(q), q, q**2))
    (a0, a1, a2), *_ = np.linalg.lstsq(A, acc, rcond=None)

    p20 = ref.p20
    c0 = a0 - a1 * p20 + a2 * p20**2
    c1 = a1 - 2 * a2 * p20
    c2 = a2
    k = -c1
    return float(k), float(c2 / k), float(c0 / k)


def save_trajectory(filename, traj):
    data = np.column_stack((traj.t, traj.p1, traj.p2, traj.invariant))
    np.savetxt(filename, data, delimiter=',', header='t,p1,p2,' + traj.invariant_name)
