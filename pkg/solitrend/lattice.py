"""Periodic chain of non-harmonic oscillators and its continuum limit.

The chain follows

.. math::

    \\ddot S_i = k \\left[ \\Delta_i + \\alpha \\left( (S_{i+1} - S_i)^2
        - (S_i - S_{i-1})^2 \\right) + C_1 \\right],
    \\quad \\Delta_i = S_{i+1} - 2 S_i + S_{i-1}

whose quadratic term is :math:`(S_{i+1} - S_{i-1}) \\Delta_i \\approx 2 S' S''`,
the form that survives in the long wave limit. In the moving frame
:math:`X = i - \\sqrt{k} t`, :math:`T = \\alpha \\sqrt{k} t` the strain
:math:`P = S_X` obeys

.. math:: P_T + P P_X + \\delta P_{XXX} + C_P = 0, \\quad
    \\delta = 1 / (24 \\alpha), \\quad C_P = C_1 / (2 \\alpha)

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
from typing import NamedTuple, Tuple

import numpy as np
import scipy.fft

from .errors import ValidationError, BlowUpError, DegenerateScalingError, NumericalError
from .waves import Grid1D, WaveField, spectral_derivative
from .analytic import sech2, from_market_frame
from .kdv import SolverConfig, evolve


logger = logging.getLogger(__name__)

__all__ = [
    'ChainState', 'ChainConfig', 'ChainTrajectory', 'ContinuumComparison',
    'chain_accel', 'chain_energy', 'shadow_energy', 'integrate_chain',
    'mode_frequency', 'dispersion_frequency', 'chain_from_profile',
    'continuum_soliton_strain', 'continuum_compare', 'save_chain_trajectory',
    ]


@dataclass(frozen=True, eq=False)
class ChainState:
    """Displacements ``S`` and velocities ``V`` of the ring at time ``t``."""

    S: np.ndarray
    V: np.ndarray
    t: float = 0.

    def __post_init__(self):
        S, V = np.array(self.S, dtype=float), np.array(self.V, dtype=float)
        if S.ndim != 1 or S.shape != V.shape:
            raise ValidationError('S and V must be 1-d of equal length, got %s and %s' % (S.shape, V.shape))
        if not (np.all(np.isfinite(S)) and np.all(np.isfinite(V))):
            raise ValidationError('chain state must be finite')
        S.flags.writeable = False
        V.flags.writeable = False
        object.__setattr__(self, 'S', S)
        object.__setattr__(self, 'V', V)

    @classmethod
    def at_rest(cls, N):
        return cls(np.zeros(N), np.zeros(N))

    @property
    def N(self):
        return self.S.size


@dataclass(frozen=True)
class ChainConfig:
    """
    Parameters
    ----------

    k : float
        Stiffness (1/time^2).
    alpha : float
        Strength of the quadratic force.
    C1 : float
        Constant drive.
    h : float
        Site spacing, only used to report positions.
    dt : float
        Velocity Verlet step, at most :math:`0.1/\\sqrt{k}`.

    """

    k: float = 1.
    alpha: float = 0.
    C1: float = 0.
    h: float = 1.
    dt: float = 0.05

    def __post_init__(self):
        if not self.k > 0:
            raise ValidationError('stiffness k must be positive, got %r' % self.k)
        if not self.h > 0:
            raise ValidationError('spacing h must be positive, got %r' % self.h)
        if not self.dt > 0:
            raise ValidationError('dt must be positive, got %r' % self.dt)

    @property
    def max_dt(self):
        return 0.1 / math.sqrt(self.k)

    @property
    def epsilon(self):
        return 2 * self.alpha


class ChainTrajectory(NamedTuple):
    t: np.ndarray
    S: np.ndarray
    V: np.ndarray

    def state(self, i=-1):
        return ChainState(self.S[i], self.V[i], self.t[i])


class ContinuumComparison(NamedTuple):
    correlation: float
    route: str
    tau: float
    T: float
    chain_strain: np.ndarray
    model_strain: np.ndarray
    notes: Tuple[str, ...]


# -- Dynamics

def _accel(S, cfg):
    r = np.roll(S, -1) - S
    rm = np.roll(r, 1)
    a = r - rm
    if cfg.alpha != 0:
        a = a + cfg.alpha * (r * r - rm * rm)
    return cfg.k * (a + cfg.C1)


def chain_accel(state, cfg):
    return _accel(state.S, cfg)


def chain_energy(state, cfg):
    """
    .. math:: H = \\sum_i \\frac{V_i^2}{2} + k \\sum_i \\left(\\frac{r_i^2}{2}
        + \\frac{\\alpha r_i^3}{3}\\right) - k C_1 \\sum_i S_i,
        \\quad r_i = S_{i+1} - S_i
    """
    r = np.roll(state.S, -1) - state.S
    potential = cfg.k * np.sum(0.5 * r**2 + cfg.alpha * r**3 / 3)
    return float(0.5 * np.sum(state.V**2) + potential - cfg.k * cfg.C1 * np.sum(state.S))


def shadow_energy(state, cfg):
    """
    Modified energy :math:`\\frac12 V^T V + \\frac12 S^T K (1 - dt^2 K/4) S`
    of the harmonic chain, conserved exactly by velocity Verlet.
    """
    if cfg.alpha != 0 or cfg.C1 != 0:
        raise ValidationError('shadow_energy is defined for the harmonic chain (alpha = C1 = 0)')
    KS = -_accel(state.S, cfg)
    KKS = -_accel(KS, cfg)
    return float(0.5 * state.V @ state.V + 0.5 * state.S @ (KS - 0.25 * cfg.dt**2 * KKS))


def integrate_chain(state, cfg, T, every=1):
    """
    Velocity Verlet integration of the ring.

    Parameters
    ----------

    state : ChainState
    cfg : ChainConfig
    T : float
        Duration.
    every : int, optional
        Sampling interval in steps.

    Returns
    -------

    trajectory : ChainTrajectory
        Including the initial and the final state.

    """

    if cfg.dt > cfg.max_dt:
        raise ValidationError(
            'dt = %g exceeds the chain stability bound 0.1/sqrt(k) = %g' % (cfg.dt, cfg.max_dt))
    if T < 0:
        raise ValidationError('T must be non-negative, got %r' % T)

    nsteps = int(round(T / cfg.dt))
    dt = cfg.dt
    S, V = np.array(state.S), np.array(state.V)
    a = _accel(S, cfg)

    ts, Ss, Vs = [state.t], [S.copy()], [V.copy()]
    for step in range(1, nsteps + 1):
        V += 0.5 * dt * a
        S += dt * V
        a = _accel(S, cfg)
        V += 0.5 * dt * a

        if step % every == 0 or step == nsteps:
            size = max(np.max(np.abs(S)), np.max(np.abs(V)))
            if not np.isfinite(size) or size > 1e6:
                raise BlowUpError(step, state.t + step * dt, size)
            ts.append(state.t + step * dt)
            Ss.append(S.copy())
            Vs.append(V.copy())

    return ChainTrajectory(np.array(ts), np.array(Ss), np.array(Vs))


def save_chain_trajectory(filename, traj, decimate=1):
    """CSV with ``t`` followed by one column per site, every ``decimate`` samples."""
    data = np.column_stack((traj.t, traj.S))[::decimate]
    header = ','.join(['t'] + ['S%i' % i for i in range(traj.S.shape[1])])
    np.savetxt(filename, data, delimiter=',', header=header)


# -- Normal modes

def dispersion_frequency(k, N, mode):
    return 2 * math.sqrt(k) * abs(math.sin(math.pi * mode / N))


def mode_frequency(traj, mode):
    """
    Angular frequency of a standing normal mode, from the zero crossings
    of its Fourier amplitude.
    """

    c = scipy.fft.rfft(traj.S, axis=1)[:, mode]
    ref = c[np.argmax(np.abs(c))]
    s = np.real(c * np.conj(ref)) / abs(ref)

    idx = np.flatnonzero(np.sign(s[:-1]) * np.sign(s[1:]) < 0)
    if len(idx) < 2:
        raise NumericalError('mode %i: need two zero crossings, found %i' % (mode, len(idx)))
    t = traj.t
    zeros = t[idx] - s[idx] * (t[idx + 1] - t[idx]) / (s[idx + 1] - s[idx])
    half_period = (zeros[-1] - zeros[0]) / (len(zeros) - 1)
    return math.pi / half_period


# -- Continuum limit

def _fourier_shift(u, shift):
    """Periodic shift of samples by a real number of sites."""
    n = u.size
    m = np.arange(n // 2 + 1)
    phase = np.exp(-2j * np.pi * m * shift / n)
    if n % 2 == 0:
        phase[-1] = np.cos(np.pi * shift)
    return scipy.fft.irfft(scipy.fft.rfft(u) * phase, n=n)


def _antiderivative(p):
    n = p.size
    ik = 2j * np.pi * scipy.fft.rfftfreq(n)
    ph = scipy.fft.rfft(p)
    sh = np.zeros_like(ph)
    sh[1:] = ph[1:] / ik[1:]
    if n % 2 == 0:
        sh[-1] = 0.
    return scipy.fft.irfft(sh, n=n)


def chain_from_profile(P0, cfg):
    """
    Ring state carrying the strain profile ``P0`` (per site) as a purely
    right moving wave. The mean strain is removed so that the
    displacements are periodic.
    """
    p = np.asarray(P0, dtype=float)
    p = p - p.mean()
    return ChainState(_antiderivative(p), -math.sqrt(cfg.k) * p)


def continuum_soliton_strain(cfg, N, kappa, center=None):
    """
    Strain soliton of the continuum equation,
    :math:`P = (\\kappa^2/\\varepsilon) \\, \\mathrm{sech}^2 \\kappa (i - i_0)`
    with :math:`\\varepsilon = 2\\alpha`.
    """
    if cfg.alpha == 0:
        raise DegenerateScalingError('the continuum soliton needs alpha != 0')
    center = 0.5 * N if center is None else center
    y = np.arange(N)
    return kappa**2 / cfg.epsilon * sech2(kappa * (y - center))


def _spectral_tail(p):
    e = np.abs(scipy.fft.rfft(p))**2
    return float(np.sum(e[e.size // 2:]) / max(np.sum(e), 1e-300))


def continuum_compare(traj, cfg, route='auto', kdv_dt=0.01):
    """
    Compare the chain strain with its continuum prediction.

    The strain :math:`P = \\partial S / \\partial i` of the first and the last
    sample of ``traj`` is taken by spectral differentiation. The first is
    evolved to the final time with the KdV solver (``route='kdv'``)
    or translated as a linear wave (``route='linear'``, automatic for
    :math:`\\alpha = 0`), shifted back from the moving frame, and compared
    with the last by Pearson correlation.

    The drive :math:`C_1` accelerates every mass equally and leaves the
    strain unchanged, so the matched KdV run is unforced.

    Parameters
    ----------

    traj : ChainTrajectory
    cfg : ChainConfig
    route : {'auto', 'kdv', 'linear'}
    kdv_dt : float
        Time step of the matched KdV run in normalised units.

    Returns
    -------

    comparison : ContinuumComparison

    Raises
    ------

    DegenerateScalingError
        For ``route='kdv'`` with :math:`\\alpha = 0`, where the slow time
        :math:`T = \\alpha \\sqrt{k} t` collapses.

    """

    if route == 'auto':
        route = 'linear' if cfg.alpha == 0 else 'kdv'
    if route not in ('kdv', 'linear'):
        raise ValidationError("route must be 'auto', 'kdv' or 'linear', got %r" % route)
    if route == 'kdv' and cfg.alpha == 0:
        raise DegenerateScalingError(
            'continuum scaling T = (epsilon/2) tau is degenerate for alpha = 0; '
            "use route='linear'")

    N = traj.S.shape[1]
    p0 = spectral_derivative(traj.S[0], N)
    p1 = spectral_derivative(traj.S[-1], N)
    tau = math.sqrt(cfg.k) * (traj.t[-1] - traj.t[0])

    notes = []
    for label, p in [('initial', p0), ('final', p1)]:
        tail = _spectral_tail(p)
        if tail > 0.01:
            note = '%s chain strain is not smooth: %.1f%% of its energy in the upper half spectrum' % (label, 100 * tail)
            logger.warning(note)
            notes.append(note)

    if route == 'linear':
        T = 0.
        model = p0
    else:
        eps = cfg.epsilon
        T = 0.5 * eps * tau
        delta = 1. / (12 * eps)
        frame = from_market_frame(N, T, p0, delta)
        grid = Grid1D(float(frame.X), N)
        kdv_cfg = SolverConfig('pseudospectral-rk4', dt=kdv_dt, delta=delta)
        w = evolve(WaveField(grid, frame.P), kdv_cfg, float(frame.T))
        model = 6 * w.samples
        logger.info('continuum run: epsilon = %g, delta = %g, T = %g (normalised t = %g)',
                    eps, delta, T, float(frame.T))

    model = _fourier_shift(model, tau)
    correlation = float(np.corrcoef(p1, model)[0, 1])
    logger.info('continuum comparison (%s): correlation %.5f at tau = %g', route, correlation, tau)

    return ContinuumComparison(correlation, route, tau, T, p1, model, tuple(notes))
