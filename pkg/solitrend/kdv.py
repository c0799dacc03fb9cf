"""Time integration of the forced Korteweg-de Vries equation

.. math:: u_t + 6 u u_x + u_{xxx} + C = 0

on a periodic grid, with conserved quantity monitoring and soliton
fission diagnostics.

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
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np
import scipy.fft
import scipy.signal

from .errors import ValidationError, BlowUpError, FissionError, NoReturnError
from .waves import Grid1D, WaveField, sample_profile, find_peaks, field_norms, spectral_derivative
from .analytic import SolitonParam, soliton


logger = logging.getLogger(__name__)

__all__ = [
    'SolverConfig', 'KdVSolver', 'Invariants', 'SolitonMeasurement',
    'zk_max_dt', 'evolve', 'invariants', 'invariant_log', 'save_invariant_log',
    'fission', 'forced_return', 'soliton_error', 'zk_richardson',
    ]

SCHEMES = {
    'zk': 'zabusky-kruskal',
    'zabusky-kruskal': 'zabusky-kruskal',
    'spectral': 'pseudospectral-rk4',
    'pseudospectral-rk4': 'pseudospectral-rk4',
    }

BLOW_UP = 1e6


@dataclass(frozen=True)
class SolverConfig:
    """
    Integration settings.

    Parameters
    ----------

    scheme : str
        ``'zabusky-kruskal'`` (alias ``'zk'``) or ``'pseudospectral-rk4'``
        (alias ``'spectral'``).
    dt : float
        Time step. Shortened so that the run ends exactly at the
        requested time.
    C : float
        Constant forcing, non-negative.
    delta : float, optional
        When given, ``C`` is the forcing :math:`C_P` of
        :math:`P_T + P P_X + \\delta P_{XXX} + C_P = 0` and is mapped to
        the normalised equation as :math:`C_P \\sqrt\\delta / 6`.
    max_steps : int
        Step budget of a single run.

    """

    scheme: str = 'pseudospectral-rk4'
    dt: float = 1e-3
    C: float = 0.
    delta: Optional[float] = None
    max_steps: int = 10_000_000

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValidationError(
                'unknown scheme %r, use one of %s' % (self.scheme, ', '.join(sorted(SCHEMES))))
        object.__setattr__(self, 'scheme', SCHEMES[self.scheme])
        if not self.dt > 0:
            raise ValidationError('dt must be positive, got %r' % self.dt)
        if self.C < 0:
            raise ValidationError('forcing C must be non-negative, got %r' % self.C)
        if self.delta is not None and not self.delta > 0:
            raise ValidationError('dispersion delta must be positive, got %r' % self.delta)
        if self.max_steps < 1:
            raise ValidationError('max_steps must be positive, got %r' % self.max_steps)

    @property
    def forcing(self):
        """Forcing of the normalised equation."""
        if self.delta is None:
            return self.C
        return self.C * math.sqrt(self.delta) / 6


class Invariants(NamedTuple):
    I1: float
    I2: float
    I3: float


class SolitonMeasurement(NamedTuple):
    amplitude: float
    speed: float
    position: float


def zk_max_dt(dx, umax):
    """Zabusky-Kruskal stability bound :math:`dx^3 / (4 + 6 dx^2 \\max|u|)`."""
    return dx**3 / (4 + 6 * dx**2 * umax)


class KdVSolver(object):

    """
    Forced KdV integrator for a fixed grid and configuration.

    Wavenumbers, integrating factors and the dealiasing mask are set up
    once on construction and reused by every call to :meth:`evolve`.

    Parameters
    ----------

    grid : Grid1D
    cfg : SolverConfig

    """

    def __init__(self, grid, cfg):

        self.grid = grid
        self.cfg = cfg
        self.C = cfg.forcing

        n = grid.nx
        self.k = 2 * np.pi * scipy.fft.rfftfreq(n, d=grid.dx)
        self.ik = 1j * self.k
        if n % 2 == 0:
            self.ik[-1] = 0.

        self.mask = np.abs(np.arange(self.k.size)) < n / 3

    # -- Right hand sides

    def zk_rhs(self, u):
        """Three point averaged nonlinearity and centered dispersion."""

        dx = self.grid.dx
        up1, um1 = np.roll(u, -1), np.roll(u, 1)
        up2, um2 = np.roll(u, -2), np.roll(u, 2)
        nonlin = (up1 + u + um1) * (up1 - um1) / dx
        disp = (up2 - 2 * up1 + 2 * um1 - um2) / (2 * dx**3)
        return -nonlin - disp - self.C

    def spectral_rhs(self, uh):
        """Dealiased :math:`-3 (u^2)_x - C` in Fourier space."""

        u = scipy.fft.irfft(uh, n=self.grid.nx)
        nh = -3 * self.ik * scipy.fft.rfft(u * u) * self.mask
        nh[0] -= self.C * self.grid.nx
        return nh

    # -- Time stepping

    def steps(self, T):
        nsteps = max(1, math.ceil(T / self.cfg.dt - 1e-9))
        if nsteps > self.cfg.max_steps:
            raise ValidationError(
                'T = %g needs %i steps, more than max_steps = %i'
                % (T, nsteps, self.cfg.max_steps))
        return nsteps, T / nsteps

    def check_stability(self, umax, dt, t=None):
        if self.cfg.scheme != 'zabusky-kruskal':
            return
        bound = zk_max_dt(self.grid.dx, umax)
        if dt > bound:
            at = '' if t is None else ' at t = %.4g' % t
            raise ValidationError(
                'dt = %.3e violates the Zabusky-Kruskal bound %.3e%s '
                '(dx = %.3e, max|u| = %.3g)' % (dt, bound, at, self.grid.dx, umax))

    def evolve(self, field, T, callback=None, every=1):
        """
        Advance ``field`` by ``T``.

        Parameters
        ----------

        field : WaveField
        T : float
            Duration, non-negative.
        callback : callable, optional
            Called as ``callback(step, field)`` every ``every`` steps and
            after the last one.
        every : int, optional

        Returns
        -------

        field : WaveField
            The state at ``field.t + T``.

        Raises
        ------

        BlowUpError
            When max|u| exceeds 1e6 or turns non-finite.
        ValidationError
            When a Zabusky-Kruskal run outgrows its stability bound, checked
            against the current max|u| after every step.

        """

        if T < 0:
            raise ValidationError('T must be non-negative, got %r' % T)
        if field.grid != self.grid:
            raise ValidationError('field grid %s does not match solver grid %s' % (field.grid, self.grid))
        if T == 0:
            return field

        nsteps, dt = self.steps(T)
        self.check_stability(field_norms(field).linf, dt)
        logger.debug('%s: %i steps of dt = %.4e on nx = %i',
                     self.cfg.scheme, nsteps, dt, self.grid.nx)

        if self.cfg.scheme == 'zabusky-kruskal':
            stepper = self._zk_steps(field.samples, dt, nsteps)
        else:
            stepper = self._spectral_steps(field.samples, dt, nsteps)

        t0 = field.t
        zk = self.cfg.scheme == 'zabusky-kruskal'
        for step, u in stepper:
            linf = np.max(np.abs(u))
            if not np.isfinite(linf) or linf > BLOW_UP:
                raise BlowUpError(step, t0 + step * dt, linf)
            if zk:
                self.check_stability(linf, dt, t0 + step * dt)
            if callback is not None and (step % every == 0 or step == nsteps):
                callback(step, WaveField(self.grid, u, t0 + step * dt))

        return WaveField(self.grid, u, t0 + T)

    def _zk_steps(self, u0, dt, nsteps):

        rhs = self.zk_rhs
        prev = np.array(u0, dtype=float)
        # midpoint start
        curr = prev + dt * rhs(prev + 0.5 * dt * rhs(prev))
        yield 1, curr

        for step in range(2, nsteps + 1):
            prev, curr = curr, prev + 2 * dt * rhs(curr)
            yield step, curr

    def _spectral_steps(self, u0, dt, nsteps):

        n = self.grid.nx
        E = np.exp(1j * self.k**3 * dt)
        E2 = np.exp(1j * self.k**3 * dt / 2)
        N = self.spectral_rhs

        uh = scipy.fft.rfft(u0) * self.mask
        for step in range(1, nsteps + 1):
            a = N(uh)
            b = N(E2 * (uh + 0.5 * dt * a))
            c = N(E2 * uh + 0.5 * dt * b)
            d = N(E * uh + dt * E2 * c)
            uh = E * uh + dt / 6 * (E * a + 2 * E2 * (b + c) + d)
            yield step, scipy.fft.irfft(uh, n=n)


def evolve(field, cfg, T, callback=None, every=1):
    return KdVSolver(field.grid, cfg).evolve(field, T, callback=callback, every=every)


def invariants(field):
    """
    Discrete conserved quantities

    .. math::

        I_1 = \\int u \\, dx, \\quad I_2 = \\int u^2 \\, dx, \\quad
        I_3 = \\int (2 u^3 - u_x^2) \\, dx

    with the periodic trapezoidal rule and a spectral :math:`u_x`.
    """

    u, dx = field.samples, field.grid.dx
    ux = spectral_derivative(u, field.grid.length)
    return Invariants(
        float(np.sum(u) * dx), float(np.sum(u**2) * dx),
        float(np.sum(2 * u**3 - ux**2) * dx))


def invariant_log(field, cfg, T, every=100, callback=None, callback_every=1):
    """
    Evolve and record ``(t, I1, I2, I3)`` every ``every`` steps.

    ``callback(step, field)``, when given, is called every
    ``callback_every`` steps of the same run and after the last one.

    Returns
    -------

    final : WaveField
    log : ndarray, shape (n, 4)

    """

    if every < 1 or callback_every < 1:
        raise ValidationError('sampling intervals must be >= 1, got %r and %r'
                              % (every, callback_every))

    solver = KdVSolver(field.grid, cfg)
    nsteps = solver.steps(T)[0] if T > 0 else 0
    rows = [(field.t, *invariants(field))]

    def observe(step, f):
        last = step == nsteps
        if step % every == 0 or last:
            rows.append((f.t, *invariants(f)))
        if callback is not None and (step % callback_every == 0 or last):
            callback(step, f)

    cadence = every if callback is None else math.gcd(every, callback_every)
    final = solver.evolve(field, T, callback=observe, every=cadence)
    log = np.array(rows)

    drift = np.abs(log[-1, 1:] - log[0, 1:]) / np.maximum(np.abs(log[0, 1:]), 1e-300)
    logger.info('invariant drift over T = %g: I1 %.2e, I2 %.2e, I3 %.2e (relative)', T, *drift)
    return final, log


def save_invariant_log(filename, log):
    np.savetxt(filename, log, delimiter=',', header='t,I1,I2,I3')


# -- Diagnostics

def fission(field, cfg, T, expected_n, gap=0.5, min_height=None):
    """
    Evolve a train profile and measure the emitted solitons.

    Peaks are located at ``T - gap`` and ``T``, paired by height and
    their speeds taken from the displacement, unwrapped across the
    periodic seam.

    Parameters
    ----------

    field : WaveField
        Initial profile.
    cfg : SolverConfig
    T : float
        Final time.
    expected_n : int
        Number of solitons to measure.
    gap : float, optional
        Time between the two measurements.
    min_height : float, optional
        Peak threshold, default 5% of the final max|u|.

    Returns
    -------

    solitons : list of SolitonMeasurement
        The ``expected_n`` largest, by descending amplitude. Amplitudes are
        measured above the drained background :math:`-C t`.

    Raises
    ------

    FissionError
        If fewer than ``expected_n`` peaks are found.

    """

    if not 0 < gap < T:
        raise ValidationError('need 0 < gap < T, got gap = %r, T = %r' % (gap, T))

    solver = KdVSolver(field.grid, cfg)
    early = solver.evolve(field, T - gap)
    late = solver.evolve(early, gap)

    snapshots = []
    for f in [early, late]:
        background = -solver.C * (f.t - field.t)
        shifted = f.replace(f.samples - background)
        threshold = min_height if min_height is not None else 0.05 * field_norms(shifted).linf
        peaks = find_peaks(shifted, threshold)
        if len(peaks) < expected_n:
            raise FissionError(len(peaks), expected_n)
        snapshots.append(peaks[:expected_n])

    L = field.grid.length
    solitons = []
    for p0, p1 in zip(*snapshots):
        dist = (p1.position - p0.position + 0.5 * L) % L - 0.5 * L
        solitons.append(SolitonMeasurement(p1.height, dist / gap, p1.position))

    logger.info('fission into %i solitons: amplitudes %s', expected_n,
                ', '.join('%.4g' % s.amplitude for s in solitons))
    return solitons


def forced_return(kappa, cfg, grid=None, sample_every=0.01, t_max=None):
    """
    Measure the return time of a forced soliton.

    A soliton of wavenumber ``kappa`` starts at a quarter of the domain;
    its peak is tracked every ``sample_every`` and the first time it
    crosses back over the start position is returned.

    Parameters
    ----------

    kappa : float
    cfg : SolverConfig
        With positive forcing.
    grid : Grid1D, optional
        Default ``Grid1D(40, 512)``.
    sample_every : float, optional
    t_max : float, optional
        Search horizon, default ``cfg.max_steps * cfg.dt``.

    Returns
    -------

    t1 : float

    """

    if cfg.forcing <= 0:
        raise ValidationError('forced_return needs C > 0')
    grid = grid or Grid1D(40., 512)
    t_max = t_max if t_max is not None else cfg.max_steps * cfg.dt

    x0 = 0.25 * grid.length
    field = sample_profile(lambda x: soliton(SolitonParam(kappa, x0), x, 0.), grid)
    solver = KdVSolver(grid, cfg)
    L = grid.length

    t, position, travelled = 0., x0, 0.
    while t < t_max:
        field = solver.evolve(field, sample_every)
        peak = find_peaks(field.replace(field.samples - field.samples.min()), None)[0]
        step = (peak.position - position + 0.5 * L) % L - 0.5 * L
        new = travelled + step
        if travelled > 0 and new <= 0:
            t1 = t + sample_every * travelled / (travelled - new)
            logger.info('forced soliton kappa = %g returned at t = %.5g', kappa, t1)
            return t1
        t, position, travelled = field.t, peak.position, new

    raise NoReturnError('no return of the kappa = %g soliton before t = %g' % (kappa, t_max))


def soliton_error(nx, cfg, kappa=1., length=40., T=0.25):
    """
    Relative l2 error of a propagated soliton against the closed form,
    used for convergence studies.
    """

    grid = Grid1D(length, nx)
    p = SolitonParam(kappa, 0.5 * length - 2 * kappa**2 * T)
    field = sample_profile(lambda x: soliton(p, x, 0.), grid)
    final = evolve(field, cfg, T)
    exact = sample_profile(lambda x: soliton(p, x, T), grid, T)
    return field_norms(final.replace(final.samples - exact.samples)).l2 / field_norms(exact).l2


def zk_richardson(field, cfg, T):
    """
    Zabusky-Kruskal solution with its leading :math:`dx^2` error removed.

    The field is evolved on its own grid and, spectrally interpolated, on
    a grid refined by two with ``dt / 8``. The refined run restricted to
    the original nodes is combined as
    :math:`(4 u_{dx/2} - u_{dx}) / 3`.

    Parameters
    ----------

    field : WaveField
    cfg : SolverConfig
        A Zabusky-Kruskal configuration stable on the original grid.
    T : float

    Returns
    -------

    field : WaveField
        Fourth order accurate in space, on the grid of ``field``.

    """

    if cfg.scheme != 'zabusky-kruskal':
        raise ValidationError('Richardson extrapolation needs the zabusky-kruskal scheme, got %s'
                              % cfg.scheme)

    coarse = evolve(field, cfg, T)
    grid = Grid1D(field.grid.length, 2 * field.grid.nx)
    fine0 = WaveField(grid, scipy.signal.resample(field.samples, grid.nx), field.t)
    fine_cfg = replace(cfg, dt=cfg.dt / 8, max_steps=8 * cfg.max_steps)
    fine = evolve(fine0, fine_cfg, T)
    logger.debug('zk_richardson: nx = %i and %i', field.grid.nx, grid.nx)
    return coarse.replace((4 * fine.samples[::2] - coarse.samples) / 3)
