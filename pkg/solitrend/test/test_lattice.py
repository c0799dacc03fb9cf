"""Non-harmonic chain dynamics and its continuum limit.

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


import numpy as np
import pytest

from solitrend import ChainState, ChainConfig, chain_accel, chain_energy, shadow_energy
from solitrend import integrate_chain, mode_frequency, dispersion_frequency
from solitrend import chain_from_profile, continuum_soliton_strain, continuum_compare
from solitrend import save_chain_trajectory
from solitrend import ValidationError, DegenerateScalingError


def sine_mode(N, mode, amplitude=0.1):
    return amplitude * np.sin(2 * np.pi * mode * np.arange(N) / N)


def test_chain_accel():

    cfg = ChainConfig(k=2., alpha=0.3, C1=0.25)
    uniform = ChainState(np.full(16, 3.), np.zeros(16))
    np.testing.assert_allclose(chain_accel(uniform, cfg), 2. * 0.25)

    S = np.zeros(16)
    S[5] = 1.
    bump = ChainState(S, np.zeros(16))
    a = chain_accel(bump, ChainConfig(k=2.))
    expected = np.zeros(16)
    expected[4:7] = [2., -4., 2.]
    np.testing.assert_array_equal(a, expected)

    # quadratic force of the single bump
    a = chain_accel(bump, ChainConfig(k=1., alpha=0.5))
    np.testing.assert_allclose(a[4:7], [1. + 0.5, -2., 1. - 0.5])

    # wraps around the ring
    S = np.zeros(16)
    S[0] = 1.
    a = chain_accel(ChainState(S, np.zeros(16)), ChainConfig(k=1.))
    assert a[15] == 1. and a[1] == 1. and a[0] == -2.


def test_rest_and_momentum():

    cfg = ChainConfig(k=1., dt=0.05)
    traj = integrate_chain(ChainState.at_rest(32), cfg, 10.)
    assert np.all(traj.S == 0.) and np.all(traj.V == 0.)

    rng = np.random.default_rng(7)
    state = ChainState(0.1 * rng.standard_normal(32), 0.1 * rng.standard_normal(32))
    p0 = state.V.sum()

    traj = integrate_chain(state, ChainConfig(k=1., alpha=0.4, dt=0.05), 20.)
    np.testing.assert_allclose(traj.V.sum(axis=1), p0, atol=1e-12)

    C1 = 0.2
    traj = integrate_chain(state, ChainConfig(k=1.5, alpha=0.4, C1=C1, dt=0.05), 20.)
    rate = np.diff(traj.V.sum(axis=1)) / np.diff(traj.t)
    np.testing.assert_allclose(rate, 32 * 1.5 * C1, rtol=1e-10)


def test_harmonic_energy():

    N = 32
    cfg = ChainConfig(k=1., dt=0.05)
    rng = np.random.default_rng(3)
    state = ChainState(0.1 * rng.standard_normal(N), 0.1 * rng.standard_normal(N))

    traj = integrate_chain(state, cfg, 500., every=100)
    shadow = np.array([shadow_energy(traj.state(i), cfg) for i in range(len(traj.t))])
    assert np.max(np.abs(shadow / shadow[0] - 1)) <= 1e-6

    energy = np.array([chain_energy(traj.state(i), cfg) for i in range(len(traj.t))])
    assert np.max(np.abs(energy / energy[0] - 1)) <= 1e-2

    with pytest.raises(ValidationError):
        shadow_energy(state, ChainConfig(alpha=0.1))


def test_nonlinear_energy():

    N = 32
    cfg = ChainConfig(k=1., alpha=0.25, C1=0.01, dt=0.02)
    state = ChainState(sine_mode(N, 1, 0.5), np.zeros(N))
    traj = integrate_chain(state, cfg, 100., every=50)
    energy = np.array([chain_energy(traj.state(i), cfg) for i in range(len(traj.t))])
    np.testing.assert_allclose(energy, energy[0], rtol=1e-3)


def test_mode_energy(verbose=False):

    N, mode = 32, 2
    cfg = ChainConfig(k=1., dt=0.05)
    omega = dispersion_frequency(cfg.k, N, mode)
    period = 2 * np.pi / omega

    traj = integrate_chain(ChainState(sine_mode(N, mode), np.zeros(N)), cfg, 100 * period, every=10)
    Sh = np.fft.rfft(traj.S, axis=1)[:, mode]
    Vh = np.fft.rfft(traj.V, axis=1)[:, mode]
    energy = 0.5 * np.abs(Vh)**2 + 0.5 * omega**2 * np.abs(Sh)**2
    assert np.max(np.abs(energy / energy[0] - 1)) <= 1e-3

    if verbose:
        import matplotlib.pyplot as plt
        plt.plot(traj.t, energy)
        plt.show()


def test_mode_frequencies():

    N = 32
    cfg = ChainConfig(k=1., dt=0.05)
    for mode in [1, 2, 3, 5]:
        omega = dispersion_frequency(cfg.k, N, mode)
        traj = integrate_chain(ChainState(sine_mode(N, mode), np.zeros(N)), cfg, 20 * 2 * np.pi / omega)
        measured = mode_frequency(traj, mode)
        print('mode %i: %.6f vs %.6f' % (mode, measured, omega))
        np.testing.assert_allclose(measured, omega, rtol=5e-3)


def test_stability_bound():

    with pytest.raises(ValidationError, match='stability'):
        integrate_chain(ChainState.at_rest(8), ChainConfig(k=4., dt=0.06), 1.)
    with pytest.raises(ValidationError):
        ChainConfig(k=0.)


def test_chain_from_profile():

    N = 64
    cfg = ChainConfig(k=4.)
    P0 = 1. / np.cosh(0.3 * (np.arange(N) - 32.))**2
    state = chain_from_profile(P0, cfg)
    strain = np.fft.irfft(2j * np.pi * np.fft.rfftfreq(N) * np.fft.rfft(state.S), n=N)
    np.testing.assert_allclose(strain, P0 - P0.mean(), atol=1e-6)
    np.testing.assert_allclose(state.V, -2. * (P0 - P0.mean()))


def test_linear_continuum():

    N = 128
    cfg = ChainConfig(k=1., dt=0.05)
    P0 = 0.05 / np.cosh(0.2 * (np.arange(N) - 40.))**2
    traj = integrate_chain(chain_from_profile(P0, cfg), cfg, 50., every=100)

    result = continuum_compare(traj, cfg)
    print('linear correlation:', result.correlation)
    assert result.route == 'linear'
    assert result.correlation > 0.99
    assert result.notes == ()

    with pytest.raises(DegenerateScalingError):
        continuum_compare(traj, cfg, route='kdv')


def test_kdv_continuum(verbose=False):

    N = 256
    cfg = ChainConfig(k=1., alpha=0.05, dt=0.05)
    P0 = continuum_soliton_strain(cfg, N, 0.2, center=64.)
    np.testing.assert_allclose(P0.max(), 0.4)

    traj = integrate_chain(chain_from_profile(P0, cfg), cfg, 300., every=200)
    result = continuum_compare(traj, cfg)
    print('kdv correlation:', result.correlation)
    assert result.route == 'kdv'
    np.testing.assert_allclose(result.T, 0.05 * 300.)
    assert result.correlation > 0.95

    if verbose:
        import matplotlib.pyplot as plt
        plt.plot(result.chain_strain, label='chain')
        plt.plot(result.model_strain, '--', label='KdV')
        plt.legend()
        plt.show()


def test_uniform_drive_continuum():

    N = 256
    P0 = continuum_soliton_strain(ChainConfig(k=1., alpha=0.05), N, 0.2, center=64.)
    results = []
    for C1 in [0., 0.01]:
        cfg = ChainConfig(k=1., alpha=0.05, C1=C1, dt=0.05)
        traj = integrate_chain(chain_from_profile(P0, cfg), cfg, 100., every=200)
        results.append(continuum_compare(traj, cfg))

    # the drive moves the whole chain and drops out of the strain
    free, driven = results
    np.testing.assert_allclose(driven.chain_strain, free.chain_strain, atol=1e-8)
    np.testing.assert_allclose(driven.model_strain, free.model_strain, atol=1e-12)
    np.testing.assert_allclose(driven.correlation, free.correlation, atol=1e-8)
    assert driven.correlation > 0.95


def test_rough_profile_note():

    N = 64
    cfg = ChainConfig(k=1., alpha=0.05, dt=0.05)
    rng = np.random.default_rng(11)
    P0 = 0.01 * rng.standard_normal(N)
    traj = integrate_chain(chain_from_profile(P0, cfg), cfg, 1.)
    result = continuum_compare(traj, cfg)
    assert len(result.notes) >= 1
    assert 'not smooth' in result.notes[0]


def test_trajectory_csv(tmp_path):

    cfg = ChainConfig(k=1., dt=0.05)
    traj = integrate_chain(ChainState(sine_mode(8, 1), np.zeros(8)), cfg, 1.)
    filename = tmp_path / 'chain.csv'
    save_chain_trajectory(filename, traj, decimate=5)
    data = np.loadtxt(filename, delimiter=',')
    assert data.shape == (5, 9)
    assert filename.read_text().startswith('# t,S0,S1')


if __name__ == '__main__':
    test_mode_energy(verbose=True)
    test_kdv_continuum(verbose=True)
