"""Forced KdV integration, conservation and soliton diagnostics.

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

from solitrend import Grid1D, sample_profile, find_peaks, field_norms
from solitrend import SolitonParam, TrainSpec, soliton, train_profile, return_time
from solitrend import SolverConfig, KdVSolver, zk_max_dt, evolve, invariants
from solitrend import invariant_log, save_invariant_log, fission, forced_return, soliton_error
from solitrend import zk_richardson
from solitrend import ValidationError, BlowUpError, FissionError


def reference_soliton(kappa=1., length=40., nx=512):
    grid = Grid1D(length, nx)
    p = SolitonParam(kappa, 0.25 * length)
    return p, sample_profile(lambda x: soliton(p, x, 0.), grid)


def zk_config(grid, umax, **kwargs):
    return SolverConfig('zk', dt=0.9 * zk_max_dt(grid.dx, umax), **kwargs)


def test_config():

    assert SolverConfig('zk').scheme == 'zabusky-kruskal'
    assert SolverConfig('spectral').scheme == 'pseudospectral-rk4'
    assert SolverConfig(C=0.3).forcing == 0.3
    np.testing.assert_allclose(SolverConfig(C=1.2, delta=4.).forcing, 0.4)

    with pytest.raises(ValidationError):
        SolverConfig('leapfrog')
    with pytest.raises(ValidationError):
        SolverConfig(dt=0.)
    with pytest.raises(ValidationError):
        SolverConfig(C=-1.)


def test_uniform_fields():

    grid = Grid1D(40., 64)
    zero = sample_profile(lambda x: 0., grid)
    for scheme in ['zk', 'spectral']:
        cfg = SolverConfig(scheme, dt=1e-2)
        assert np.all(evolve(zero, cfg, 1.).samples == 0.)

        final = evolve(zero, SolverConfig(scheme, dt=1e-2, C=0.5), 2.)
        assert final.t == 2.
        np.testing.assert_allclose(final.samples, -1., atol=1e-12)


def test_soliton_propagation(verbose=False):

    p, field = reference_soliton()
    expected = p.x0 + 4.

    final = evolve(field, SolverConfig('spectral', dt=1e-3), 1.)
    peak = find_peaks(final)[0]
    print('spectral: height %.6f, position %.6f' % (peak.height, peak.position))
    np.testing.assert_allclose(peak.height, 2., rtol=1e-2)
    np.testing.assert_allclose(peak.position - p.x0, 4., rtol=1e-2)

    zk = evolve(field, SolverConfig('zk', dt=1e-4), 1.)
    zpeak = find_peaks(zk)[0]
    print('zk: height %.6f, position %.6f' % (zpeak.height, zpeak.position))
    np.testing.assert_allclose(zpeak.height, 2., rtol=1e-2)
    np.testing.assert_allclose(zpeak.position - p.x0, 4., rtol=1e-2)

    if verbose:
        import matplotlib.pyplot as plt
        exact = soliton(p, field.x, 1.)
        plt.plot(field.x, exact, label='exact')
        plt.plot(field.x, final.samples, '--', label='spectral')
        plt.plot(field.x, zk.samples, ':', label='zk')
        plt.axvline(expected)
        plt.legend()
        plt.show()


def test_cross_scheme():

    p, field = reference_soliton()
    T = 1.
    spectral = evolve(field, SolverConfig('spectral', dt=1e-3), T)
    norm = field_norms(spectral).l2

    def distance(other):
        return field_norms(spectral.replace(spectral.samples - other.samples)).l2 / norm

    # second order in dx: about 4.8e-3 on the reference grid
    cfg = zk_config(field.grid, 2.)
    plain = distance(evolve(field, cfg, T))
    extrapolated = distance(zk_richardson(field, cfg, T))
    print('relative l2 difference: plain %.3e, extrapolated %.3e' % (plain, extrapolated))
    assert 1e-3 < plain < 1e-2
    assert extrapolated < 1e-3

    with pytest.raises(ValidationError):
        zk_richardson(field, SolverConfig('spectral'), T)


def test_invariants():

    p, field = reference_soliton()
    inv = invariants(field)
    np.testing.assert_allclose(inv.I1, 4., atol=1e-3)
    np.testing.assert_allclose(inv.I2, 16. / 3, atol=1e-2)
    np.testing.assert_allclose(inv.I3, 12.8, atol=1e-2)

    zero = sample_profile(lambda x: 0., field.grid)
    assert tuple(invariants(zero)) == (0., 0., 0.)


@pytest.mark.parametrize('scheme', ['spectral', 'zk'])
def test_conservation(scheme):

    p, field = reference_soliton()
    if scheme == 'zk':
        cfg = zk_config(field.grid, 2.)
    else:
        cfg = SolverConfig(scheme, dt=1e-3)

    final, log = invariant_log(field, cfg, 10., every=1000)
    I0, I = log[0, 1:], log[-1, 1:]
    print(scheme, 'invariant drift:', I - I0)

    assert abs(I[0] - I0[0]) <= 1e-10
    assert abs(I[1] - I0[1]) / I0[1] <= 1e-3
    assert abs(I[2] - I0[2]) / abs(I0[2]) <= 1e-2
    np.testing.assert_allclose(log[-1, 0], 10.)


def test_forced_mass_sink(tmp_path):

    p, field = reference_soliton()
    C, T = 0.5, 1.
    L = field.grid.length
    for cfg in [SolverConfig('spectral', dt=1e-3, C=C), zk_config(field.grid, 2.5, C=C)]:
        final, log = invariant_log(field, cfg, T, every=100)
        rate = (log[-1, 1] - log[0, 1]) / T
        np.testing.assert_allclose(rate, -C * L, rtol=1e-3)

    filename = tmp_path / 'invariants.csv'
    save_invariant_log(filename, log)
    assert np.loadtxt(filename, delimiter=',').shape == log.shape


def test_convergence():

    errors = []
    for nx in [256, 512]:
        cfg = SolverConfig('zk', dt=0.8 * zk_max_dt(40. / nx, 2.))
        errors.append(soliton_error(nx, cfg))
    print('zk errors:', errors)
    assert errors[0] / errors[1] > 3.5

    spectral = soliton_error(512, SolverConfig('spectral', dt=1e-3))
    print('spectral error:', spectral)
    assert spectral < 1e-5


def test_fission(verbose=False):

    grid = Grid1D(80., 1024)
    spec = TrainSpec(2, 1., x0=20.)
    field = sample_profile(lambda x: train_profile(spec, x), grid)
    cfg = SolverConfig('spectral', dt=1e-3)

    solitons = fission(field, cfg, 3., expected_n=2)
    amplitudes = [s.amplitude for s in solitons]
    print('amplitudes:', amplitudes, 'speeds:', [s.speed for s in solitons])
    np.testing.assert_allclose(amplitudes, [8., 2.], rtol=3e-2)
    for s in solitons:
        np.testing.assert_allclose(s.speed, 2 * s.amplitude, rtol=2e-2)

    if verbose:
        import matplotlib.pyplot as plt
        final = evolve(field, cfg, 3.)
        plt.plot(field.x, field.samples)
        plt.plot(final.x, final.samples)
        plt.show()


def test_no_fission():

    grid = Grid1D(80., 1024)
    field = sample_profile(lambda x: train_profile(TrainSpec(1, 1., x0=20.), x), grid)
    cfg = SolverConfig('spectral', dt=1e-3)

    single, = fission(field, cfg, 2., expected_n=1)
    np.testing.assert_allclose(single.amplitude, 2., rtol=1e-2)
    np.testing.assert_allclose(single.speed, 4., rtol=1e-2)

    with pytest.raises(FissionError) as info:
        fission(field, cfg, 1., expected_n=3)
    assert info.value.found == 1


def test_forced_return():

    C = 0.5
    cfg = SolverConfig('spectral', dt=1e-3, C=C)

    t1 = forced_return(1., cfg, Grid1D(40., 512), t_max=4.)
    np.testing.assert_allclose(t1, return_time(SolitonParam(1., C=C)).t1, rtol=2e-2)

    t2 = forced_return(2., cfg, Grid1D(100., 1024), t_max=15.)
    predicted = return_time(SolitonParam(2., C=C))
    print('measured T1:', t1, t2, 'printed formula:', predicted.t1_printed)
    np.testing.assert_allclose(t2, predicted.t1, rtol=2e-2)

    # kappa^2 scaling, not the kappa^3 of the printed formula
    np.testing.assert_allclose(t2 / t1, 4., rtol=3e-2)
    assert abs(t2 / t1 - 8.) > 3.


def test_stability_and_blow_up():

    p, field = reference_soliton()
    with pytest.raises(ValidationError, match='Zabusky-Kruskal'):
        evolve(field, SolverConfig('zk', dt=1e-3), 1.)

    big = field.replace(4 * field.samples)
    with pytest.raises(BlowUpError) as info:
        KdVSolver(big.grid, SolverConfig('spectral', dt=0.05)).evolve(big, 50.)
    assert info.value.step >= 1

    with pytest.raises(ValidationError):
        evolve(field, SolverConfig(dt=1e-3, max_steps=10), 1.)


def test_stability_during_fission():

    grid = Grid1D(80., 512)
    field = sample_profile(lambda x: train_profile(TrainSpec(2, 1., x0=20.), x), grid)
    np.testing.assert_allclose(field_norms(field).linf, 6.)

    # stable for the initial height 6, not for the emerging soliton of height 8
    with pytest.raises(ValidationError, match='Zabusky-Kruskal bound .* at t = '):
        evolve(field, SolverConfig('zk', dt=0.99 * zk_max_dt(grid.dx, 6.)), 3.)

    final = evolve(field, SolverConfig('zk', dt=0.9 * zk_max_dt(grid.dx, 8.5)), 3.)
    assert field_norms(final).linf > 7.


def test_snapshots():

    p, field = reference_soliton(nx=128)
    seen = []
    evolve(field, SolverConfig(dt=0.01), 0.1, callback=lambda step, f: seen.append((step, f.t)), every=3)
    assert [s for s, _ in seen] == [3, 6, 9, 10]
    np.testing.assert_allclose(seen[-1][1], 0.1)

    # invariant records and snapshots from one run
    snaps = []
    final, log = invariant_log(field, SolverConfig(dt=0.01), 0.1, every=5,
                               callback=lambda step, f: snaps.append((step, f.t)), callback_every=4)
    assert [s for s, _ in snaps] == [4, 8, 10]
    np.testing.assert_allclose(log[:, 0], [0., 0.05, 0.1])
    np.testing.assert_allclose(final.t, snaps[-1][1])

    with pytest.raises(ValidationError):
        invariant_log(field, SolverConfig(dt=0.01), 0.1, callback_every=0)


if __name__ == '__main__':
    test_soliton_propagation(verbose=True)
    test_fission(verbose=True)
