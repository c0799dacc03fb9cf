"""Entropy bookkeeping and the two-state oscillators.

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

from solitrend import MarketCounts, ProbState2, ReferenceState
from solitrend import participant_probabilities, entropy_split, shannon_entropy
from solitrend import entropy_taylor, d_double_star, osc_params
from solitrend import integrate_harmonic, integrate_nonharmonic
from solitrend import oscillation_period, fit_nonharmonic, save_trajectory
from solitrend import ValidationError, UndefinedEntropyError, StateExitError


def test_participant_probabilities():

    r = participant_probabilities(MarketCounts(60, 40))
    np.testing.assert_allclose([r.p_plus, r.p_minus, r.p], [0.6, 0.4, 0.8])
    assert (r.M, r.K) == (20, 80)

    r = participant_probabilities(MarketCounts(50, 50))
    assert r.p_plus - r.p_minus == 0 and r.p == 1

    r = participant_probabilities(MarketCounts(100, 0))
    assert r.p_plus == 1 and r.p == 0

    with pytest.raises(ValidationError):
        MarketCounts(0, 0)


def test_entropy_split():

    s = entropy_split(0.5 + 0.5 / np.e, 0.5 - 0.5 / np.e, 0.5)
    np.testing.assert_allclose(s.T, 1 / np.e, rtol=1e-12)
    assert entropy_split(1., 0., 1.).T == 0.
    assert entropy_split(0.7, 0.3, 1.).R == 0.

    with pytest.raises(UndefinedEntropyError):
        entropy_split(0.4, 0.6, 0.8)
    with pytest.raises(UndefinedEntropyError):
        entropy_split(0.5, 0.5, 1.)


def test_shannon_entropy():

    np.testing.assert_allclose(shannon_entropy([0.5, 0.5]), np.log(2))
    np.testing.assert_allclose(shannon_entropy([0.5, 0.5], base=2), 1.)
    assert shannon_entropy([1.]) == 0.
    assert shannon_entropy([0., 1.]) == 0.
    np.testing.assert_allclose(shannon_entropy([0.25, 0.75]), 0.5623, atol=1e-4)

    with pytest.raises(ValidationError):
        shannon_entropy([-0.1, 1.1])


def test_entropy_taylor():

    p0 = np.array([0.3, 0.7])
    r = entropy_taylor(p0, p0)
    assert r.d_star == 0.
    np.testing.assert_allclose(r.approx_H, shannon_entropy(p0), rtol=1e-14)

    r = entropy_taylor([0.6, 0.4], [0.5, 0.5])
    np.testing.assert_allclose(r.d_star, 0.02, rtol=1e-12)

    # cubic remainder
    direction = np.array([0.01, -0.01]) * p0
    errors = []
    for scale in [1., 0.5, 0.25]:
        p = p0 + scale * direction
        err = abs(entropy_taylor(p, p0).approx_H - shannon_entropy(p))
        assert err <= 10 * np.max(np.abs(p - p0))**3
        errors.append(err)

    print('Taylor remainders:', errors)
    assert errors[0] / errors[1] >= 7.
    assert errors[1] / errors[2] >= 7.

    with pytest.raises(ValidationError):
        entropy_taylor([0.5, 0.5], [0., 1.])


def test_d_double_star():

    ref = ReferenceState(0.5, 0.5, 0.1)
    assert d_double_star(ProbState2(0.5, 0.5), ref) == 0.
    np.testing.assert_allclose(
        d_double_star(ProbState2(0.5, 0.6), ref), 0.01 - 0.001 / 1.5, rtol=1e-12)

    below = d_double_star(ProbState2(0.5, 0.4), ref)
    assert below > 0.01


def test_osc_params():

    ref = ReferenceState(0.5, 0.5, 0.1)
    p = osc_params(ref)
    np.testing.assert_allclose([p.chi, p.alpha, p.C1, p.C2], [0.04, 0.5, 0.375, 0.5])
    np.testing.assert_allclose(p.k, 0.08)
    np.testing.assert_allclose(p.k_printed, 0.4)

    m = osc_params(ReferenceState(0.5, 0.5, -0.1))
    assert (m.chi, m.k) == (p.chi, p.k)


def test_harmonic(verbose=False):

    ref = ReferenceState(0.5, 0.5, 0.1)
    omega = np.sqrt(osc_params(ref).chi)
    period = 2 * np.pi / omega
    dt = period / 1000

    rest = integrate_harmonic(ref, ProbState2(0.5, 0.5), dt, 10 * dt)
    np.testing.assert_array_equal(rest.p2, 0.5)

    traj = integrate_harmonic(ref, ProbState2(0.5, 0.5 + 1e-3), dt, 100 * period)
    np.testing.assert_allclose(omega, 0.2)
    np.testing.assert_allclose(traj.p2, 0.5 + 1e-3 * np.cos(omega * traj.t), atol=1e-9)
    assert np.max(np.abs(traj.invariant - traj.invariant[0])) <= 1e-10
    np.testing.assert_allclose(oscillation_period(traj, ref), period, rtol=1e-6)

    if verbose:
        import matplotlib.pyplot as plt
        plt.plot(traj.t, traj.p1, label='p1')
        plt.plot(traj.t, traj.p2, label='p2')
        plt.legend()
        plt.show()


def test_nonharmonic_conservation():

    ref = ReferenceState(0.5, 0.5, 0.1)
    period = 2 * np.pi / np.sqrt(osc_params(ref).chi)

    rest = integrate_nonharmonic(ref, ProbState2(0.5, 0.5), 0.1, 1.)
    np.testing.assert_array_equal(rest.p1, 0.5)

    traj = integrate_nonharmonic(ref, ProbState2(0.5, 0.5 + 1e-3), period / 1000, 100 * period)
    assert traj.invariant_name == 'd_double_star'
    assert np.max(np.abs(traj.invariant - traj.invariant[0])) <= 1e-8


def test_nonharmonic_regression():

    ref = ReferenceState(0.5, 0.5, 0.1)
    params = osc_params(ref)
    period = 2 * np.pi / np.sqrt(params.chi)

    traj = integrate_nonharmonic(ref, ProbState2(0.5, 0.5 + 1e-3), period / 2000, 5 * period)
    k, alpha, C1 = fit_nonharmonic(traj, ref)
    print('measured k, alpha, C1:', k, alpha, C1)

    np.testing.assert_allclose(alpha, params.alpha, rtol=1e-3)
    np.testing.assert_allclose(C1, params.C1, rtol=1e-3)
    np.testing.assert_allclose(k, params.k, rtol=1e-3)


def test_nonharmonic_period():

    ref = ReferenceState(0.5, 0.5, 0.1)
    harmonic = 2 * np.pi / np.sqrt(osc_params(ref).k / 2)
    dt = harmonic / 1000

    small = integrate_nonharmonic(ref, ProbState2(0.5, 0.5 + 1e-4), dt, 5 * harmonic)
    np.testing.assert_allclose(oscillation_period(small, ref), harmonic, rtol=5e-3)

    periods = []
    for amplitude in [0.02, 0.05, 0.1, 0.15, 0.2]:
        traj = integrate_nonharmonic(ref, ProbState2(0.5, 0.5 + amplitude), dt, 6 * harmonic)
        periods.append(oscillation_period(traj, ref))

    print('periods:', periods)
    assert np.all(np.diff(periods) > 0)


def test_state_exit():

    ref = ReferenceState(0.5, 0.2, 0.1)
    with pytest.raises(StateExitError):
        integrate_nonharmonic(ref, ProbState2(0.5, 0.65), 0.1, 500.)

    with pytest.raises(StateExitError):
        integrate_harmonic(ReferenceState(0.5, 0.5, 0.1), ProbState2(0.9, 0.9), 0.1, 100.)


def test_trajectory_csv(tmp_path):

    ref = ReferenceState(0.5, 0.5, 0.1)
    traj = integrate_harmonic(ref, ProbState2(0.5, 0.501), 0.5, 5.)
    filename = tmp_path / 'traj.csv'
    save_trajectory(filename, traj)

    assert filename.read_text().startswith('# t,p1,p2,d_star')
    data = np.loadtxt(filename, delimiter=',')
    assert data.shape == (11, 4)


if __name__ == '__main__':
    test_harmonic(verbose=True)
