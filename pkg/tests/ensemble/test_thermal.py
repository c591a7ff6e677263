import numpy as np
import pytest

from trapecho.ensemble.thermal import (
    ThermalEnsemble,
    build_ensemble,
    factorized_sum,
)
from trapecho.spectral.hermite import analytic_harmonic_basis


def brute_force(values_x, energies_x, values_y, energies_y, threshold):
    total = 0.0
    for i, ex in enumerate(energies_x):
        for j, ey in enumerate(energies_y):
            if ex + ey < threshold:
                total = total + values_x[i] * values_y[j]
    return total


def test_factorized_sum_matches_double_loop():
    rng = np.random.RandomState(4)
    energies_x = np.sort(rng.uniform(0.0, 10.0, 40))
    energies_y = rng.uniform(0.0, 10.0, 30)
    values_x = rng.randn(40)
    values_y = rng.randn(30)
    for threshold in (0.5, 4.2, 11.0, 25.0):
        assert factorized_sum(values_x, energies_x, values_y, energies_y,
                              threshold) == pytest.approx(
            brute_force(values_x, energies_x, values_y, energies_y,
                        threshold), abs=1e-12)


def test_factorized_sum_broadcasts_trailing_dimensions():
    rng = np.random.RandomState(5)
    energies_x = rng.uniform(0.0, 5.0, 12)
    energies_y = rng.uniform(0.0, 5.0, 9)
    values_x = rng.randn(12, 3) + 1j * rng.randn(12, 3)
    values_y = rng.randn(9, 3) + 1j * rng.randn(9, 3)
    total = factorized_sum(values_x, energies_x, values_y, energies_y, 6.0)
    assert total.shape == (3,)
    for t in range(3):
        assert total[t] == pytest.approx(brute_force(
            values_x[:, t], energies_x, values_y[:, t], energies_y, 6.0))


def test_rejects_non_positive_temperature():
    with pytest.raises(ValueError):
        ThermalEnsemble([np.arange(5) + 0.5], 0.0, 1.5)
    with pytest.raises(ValueError):
        ThermalEnsemble([np.arange(5) + 0.5], -1.0, 1.5)


@pytest.mark.parametrize('axis_energies', [
    [np.arange(10) + 0.5],
    [np.arange(10) + 0.5, 2 * np.arange(10) + 1.0],
])
def test_ground_state_survives_zero_temperature_limit(axis_energies):
    ensemble = ThermalEnsemble(axis_energies, 1e-6, 1.5)
    assert ensemble.n_states == 1
    assert np.array_equal(ensemble.indices, np.zeros((1, len(axis_energies)),
                                                     dtype=int))
    assert np.allclose(ensemble.weights, [1.0])


def test_enumeration_is_energy_ordered_and_normalized():
    ensemble = ThermalEnsemble([np.arange(20) + 0.5,
                                1.3 * np.arange(20) + 0.65], 4.0, 3.0)
    energies = ensemble.energies
    assert np.all(np.diff(energies) >= 0)
    assert np.all(energies < ensemble.threshold)
    assert len(ensemble.weights) == ensemble.n_states
    assert np.sum(ensemble.weights) == pytest.approx(1.0)
    assert np.all(np.diff(ensemble.weights) <= 1e-15)
    ex = np.arange(20) + 0.5
    ey = 1.3 * np.arange(20) + 0.65
    assert np.allclose(energies, ex[ensemble.indices[:, 0]]
                       + ey[ensemble.indices[:, 1]])


def test_separable_sum_matches_enumeration():
    ex = np.arange(25) + 0.5
    ey = 0.8 * np.arange(25) + 0.4
    ensemble = ThermalEnsemble([ex, ey], 3.0, 2.0)
    fx = np.cos(0.4 * np.arange(25))
    fy = 1.0 + 0.1 * np.arange(25)
    expected = np.sum(ensemble.weights * fx[ensemble.indices[:, 0]]
                      * fy[ensemble.indices[:, 1]])
    assert ensemble.separable_sum([fx, fy]) == pytest.approx(expected)
    assert ensemble.separable_sum([np.ones(25), np.ones(25)]) == \
        pytest.approx(1.0)


def test_one_axis_clip():
    ensemble = ThermalEnsemble([np.arange(30) + 0.5], 2.0, 1.5)
    # 1.5 kT = 3.0: levels 0.5, 1.5, 2.5
    assert ensemble.n_states == 3
    boltzmann = np.exp(-np.arange(3) / 2.0)
    assert np.allclose(ensemble.weights, boltzmann / boltzmann.sum())


def test_describe():
    ensemble = ThermalEnsemble([np.arange(30) + 0.5], 2.0, 1.5)
    info = ensemble.describe()
    assert info['n_states'] == 3
    assert info['threshold'] == pytest.approx(3.0)
    assert info['axis_levels_below_clip'] == [3]


def test_build_ensemble_measures_from_potential_floor():
    bases = [analytic_harmonic_basis(1.0, 0.0, 40, 1.0, offset=-7.0)]
    ensemble = build_ensemble(bases, kT=2.0, clip_ratio=1.5)
    assert ensemble.n_states == 3
    assert ensemble.labels == ['y']
    assert ensemble.ground_energy == pytest.approx(0.5)
