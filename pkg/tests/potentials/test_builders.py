import math

import numpy as np
import pandas as pd
import pytest

from trapecho.core.errors import ConfigError, NumericalValidityError
from trapecho.core.model import NumericsConfig, PhysicalConstants, TrapConfig
from trapecho.core.units import LENGTH
from trapecho.potentials.axis import (
    GAUSSIAN,
    HARMONIC,
    AxisPotential,
    PotentialPair,
)
from trapecho.potentials.builders import (
    GAUSSIAN_HALFWIDTH,
    GAUSSIAN_MIN_HALFWIDTH,
    barrier_position,
    build_pair,
    check_surrogate,
    epsilon_from_wavelength,
    export_potential_csv,
    gaussian_halfwidth,
)
from trapecho.spectral.eigensolvers import diagonalize


@pytest.fixture
def constants():
    return PhysicalConstants()


@pytest.mark.parametrize('wavelength, expected', [
    (805e-9, 6.48e-4),
    (800e-9, 1.29e-3),
    (796.25e-9, 5.12e-3),
])
def test_epsilon_from_wavelength(constants, wavelength, expected):
    assert epsilon_from_wavelength(wavelength, constants) == pytest.approx(
        expected, rel=1e-2)


def test_epsilon_grows_towards_resonance(constants):
    epsilons = [epsilon_from_wavelength(w, constants)
                for w in (805e-9, 798.25e-9, 796.25e-9)]
    assert epsilons == sorted(epsilons)


def test_blue_wavelength_rejected(constants):
    with pytest.raises(ConfigError):
        epsilon_from_wavelength(794e-9, constants)


def test_two_line_epsilon(constants):
    two_line = epsilon_from_wavelength(800e-9, constants, 'd1_d2')
    assert two_line == pytest.approx(9.667e-4, rel=2e-3)
    # The D2 line only pulls the ratio down, least so near D1.
    for wavelength in (796.25e-9, 800e-9, 805e-9):
        assert (epsilon_from_wavelength(wavelength, constants, 'd1_d2')
                < epsilon_from_wavelength(wavelength, constants))
    near = epsilon_from_wavelength(795.1e-9, constants)
    assert epsilon_from_wavelength(795.1e-9, constants, 'd1_d2') == \
        pytest.approx(near, rel=0.05)
    with pytest.raises(ConfigError):
        epsilon_from_wavelength(800e-9, constants, 'd3')


def test_gaussian_pair_scales_only_optical_part(constants):
    trap = TrapConfig(wavelength_lambda=800e-9)
    pair = build_pair(trap, NumericsConfig(), constants)
    v1, v2 = pair.v1['y'], pair.v2['y']
    assert pair.kind == GAUSSIAN
    np.testing.assert_allclose(v2.optical, (1 + pair.epsilon_eff)
                               * v1.optical)
    np.testing.assert_allclose(v2.values - v2.optical,
                               v1.values - v1.optical)
    assert pair.epsilon_eff == pytest.approx(
        pair.units.desk_factor * pair.epsilon)


def test_gravity_only_on_vertical_axis(constants):
    trap = TrapConfig(wavelength_lambda=800e-9)
    pair = build_pair(trap, NumericsConfig(dimensionality=2), constants)
    assert pair.axes == ['x', 'y']
    np.testing.assert_allclose(pair.v1['x'].values, pair.v1['x'].optical)
    assert not np.allclose(pair.v1['y'].values, pair.v1['y'].optical)


def test_harmonic_surrogate_frequencies_and_sag(constants):
    trap = TrapConfig(kind='harmonic', wavelength_lambda=800e-9,
                      oscillation_time=3.6e-3)
    pair = build_pair(trap, NumericsConfig(dimensionality=2), constants)
    units = pair.units
    omega1 = pair.v1['y'].params['omega']
    omega2 = pair.v2['y'].params['omega']
    assert units.from_internal(omega1, 'frequency') == pytest.approx(
        2 * math.pi / 3.6e-3)
    assert omega2 / omega1 == pytest.approx(math.sqrt(1 + pair.epsilon_eff))
    # d = g / omega1^2 - g / omega2^2, internal lengths
    g = units.gravity_tilt / units.mass
    assert pair.sag_displacement('y') == pytest.approx(
        g / omega1 ** 2 - g / omega2 ** 2, rel=1e-9)
    assert pair.sag_displacement('x') == 0.0


def test_harmonic_sag_is_zero_without_gravity(constants):
    trap = TrapConfig(kind='harmonic', wavelength_lambda=800e-9,
                      gravity_enabled=False)
    pair = build_pair(trap, NumericsConfig(), constants)
    assert pair.kind == HARMONIC
    assert pair.sag_displacement('y') == 0.0


def test_surrogate_minima_match_the_grid(constants):
    trap = TrapConfig(kind='harmonic', wavelength_lambda=800e-9,
                      oscillation_time=3.6e-3)
    pair = build_pair(trap, NumericsConfig(dimensionality=2), constants)
    for label in pair.axes:
        v1, v2 = pair.v1[label], pair.v2[label]
        assert abs(v1.argmin_position() - v1.params['center']) \
            <= 0.5 * v1.spacing + 1e-12
        sampled = v2.argmin_position() - v1.argmin_position()
        assert sampled == pytest.approx(pair.sag_displacement(label),
                                        abs=v1.spacing)
    check_surrogate(pair)


def test_misplaced_surrogate_is_rejected(constants):
    trap = TrapConfig(kind='harmonic', wavelength_lambda=800e-9)
    pair = build_pair(trap, NumericsConfig(), constants)
    a2 = pair.v2['y']
    shifted = AxisPotential(a2.grid, np.roll(a2.values, 10), 'y', HARMONIC,
                            params=a2.params, optical=a2.optical,
                            mass=a2.mass)
    broken = PotentialPair(pair.v1, {'y': shifted}, pair.epsilon,
                           pair.epsilon_eff, pair.e_hf, pair.units)
    with pytest.raises(NumericalValidityError) as excinfo:
        check_surrogate(broken)
    assert 'axis y' in str(excinfo.value)


def test_scaled_matches_direct_build(constants):
    trap = TrapConfig(kind='harmonic', wavelength_lambda=800e-9)
    numerics = NumericsConfig()
    base = build_pair(trap, numerics, constants)
    epsilon = epsilon_from_wavelength(796.25e-9, constants)
    direct = build_pair(trap, numerics, constants, epsilon=epsilon)
    scaled = base.scaled(epsilon)
    np.testing.assert_allclose(scaled.v2['y'].values, direct.v2['y'].values,
                               rtol=1e-12, atol=1e-12)
    assert scaled.v2['y'].params['omega'] == pytest.approx(
        direct.v2['y'].params['omega'])


def test_gaussian_halfwidth_meets_target():
    halfwidth = gaussian_halfwidth(0.0, -0.05)
    assert halfwidth == pytest.approx(math.sqrt(math.log(20.0) / 2.0))
    assert gaussian_halfwidth(0.0, -0.99) == GAUSSIAN_MIN_HALFWIDTH
    # out of reach without tilt: the fixed edge is already at the continuum
    assert gaussian_halfwidth(0.0, 0.5) == GAUSSIAN_HALFWIDTH


def test_barrier_position_is_the_highest_edge():
    tilt = 0.167
    top = barrier_position(tilt)
    assert 4 * top * math.exp(-2 * top ** 2) == pytest.approx(tilt)

    def edge(h):
        return -math.exp(-2 * h ** 2) - tilt * h
    for h in np.linspace(1.0, 2.0, 41):
        assert edge(h) <= edge(top) + 1e-12
    assert gaussian_halfwidth(tilt, 0.0) == pytest.approx(top)
    with pytest.raises(NumericalValidityError):
        barrier_position(1.5)


def test_auto_domain_keeps_states_up_to_the_barrier(constants):
    trap = TrapConfig(wavelength_lambda=800e-9)
    auto = build_pair(trap, NumericsConfig(), constants)
    axis = auto.v1['y']
    assert axis.halfwidth == pytest.approx(
        barrier_position(auto.units.gravity_tilt))
    fixed = build_pair(trap, NumericsConfig(
        domain_halfwidth=GAUSSIAN_HALFWIDTH * trap.waist_w0), constants)
    assert axis.edge_value > fixed.v1['y'].edge_value

    basis = diagonalize(axis)
    assert basis.energies[-1] < axis.edge_value
    assert basis.n_states >= diagonalize(fixed.v1['y']).n_states


def test_auto_domain_covers_the_clip_in_a_deep_trap(constants):
    trap = TrapConfig(wavelength_lambda=800e-9, depth_ratio=20.0)
    pair = build_pair(trap, NumericsConfig(), constants)
    kT = 1.0 / trap.depth_ratio
    e_clip = pair.v1['y'].minimum + trap.clip_ratio * kT
    assert pair.v1['y'].edge_value > e_clip + kT
    assert pair.v1['y'].halfwidth < GAUSSIAN_HALFWIDTH


def test_basis_cutoff_above_domain_edge_is_reported(constants):
    trap = TrapConfig(wavelength_lambda=800e-9)
    numerics = NumericsConfig(domain_halfwidth=20e-6,
                              basis_cutoff_energy=1.0 * constants.k_B
                              * trap.temperature_T)
    with pytest.raises(NumericalValidityError) as excinfo:
        build_pair(trap, numerics, constants)
    assert 'domain too small' in str(excinfo.value)


def test_export_potential_csv(constants, tmp_path):
    trap = TrapConfig(wavelength_lambda=800e-9)
    pair = build_pair(trap, NumericsConfig(grid_points_per_axis=64),
                      constants)
    paths = export_potential_csv(pair, str(tmp_path))
    assert sorted(p.split('/')[-1] for p in paths) == [
        'potential_y_v1.csv', 'potential_y_v2.csv']
    frame = pd.read_csv(paths[0])
    assert list(frame.columns) == ['position_m', 'energy_J']
    assert len(frame) == 64
    assert frame['position_m'].iloc[-1] == pytest.approx(
        pair.units.from_internal(pair.v1['y'].grid[-1], LENGTH))
