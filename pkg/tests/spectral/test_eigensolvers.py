import math

import numpy as np
import pytest

from trapecho.core import logger
from trapecho.core.errors import NumericalValidityError
from trapecho.core.model import NumericsConfig, PhysicalConstants, TrapConfig
from trapecho.potentials.axis import (
    AxisPotential,
    CUSTOM,
    HARMONIC,
    uniform_grid,
)
from trapecho.potentials.builders import build_pair
from trapecho.spectral.eigensolvers import (
    convergence_check,
    diagonalize,
    diagonalize_2d,
)


def oscillator_axis(halfwidth=10.0, n_points=256):
    grid = uniform_grid(halfwidth, n_points)
    params = dict(omega=1.0, center=0.0, offset=0.0, mass=1.0,
                  curvature=1.0, scale=0.0, tilt=0.0)
    return AxisPotential(grid, 0.5 * grid ** 2, 'y', HARMONIC, params=params,
                         mass=1.0)


def test_dvr_reproduces_oscillator_levels():
    basis = diagonalize(oscillator_axis(), max_states=20)
    assert basis.n_states == 20
    np.testing.assert_allclose(basis.energies, np.arange(20) + 0.5,
                               atol=1e-8)
    assert basis.orthonormality_error() < 1e-10


def test_finite_differences_converge_to_oscillator_levels():
    basis = diagonalize(oscillator_axis(), NumericsConfig(solver='fd'),
                        max_states=3)
    np.testing.assert_allclose(basis.energies, [0.5, 1.5, 2.5], atol=5e-3)


def test_wavefunction_sign_convention():
    basis = diagonalize(oscillator_axis(), max_states=4)
    grid = basis.grid
    right = grid > 3.0
    for n in range(4):
        psi = basis.wavefunctions[:, n]
        significant = np.abs(psi) > 1e-3 * np.max(np.abs(psi))
        outermost = np.flatnonzero(significant & right)[-1]
        assert psi[outermost] > 0


def test_edge_states_are_trimmed_with_warning():
    # Cutoff defaults to the edge value, so the top states touch the walls.
    basis = diagonalize(oscillator_axis(halfwidth=6.0, n_points=160))
    assert basis.diagnostics['trimmed_edge_states'] > 0
    assert basis.diagnostics['max_tail_norm'] <= 1e-8
    assert any('weakly bound' in w for w in logger.warnings)


def test_coarse_grid_is_rejected():
    with pytest.raises(NumericalValidityError) as excinfo:
        diagonalize(oscillator_axis(halfwidth=20.0, n_points=64),
                    cutoff=20.0)
    assert 'grid_points_per_axis' in str(excinfo.value)


def test_too_few_bound_states():
    grid = uniform_grid(1.0, 128)
    shallow = AxisPotential(grid, -1e-3 * np.exp(-2 * grid ** 2), 'y',
                            CUSTOM, mass=1.0)
    with pytest.raises(NumericalValidityError):
        diagonalize(shallow)


def test_convergence_check_is_small():
    axis = oscillator_axis()
    assert convergence_check(axis, cutoff=10.0) < 1e-8


def test_spectrum_cache_returns_same_basis(tmp_path):
    numerics = NumericsConfig(cache_dir=str(tmp_path))
    first = diagonalize(oscillator_axis(), numerics, max_states=10)
    second = diagonalize(oscillator_axis(), numerics, max_states=10)
    np.testing.assert_array_equal(first.energies, second.energies)
    assert any(tmp_path.iterdir())


def test_separable_2d_matches_sum_of_1d():
    grid = uniform_grid(7.0, 40)
    energies, wavefunctions = diagonalize_2d(
        lambda x, y: 0.5 * x ** 2 + 0.5 * 4.0 * y ** 2, grid, grid, 1.0, 4)
    np.testing.assert_allclose(energies, [1.5, 2.5, 3.5, 3.5], atol=1e-6)
    h = grid[1] - grid[0]
    norm = h * h * np.sum(wavefunctions[..., 0] ** 2)
    assert norm == pytest.approx(1.0)


def test_gaussian_well_holds_its_semiclassical_state_count():
    constants = PhysicalConstants()
    trap = TrapConfig(wavelength_lambda=800e-9, gravity_enabled=False)
    pair = build_pair(trap, NumericsConfig(), constants)
    axis = pair.v1['y']
    basis = diagonalize(axis)
    # Bohr-Sommerfeld: N = sqrt(2 m / pi) in units of w0 and hbar_eff / U0.
    expected = math.sqrt(2.0 * axis.mass / math.pi)
    assert expected == pytest.approx(1.596 * 75.0, rel=1e-2)
    assert 0.7 * expected <= basis.n_states <= expected + 2
    assert 1e3 <= basis.n_states * pair.units.desk_factor <= 1e4
