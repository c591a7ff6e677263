import math

import numpy as np
import pytest

from trapecho.core import logger
from trapecho.dynamics.system import BranchSystem
from trapecho.spectral.basis import SpectralBasis
from trapecho.spectral.hermite import analytic_harmonic_basis
from trapecho.spectral.overlaps import OverlapMatrix, TensorOverlap


def dense_pair(n_states=24, coupling=0.3, seed=3):
    """
    Complete finite Hilbert space: H1 diagonal, H2 = H1 plus a random real
    symmetric perturbation. Returns (system, h1, h2).
    """
    rng = np.random.RandomState(seed)
    h1 = np.diag(np.arange(n_states) + 0.5)
    noise = rng.randn(n_states, n_states)
    h2 = h1 + coupling * 0.5 * (noise + noise.T)
    energies2, vectors2 = np.linalg.eigh(h2)
    basis1 = SpectralBasis(np.diag(h1).copy(), label='y')
    basis2 = SpectralBasis(energies2, label='y')
    # O[n', n] = <n'_2|n_1>
    overlap = OverlapMatrix(vectors2.conj().T, basis1, basis2, 'dense')
    system = BranchSystem([basis1], [basis2], TensorOverlap([overlap]))
    return system, h1, h2


def harmonic_pair(x=0.1, omega_ratio=1.0, n_states=60, axes=1):
    """
    Displaced oscillators with mass = omega1 = 1 (so a = 1); the branch-2
    center sits at d = sqrt(2) x.
    """
    displacement = math.sqrt(2.0) * x
    omega2 = omega_ratio
    labels = ['y'] if axes == 1 else ['x', 'y']
    bases1 = [analytic_harmonic_basis(1.0, 0.0, n_states, 1.0, label=label)
              for label in labels]
    bases2 = [analytic_harmonic_basis(omega2, displacement, n_states, 1.0,
                                      label=label)
              for label in labels]
    return BranchSystem(bases1, bases2)


@pytest.fixture
def dense_system():
    return dense_pair()


@pytest.fixture
def identical_system():
    """Both branches equal: the eps = 0 limit."""
    return harmonic_pair(x=0.0, omega_ratio=1.0, n_states=30)


@pytest.fixture
def sloshing_system():
    return harmonic_pair(x=0.1, omega_ratio=1.0, n_states=60)


@pytest.fixture(autouse=True)
def quiet_logger():
    logger.reset()
    logger.set_quiet(True)
    yield
    logger.reset()


@pytest.fixture
def run_dir(tmp_path):
    return tmp_path / 'run'


@pytest.fixture
def make_harmonic_pair():
    return harmonic_pair


@pytest.fixture
def make_dense_pair():
    return dense_pair
