"""
Grid eigensolvers for one-dimensional bound states.

Two discretizations of -1/(2m) d^2/dq^2 + V(q) on a uniform grid:

* 'dvr': sinc discrete-variable representation (Fourier grid Hamiltonian),
  dense and spectrally accurate;
* 'fd': three-point finite differences, symmetric tridiagonal.

Both keep only eigenvalues below the cutoff.
"""
import functools
import math

import numpy as np
import scipy.linalg
from joblib import Memory

from trapecho.core.errors import NumericalValidityError
from trapecho.core.logging import logger
from trapecho.spectral.basis import SpectralBasis

TAIL_FRACTION = 0.1
TAIL_TOLERANCE = 1e-8
# Largest resolvable wavenumber is pi / spacing; stay below this share of it.
RESOLUTION_MARGIN = 0.8


def dvr_kinetic(n_points, spacing, mass):
    """Sinc-DVR kinetic matrix for -1/(2 mass) d^2/dq^2."""
    offsets = np.arange(n_points)
    column = np.empty(n_points)
    column[0] = math.pi ** 2 / 3.0
    column[1:] = 2.0 * (-1.0) ** offsets[1:] / offsets[1:] ** 2
    return scipy.linalg.toeplitz(column) / (2.0 * mass * spacing ** 2)


def _solve_dvr(values, spacing, mass, cutoff):
    hamiltonian = dvr_kinetic(len(values), spacing, mass)
    hamiltonian[np.diag_indices_from(hamiltonian)] += values
    energies, vectors = scipy.linalg.eigh(
        hamiltonian, subset_by_value=(-np.inf, cutoff))
    return energies, vectors


def _solve_fd(values, spacing, mass, cutoff):
    kinetic = 1.0 / (2.0 * mass * spacing ** 2)
    diagonal = values + 2.0 * kinetic
    off_diagonal = -kinetic * np.ones(len(values) - 1)
    lower = float(np.min(values)) - 1.0
    energies, vectors = scipy.linalg.eigh_tridiagonal(
        diagonal, off_diagonal, select='v', select_range=(lower, cutoff))
    return energies, vectors


_SOLVERS = {
    'dvr': _solve_dvr,
    'fd': _solve_fd,
}


@functools.lru_cache(maxsize=None)
def _memory(location):
    return Memory(location=location, verbose=0)


def solve_grid(values, spacing, mass, cutoff, solver='dvr', cache_dir=None):
    """
    Eigenpairs below `cutoff`, cached on disk when `cache_dir` is set.

    :return: energies, vectors with unit Euclidean norm columns.
    """
    solve = _SOLVERS[solver]
    if cache_dir is not None:
        solve = _memory(cache_dir).cache(solve)
    return solve(np.ascontiguousarray(values), float(spacing), float(mass),
                 float(cutoff))


def _fix_signs(vectors):
    # Hermite convention: positive beyond the outermost right lobe.
    threshold = 1e-3 * np.max(np.abs(vectors), axis=0)
    for n in range(vectors.shape[1]):
        significant = np.nonzero(np.abs(vectors[:, n]) > threshold[n])[0]
        if vectors[significant[-1], n] < 0:
            vectors[:, n] *= -1
    return vectors


def tail_norms(wavefunctions, spacing, fraction=TAIL_FRACTION):
    """Norm carried by the outer `fraction` of the domain (both ends)."""
    n_points = wavefunctions.shape[0]
    n_edge = max(1, int(round(0.5 * fraction * n_points)))
    edge = np.r_[wavefunctions[:n_edge], wavefunctions[-n_edge:]]
    return spacing * np.sum(edge ** 2, axis=0)


def _trim_edge_states(energies, wavefunctions, spacing, halfwidth, label):
    tails = tail_norms(wavefunctions, spacing)
    bad = np.nonzero(tails > TAIL_TOLERANCE)[0]
    n_trim = 0
    if bad.size:
        n_keep = bad[0]
        # Only the weakly bound top of the spectrum may be dropped.
        if not np.array_equal(bad, np.arange(n_keep, len(energies))):
            raise NumericalValidityError(
                "state {} on axis {} leaks {:.2e} of its norm into the outer "
                "domain; enlarge domain_halfwidth beyond {:.4g} w0".format(
                    bad[0], label, tails[bad[0]], 1.5 * halfwidth))
        n_trim = len(energies) - n_keep
        energies = energies[:n_keep]
        wavefunctions = wavefunctions[:, :n_keep]
        logger.warn(
            "axis {}: dropped {} weakly bound state(s) touching the domain "
            "edge; domain_halfwidth >= {:.4g} w0 would keep them".format(
                label, n_trim, 1.5 * halfwidth))
    return energies, wavefunctions, n_trim, tails


def diagonalize(axis, numerics=None, cutoff=None, max_states=None):
    """
    Bound spectrum of one axis potential.

    :param axis: AxisPotential with `mass` set.
    :param numerics: NumericsConfig; supplies solver, max_states and
    cache_dir.
    :param cutoff: Internal energy cutoff; defaults to the potential value
    at the domain edge.
    :return: SpectralBasis with grid-normalized wavefunctions.
    """
    assert axis.mass is not None, "axis potential needs a mass"
    solver = 'dvr' if numerics is None else numerics.solver
    cache_dir = None if numerics is None else numerics.cache_dir
    if max_states is None and numerics is not None:
        max_states = numerics.max_states
    if cutoff is None:
        cutoff = axis.edge_value
    cutoff = min(cutoff, axis.edge_value)

    energies, vectors = solve_grid(axis.values, axis.spacing, axis.mass,
                                   cutoff, solver, cache_dir)
    if max_states is not None:
        energies = energies[:max_states]
        vectors = vectors[:, :max_states]
    wavefunctions = _fix_signs(np.array(vectors)) / math.sqrt(axis.spacing)
    energies, wavefunctions, n_trim, tails = _trim_edge_states(
        energies, wavefunctions, axis.spacing, axis.halfwidth, axis.label)
    if len(energies) < 2:
        raise NumericalValidityError(
            "axis {}: only {} bound state(s) below {:.4g} U0; the trap is too "
            "shallow or the domain too small".format(
                axis.label, len(energies), cutoff))

    k_max = math.sqrt(2.0 * axis.mass * (energies[-1] - np.min(axis.values)))
    if k_max * axis.spacing > RESOLUTION_MARGIN * math.pi:
        needed = int(math.ceil(2 * axis.halfwidth * k_max
                               / (RESOLUTION_MARGIN * math.pi))) + 1
        raise NumericalValidityError(
            "axis {}: grid too coarse for the retained states; use "
            "grid_points_per_axis >= {}".format(axis.label, needed))

    basis = SpectralBasis(energies, wavefunctions, axis.grid, axis.label,
                          kind='numeric', cutoff=cutoff, potential=axis)
    basis.diagnostics.update(
        solver=solver,
        n_states=basis.n_states,
        cutoff=cutoff,
        trimmed_edge_states=n_trim,
        max_tail_norm=float(np.max(tails[:basis.n_states])),
    )
    return basis


def convergence_check(axis, numerics=None, cutoff=None):
    """
    Largest change of the retained energies when the grid is doubled.
    """
    coarse = diagonalize(axis, numerics, cutoff=cutoff)
    fine = diagonalize(axis.resampled(2 * len(axis.grid) - 1), numerics,
                       cutoff=cutoff)
    n = min(coarse.n_states, fine.n_states)
    return float(np.max(np.abs(coarse.energies[:n] - fine.energies[:n])))


def diagonalize_2d(potential_fn, grid_x, grid_y, mass, n_states):
    """
    Lowest states of a (possibly non-separable) 2D potential by a
    Kronecker-product DVR. Meant for small validation problems only.

    :param potential_fn: V(X, Y) evaluated on meshgrid arrays (ij indexing).
    :return: energies (n_states,), wavefunctions (nx, ny, n_states)
    normalized with the product grid weight.
    """
    hx = grid_x[1] - grid_x[0]
    hy = grid_y[1] - grid_y[0]
    nx, ny = len(grid_x), len(grid_y)
    xx, yy = np.meshgrid(grid_x, grid_y, indexing='ij')
    hamiltonian = (np.kron(dvr_kinetic(nx, hx, mass), np.eye(ny))
                   + np.kron(np.eye(nx), dvr_kinetic(ny, hy, mass)))
    hamiltonian[np.diag_indices_from(hamiltonian)] += \
        potential_fn(xx, yy).ravel()
    energies, vectors = scipy.linalg.eigh(
        hamiltonian, subset_by_index=(0, n_states - 1))
    wavefunctions = vectors.reshape(nx, ny, n_states) / math.sqrt(hx * hy)
    return energies, wavefunctions
