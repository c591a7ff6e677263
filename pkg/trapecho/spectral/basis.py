"""
Bound-state bases.
"""
from collections import OrderedDict

import numpy as np


class SpectralBasis(object):
    """
    Bound eigenstates of one axis potential.

    :param energies: Ascending eigenenergies (internal units).
    :param wavefunctions: (n_grid, n_states) real samples normalized so that
    sum(psi**2) * spacing == 1, or None for analytic bases built without a
    grid.
    :param grid: Positions of the samples, or None.
    :param kind: 'numeric' or 'harmonic'. Harmonic bases keep omega, center,
    offset and mass in `params` so overlaps can use the analytic recursion.
    :param cutoff: Energy below which all retained states lie.
    """
    def __init__(self, energies, wavefunctions=None, grid=None, label='y',
                 kind='numeric', params=None, cutoff=None, potential=None):
        energies = np.asarray(energies, dtype=float)
        assert energies.ndim == 1
        if energies.size > 1 and not np.all(np.diff(energies) > 0):
            raise ValueError("energies must be strictly ascending")
        if wavefunctions is not None:
            assert grid is not None
            assert wavefunctions.shape == (len(grid), len(energies))
        self.energies = energies
        self.wavefunctions = wavefunctions
        self.grid = grid
        self.label = label
        self.kind = kind
        self.params = dict(params or {})
        self.cutoff = cutoff
        self.potential = potential
        self.diagnostics = OrderedDict()

    @property
    def n_states(self):
        return len(self.energies)

    @property
    def spacing(self):
        return self.grid[1] - self.grid[0]

    @property
    def is_harmonic(self):
        return self.kind == 'harmonic'

    def gram(self):
        """Grid inner products <n|m>, ideally the identity."""
        psi = self.wavefunctions
        return self.spacing * psi.T @ psi

    def orthonormality_error(self):
        return float(np.max(np.abs(self.gram() - np.eye(self.n_states))))


def combined_energies(bases):
    """
    Separable energies E(n_x, n_y, ...) = sum_a E_a[n_a] as an nd-array.
    """
    total = np.zeros(())
    for basis in bases:
        total = np.add.outer(total, basis.energies)
    return total
