"""
Two-branch system: per-axis bases of H1 and H2 plus their overlaps.
"""
import math
from collections import OrderedDict

import numpy as np

from trapecho.core.units import ENERGY
from trapecho.potentials.axis import HARMONIC
from trapecho.spectral.basis import combined_energies
from trapecho.spectral.eigensolvers import diagonalize
from trapecho.spectral.hermite import harmonic_basis_for
from trapecho.spectral.overlaps import overlap_matrix, TensorOverlap

# Extra harmonic levels kept above the thermal clip.
HARMONIC_PADDING = 0.3
HARMONIC_MIN_EXTRA = 20


class BranchSystem(object):
    """
    :param bases1: One SpectralBasis per axis for branch 1.
    :param bases2: Same axes for branch 2.
    :param overlaps: TensorOverlap; computed from the bases when None.
    :param overlap_method: Passed to `overlap_matrix` when computing them.
    """
    def __init__(self, bases1, bases2, overlaps=None, pair=None,
                 overlap_method='auto'):
        assert len(bases1) == len(bases2)
        self.bases1 = list(bases1)
        self.bases2 = list(bases2)
        if overlaps is None:
            overlaps = TensorOverlap([
                overlap_matrix(b1, b2, overlap_method)
                for b1, b2 in zip(self.bases1, self.bases2)
            ])
        self.overlaps = overlaps
        self.pair = pair
        self.energies1 = combined_energies(self.bases1)
        self.energies2 = combined_energies(self.bases2)

    @property
    def ndim(self):
        return len(self.bases1)

    @property
    def shape1(self):
        return self.energies1.shape

    @property
    def shape2(self):
        return self.energies2.shape

    def index(self, n):
        """Normalize an int or sequence into an index tuple."""
        if np.isscalar(n):
            n = (int(n),)
        n = tuple(int(k) for k in n)
        assert len(n) == self.ndim, n
        for k, size in zip(n, self.shape1):
            if not 0 <= k < size:
                raise IndexError("state {} outside basis of size {}".format(
                    n, self.shape1))
        return n

    def diagnostics(self):
        info = OrderedDict()
        for b1, b2, o in zip(self.bases1, self.bases2, self.overlaps.axes):
            info[b1.label] = OrderedDict(
                n_states_1=b1.n_states,
                n_states_2=b2.n_states,
                cutoff_1=b1.cutoff,
                cutoff_2=b2.cutoff,
                overlap=o.diagnostics(),
                basis_1=dict(b1.diagnostics),
                basis_2=dict(b2.diagnostics),
            )
        return info


def harmonic_state_count(pair, clip_ratio, label):
    """Levels needed to cover clip_ratio * k_B T on one harmonic axis."""
    units = pair.units
    omega = pair.v1[label].params['omega']
    e_clip = clip_ratio * units.to_internal(units.thermal_energy, ENERGY)
    n_clip = int(math.ceil(e_clip / omega))
    return n_clip + max(HARMONIC_MIN_EXTRA,
                        int(math.ceil(HARMONIC_PADDING * n_clip)))


def build_system(pair, numerics=None, clip_ratio=1.5, n_states=None,
                 with_grid=False, overlap_method='auto'):
    """
    Solve both branches of `pair` on every axis.

    Harmonic pairs use the analytic Hermite basis (sampled on the grid only
    when `with_grid`); other kinds go through `diagonalize`.

    :param n_states: Harmonic basis size per axis; derived from the thermal
    clip when None.
    """
    bases1 = []
    bases2 = []
    for label in pair.axes:
        a1, a2 = pair.v1[label], pair.v2[label]
        if a1.kind == HARMONIC:
            size = n_states or harmonic_state_count(pair, clip_ratio, label)
            bases1.append(harmonic_basis_for(a1, size, with_grid))
            bases2.append(harmonic_basis_for(a2, size, with_grid))
        else:
            bases1.append(diagonalize(a1, numerics))
            bases2.append(diagonalize(a2, numerics))
    return BranchSystem(bases1, bases2, pair=pair,
                        overlap_method=overlap_method)
