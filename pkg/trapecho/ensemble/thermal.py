"""
Clipped Boltzmann ensembles over separable motional states.
"""
from collections import OrderedDict

import numpy as np

# Keeps the ground state inside the clip when k_B T -> 0.
GROUND_MARGIN = 1e-9


def energy_floor(basis):
    """Bottom of the potential a basis belongs to (internal energy)."""
    if basis.is_harmonic:
        return basis.params['offset']
    if basis.potential is not None:
        return basis.potential.minimum
    return basis.energies[0]


def factorized_sum(values_x, energies_x, values_y, energies_y, threshold):
    """
    sum over (i, j) with energies_x[i] + energies_y[j] < threshold of
    values_x[i] * values_y[j], in O((nx + ny) log ny).

    Trailing dimensions of the value arrays (e.g. a tau grid) broadcast.
    The pair (i, j) is kept when energies_y[j] < threshold - energies_x[i].
    """
    values_x = np.asarray(values_x)
    values_y = np.asarray(values_y)
    order = np.argsort(energies_y, kind='stable')
    sorted_y = np.asarray(energies_y)[order]
    partial = np.cumsum(values_y[order], axis=0)
    partial = np.concatenate(
        [np.zeros((1,) + partial.shape[1:], dtype=partial.dtype), partial])
    counts = np.searchsorted(sorted_y, threshold - np.asarray(energies_x),
                             side='left')
    return np.einsum('i...,i...->...', values_x, partial[counts])


class ThermalEnsemble(object):
    """
    Boltzmann weights exp(-E / k_B T) over the states with
    E < clip_ratio * k_B T, energies measured from the bottom of the
    branch-1 potential. The ground state is always included.

    Per-axis quantities stay separate so that averages of factorizing
    observables never enumerate the full product space; `indices` and
    `weights` enumerate it on first use, in ascending energy (ties broken
    by index).

    :param axis_energies: Per-axis energies relative to the potential floor.
    :param kT: k_B T in internal energy units.
    """
    def __init__(self, axis_energies, kT, clip_ratio, labels=None):
        if not kT > 0:
            raise ValueError("k_B T must be > 0, got {}".format(kT))
        if not clip_ratio > 0:
            raise ValueError("clip_ratio must be > 0")
        assert 1 <= len(axis_energies) <= 2
        self.axis_energies = [np.asarray(e, dtype=float)
                              for e in axis_energies]
        self.kT = kT
        self.clip_ratio = clip_ratio
        if labels is None:
            labels = ['y'] if len(axis_energies) == 1 else ['x', 'y']
        self.labels = list(labels)
        ground = sum(e[0] for e in self.axis_energies)
        self.threshold = max(clip_ratio * kT,
                             ground * (1.0 + GROUND_MARGIN))
        self.ground_energy = ground
        self._boltzmann = [np.exp(-(e - e[0]) / kT)
                           for e in self.axis_energies]
        self.partition = float(self.separable_sum(
            [np.ones_like(e) for e in self.axis_energies], normalized=False))
        self._enumerated = None

    @property
    def ndim(self):
        return len(self.axis_energies)

    @property
    def shape(self):
        return tuple(len(e) for e in self.axis_energies)

    def separable_sum(self, factors, normalized=True):
        """
        sum_n w_n prod_a factors[a][n_a] over the clipped ensemble.

        :param factors: One array per axis, leading dimension the axis basis
        size; trailing dimensions broadcast.
        """
        assert len(factors) == self.ndim
        weighted = [self._weighted(b, f)
                    for b, f in zip(self._boltzmann, factors)]
        if self.ndim == 1:
            mask = self.axis_energies[0] < self.threshold
            total = np.sum(weighted[0][mask], axis=0)
        else:
            total = factorized_sum(weighted[0], self.axis_energies[0],
                                   weighted[1], self.axis_energies[1],
                                   self.threshold)
        if normalized:
            return total / self.partition
        return total

    @staticmethod
    def _weighted(boltzmann, factor):
        factor = np.asarray(factor)
        return boltzmann.reshape((-1,) + (1,) * (factor.ndim - 1)) * factor

    def _count(self):
        if self.ndim == 1:
            return int(np.count_nonzero(self.axis_energies[0]
                                        < self.threshold))
        ex, ey = self.axis_energies
        sorted_y = np.sort(ey)
        return int(np.sum(np.searchsorted(sorted_y, self.threshold - ex,
                                          side='left')))

    def _enumerate(self):
        if self._enumerated is not None:
            return self._enumerated
        if self.ndim == 1:
            energies = self.axis_energies[0]
            keep = np.flatnonzero(energies < self.threshold)
            indices = keep[:, None]
            total = energies[keep]
        else:
            ex, ey = self.axis_energies
            keep = ey[None, :] < (self.threshold - ex)[:, None]
            ix, iy = np.nonzero(keep)
            indices = np.stack([ix, iy], axis=1)
            total = ex[ix] + ey[iy]
        # Ascending energy, then index order.
        keys = [indices[:, a] for a in reversed(range(self.ndim))] + [total]
        order = np.lexsort(keys)
        indices = indices[order]
        total = total[order]
        weights = np.exp(-(total - total[0]) / self.kT)
        weights = weights / np.sum(weights)
        self._enumerated = indices, weights, total
        return self._enumerated

    @property
    def indices(self):
        """(n_states, ndim) quantum numbers in ascending energy."""
        return self._enumerate()[0]

    @property
    def weights(self):
        return self._enumerate()[1]

    @property
    def energies(self):
        return self._enumerate()[2]

    @property
    def n_states(self):
        return self._count()

    def describe(self):
        return OrderedDict(
            kT=self.kT,
            clip_ratio=self.clip_ratio,
            threshold=self.threshold,
            n_states=self.n_states,
            axis_sizes=list(self.shape),
            axis_levels_below_clip=[
                int(np.count_nonzero(e < self.threshold))
                for e in self.axis_energies
            ],
        )


def build_ensemble(bases, kT, clip_ratio=1.5):
    """
    Clipped thermal ensemble over the branch-1 bases.

    :param bases: One SpectralBasis per axis (branch 1).
    :param kT: k_B T in internal energy units.
    """
    axis_energies = [basis.energies - energy_floor(basis) for basis in bases]
    return ThermalEnsemble(axis_energies, kT, clip_ratio,
                           labels=[basis.label for basis in bases])
