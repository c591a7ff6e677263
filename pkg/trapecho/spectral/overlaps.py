"""
Franck-Condon overlaps O[n', n] = <n'(branch 2) | n(branch 1)>.

Numeric bases use grid quadrature. Pairs of harmonic bases use a two-term
recursion for scaled and displaced oscillators that stays finite for
thousands of levels, where factorial closed forms overflow.
"""
import math
import os.path as osp
from collections import OrderedDict

import numpy as np
import pandas as pd

from trapecho.core.errors import NumericalValidityError
from trapecho.core.eval_util import column_norm_diagnostics
from trapecho.core.logging import mkdir_p


class OverlapMatrix(object):
    """
    :param entries: (n2, n1) array, rows index branch-2 states.
    """
    def __init__(self, entries, basis1, basis2, method):
        assert entries.shape == (basis2.n_states, basis1.n_states)
        self.entries = entries
        self.basis1 = basis1
        self.basis2 = basis2
        self.method = method

    @property
    def shape(self):
        return self.entries.shape

    def column_norms(self):
        return np.sum(np.abs(self.entries) ** 2, axis=0)

    def diagonal(self):
        return np.diagonal(self.entries)

    def diagnostics(self, n_reported=None):
        info = column_norm_diagnostics(self.column_norms(), n_reported)
        info['method'] = self.method
        return info


def ground_overlap(omega1, omega2, mass, displacement=0.0):
    """
    <0'|0> for oscillators of frequencies omega1, omega2 whose centers
    differ by `displacement`; hbar = 1.
    """
    ratio = omega2 / omega1
    scaling = math.sqrt(2.0 * math.sqrt(ratio) / (1.0 + ratio))
    return scaling * math.exp(
        -0.5 * mass * omega1 * omega2 * displacement ** 2 / (omega1 + omega2))


def harmonic_overlaps(omega1, center1, omega2, center2, mass, n1, n2):
    """
    Overlap matrix S[m, n] = <m_2|n_1> between Hermite bases.

    With rho = sqrt(omega2/omega1), mu = (rho + 1/rho)/2,
    nu = (rho - 1/rho)/2 and the ladder-operator relation
    b = mu a + nu a^dagger + delta:

        S[m+1, 0] = (nu sqrt(m) S[m-1, 0] - delta' S[m, 0]) / (mu sqrt(m+1))
        S[m, n+1] = (sqrt(m) S[m-1, n] - nu sqrt(n) S[m, n-1]
                     - delta S[m, n]) / (mu sqrt(n+1))

    with delta = sqrt(mass omega2 / 2) (center1 - center2) and
    delta' = -sqrt(mass omega1 / 2) (center1 - center2).
    """
    rho = math.sqrt(omega2 / omega1)
    mu = 0.5 * (rho + 1.0 / rho)
    nu = 0.5 * (rho - 1.0 / rho)
    shift = center1 - center2
    delta = math.sqrt(0.5 * mass * omega2) * shift
    delta_p = -math.sqrt(0.5 * mass * omega1) * shift

    overlaps = np.zeros((n2, n1))
    column = overlaps[:, 0]
    column[0] = ground_overlap(omega1, omega2, mass, shift)
    for m in range(n2 - 1):
        previous = column[m - 1] if m > 0 else 0.0
        column[m + 1] = (nu * math.sqrt(m) * previous
                         - delta_p * column[m]) / (mu * math.sqrt(m + 1))

    sqrt_m = np.sqrt(np.arange(n2))
    for n in range(n1 - 1):
        lowered = np.zeros(n2)
        lowered[1:] = sqrt_m[1:] * overlaps[:-1, n]
        previous = overlaps[:, n - 1] if n > 0 else 0.0
        overlaps[:, n + 1] = (lowered - nu * math.sqrt(n) * previous
                              - delta * overlaps[:, n]) \
            / (mu * math.sqrt(n + 1))
    return overlaps


def _quadrature(basis1, basis2):
    if basis1.wavefunctions is None or basis2.wavefunctions is None:
        raise ValueError("grid quadrature needs sampled wavefunctions")
    if not np.array_equal(basis1.grid, basis2.grid):
        raise ValueError(
            "basis-grid mismatch on axis {}".format(basis1.label))
    return basis1.spacing * basis2.wavefunctions.T @ basis1.wavefunctions


def overlap_matrix(basis1, basis2, method='auto'):
    """
    :param method: 'auto' (recursion when both bases are harmonic),
    'recursion' or 'quadrature'.
    :return: OverlapMatrix of shape (basis2.n_states, basis1.n_states).
    """
    harmonic = basis1.is_harmonic and basis2.is_harmonic
    if method == 'auto':
        method = 'recursion' if harmonic else 'quadrature'
    if method == 'recursion':
        if not harmonic:
            raise ValueError("recursion needs two harmonic bases")
        p1, p2 = basis1.params, basis2.params
        assert math.isclose(p1['mass'], p2['mass'])
        entries = harmonic_overlaps(
            p1['omega'], p1['center'], p2['omega'], p2['center'],
            p1['mass'], basis1.n_states, basis2.n_states)
        norms = np.sum(entries ** 2, axis=0)
        if np.max(norms) > 1.0 + 1e-8 or not np.all(np.isfinite(entries)):
            raise NumericalValidityError(
                "overlap recursion lost accuracy (column norm {:.3e})".format(
                    np.max(norms)))
    elif method == 'quadrature':
        entries = _quadrature(basis1, basis2)
    else:
        raise ValueError("Unknown overlap method: {}".format(method))
    return OverlapMatrix(entries, basis1, basis2, method)


class TensorOverlap(object):
    """
    Separable multi-axis overlap
    O[(n'_x, n'_y), (n_x, n_y)] = O^x[n'_x, n_x] * O^y[n'_y, n_y],
    applied axis by axis so the full matrix is never formed.
    """
    def __init__(self, axes):
        assert len(axes) >= 1
        self.axes = list(axes)

    @property
    def ndim(self):
        return len(self.axes)

    @property
    def shape1(self):
        return tuple(o.shape[1] for o in self.axes)

    @property
    def shape2(self):
        return tuple(o.shape[0] for o in self.axes)

    def element(self, rows, cols):
        """
        :param rows: Per-axis branch-2 indices (ints or broadcastable arrays).
        :param cols: Per-axis branch-1 indices.
        """
        value = 1.0
        for o, row, col in zip(self.axes, rows, cols):
            value = value * o.entries[row, col]
        return value

    def diagonal(self, indices):
        """
        :param indices: (n_points, ndim) integer array of states.
        """
        indices = np.atleast_2d(indices)
        return self.element(indices.T, indices.T)

    def column_norms(self, indices):
        indices = np.atleast_2d(indices)
        value = 1.0
        for axis_index, o in enumerate(self.axes):
            value = value * o.column_norms()[indices[:, axis_index]]
        return value

    def column(self, index):
        """Dense column O[:, index] as an nd-array over branch-2 states."""
        out = np.ones(())
        for o, n in zip(self.axes, index):
            out = np.multiply.outer(out, o.entries[:, n])
        return out

    def _contract(self, amplitudes, matrices):
        for axis_index, matrix in enumerate(matrices):
            amplitudes = np.moveaxis(
                np.tensordot(matrix, amplitudes, axes=([1], [axis_index])),
                0, axis_index)
        return amplitudes

    def apply(self, amplitudes):
        """Branch-1 amplitudes -> branch-2 amplitudes."""
        return self._contract(amplitudes, [o.entries for o in self.axes])

    def apply_adjoint(self, amplitudes):
        """Branch-2 amplitudes -> branch-1 amplitudes."""
        return self._contract(amplitudes,
                              [o.entries.conj().T for o in self.axes])


def tensor_overlap(axes):
    return TensorOverlap(axes)


def export_basis_csv(basis, path, units=None):
    """Columns n, energy (internal) and energy_J when `units` is given."""
    mkdir_p(osp.dirname(path))
    columns = OrderedDict([('n', np.arange(basis.n_states)),
                           ('energy', basis.energies)])
    if units is not None:
        columns['energy_J'] = units.from_internal(basis.energies, 'energy')
    pd.DataFrame(columns).to_csv(path, index=False, float_format='%.12e')
    return path


def export_overlap_csv(overlap, path, block=None):
    """Long-format n_prime, n, overlap for the leading `block` states."""
    mkdir_p(osp.dirname(path))
    entries = overlap.entries
    if block is not None:
        entries = entries[:block, :block]
    n_prime, n = np.indices(entries.shape)
    frame = pd.DataFrame(OrderedDict([
        ('n_prime', n_prime.ravel()),
        ('n', n.ravel()),
        ('overlap', entries.ravel()),
    ]))
    frame.to_csv(path, index=False, float_format='%.12e')
    return path
