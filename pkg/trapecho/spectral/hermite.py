"""
Analytic harmonic-oscillator basis.
"""
import math

import numpy as np

from trapecho.spectral.basis import SpectralBasis

RESCALE_ABOVE = 1e100


def hermite_functions(xi, n_states):
    """
    Normalized Hermite functions h_n(xi), n < n_states, with
    integral h_n^2 dxi = 1, from the three-term recursion

        h_{n+1} = sqrt(2/(n+1)) xi h_n - sqrt(n/(n+1)) h_{n-1}.

    The recursion runs on h_n exp(xi^2 / 2) with a per-point log scale, so
    high states keep their far tails where exp(-xi^2 / 2) alone underflows.

    :return: (len(xi), n_states) array.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.zeros((xi.size, n_states))
    log_scale = -0.5 * xi ** 2
    prev = np.zeros_like(xi)
    cur = np.full_like(xi, math.pi ** -0.25)
    out[:, 0] = _unscale(cur, log_scale)
    for n in range(n_states - 1):
        prev, cur = cur, (math.sqrt(2.0 / (n + 1)) * xi * cur
                          - math.sqrt(n / (n + 1.0)) * prev)
        big = np.abs(cur) > RESCALE_ABOVE
        if np.any(big):
            factor = np.abs(cur[big])
            cur[big] /= factor
            prev[big] /= factor
            log_scale[big] += np.log(factor)
        out[:, n + 1] = _unscale(cur, log_scale)
    return out


def _unscale(values, log_scale):
    with np.errstate(divide='ignore'):
        return np.sign(values) * np.exp(log_scale + np.log(np.abs(values)))


def analytic_harmonic_basis(omega, center, n_states, mass, offset=0.0,
                            grid=None, label='y'):
    """
    Eigenstates of offset + mass omega^2 (q - center)^2 / 2 with hbar = 1.

    :param grid: If given, wavefunctions are sampled on it so the basis can
    be mixed with numeric ones in grid quadrature.
    """
    assert omega > 0 and mass > 0
    energies = offset + omega * (np.arange(n_states) + 0.5)
    wavefunctions = None
    if grid is not None:
        grid = np.asarray(grid, dtype=float)
        alpha = math.sqrt(mass * omega)
        wavefunctions = math.sqrt(alpha) * hermite_functions(
            alpha * (grid - center), n_states)
    return SpectralBasis(
        energies, wavefunctions, grid, label, kind='harmonic',
        params=dict(omega=omega, center=center, offset=offset, mass=mass),
        cutoff=energies[-1] + 0.5 * omega,
    )


def harmonic_basis_for(axis, n_states, with_grid=True):
    """Analytic basis of a harmonic AxisPotential."""
    p = axis.params
    basis = analytic_harmonic_basis(
        p['omega'], p['center'], n_states, p['mass'], offset=p['offset'],
        grid=axis.grid if with_grid else None, label=axis.label)
    basis.potential = axis
    return basis
