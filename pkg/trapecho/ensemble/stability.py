"""
Quantum-stability curve: thermal average of |<n'=n|n>|^4 against eps.
"""
from collections import OrderedDict

import numpy as np
import pandas as pd

from trapecho.core.errors import NumericalValidityError
from trapecho.core.logging import logger
from trapecho.dynamics.system import build_system
from trapecho.ensemble.averaging import ensemble_average, thermal_kT
from trapecho.ensemble.thermal import build_ensemble
from trapecho.potentials.axis import HARMONIC
from trapecho.spectral.overlaps import harmonic_overlaps

CURVE_COLUMNS = ('epsilon', 'avg_Onn4', 'P2_longtime', 'stderr')


class StabilityCurve(object):
    """
    :param stderr: Standard error of each average; zero for exact sums.
    """
    def __init__(self, epsilons, average, breathing=None, sloshing=None,
                 metadata=None, stderr=None):
        self.epsilons = np.asarray(epsilons, dtype=float)
        self.average = np.asarray(average, dtype=float)
        self.stderr = np.zeros_like(self.average) if stderr is None \
            else np.asarray(stderr, dtype=float)
        self.breathing = breathing
        self.sloshing = sloshing
        self.metadata = OrderedDict(metadata or {})

    @property
    def long_time_p2(self):
        return 0.5 * (1.0 - self.average)

    def to_frame(self):
        return pd.DataFrame(OrderedDict([
            ('epsilon', self.epsilons),
            ('avg_Onn4', self.average),
            ('P2_longtime', self.long_time_p2),
            ('stderr', self.stderr),
        ]))

    def describe(self):
        info = OrderedDict(self.metadata)
        if self.breathing is not None:
            info['breathing_only_avg_Onn4'] = list(self.breathing)
            info['sloshing_only_avg_Onn4'] = list(self.sloshing)
        return info


def _padded_diagonal(entries, size):
    diagonal = np.full(size, np.nan)
    values = np.abs(np.diagonal(entries))
    diagonal[:len(values)] = values
    return diagonal


def _average_onn4(ensemble, diagonals):
    return float(np.real(ensemble.separable_sum(
        [d ** 4 for d in diagonals])))


def _sampled_onn4(ensemble, diagonals, subsample, seed):
    def onn4(n):
        return np.prod([d[k] ** 4 for d, k in zip(diagonals, n)])
    estimate = ensemble_average(onn4, ensemble, subsample, seed)
    return float(estimate.value), float(estimate.stderr)


def _split_contributions(system, ensemble):
    """
    Breathing-only (same centers) and sloshing-only (same frequencies)
    averages for a harmonic system.
    """
    breathing = []
    sloshing = []
    for b1, b2 in zip(system.bases1, system.bases2):
        p1, p2 = b1.params, b2.params
        n1, n2 = b1.n_states, b2.n_states
        breathing.append(_padded_diagonal(harmonic_overlaps(
            p1['omega'], p1['center'], p2['omega'], p1['center'],
            p1['mass'], n1, n2), n1))
        sloshing.append(_padded_diagonal(harmonic_overlaps(
            p1['omega'], p1['center'], p1['omega'], p2['center'],
            p1['mass'], n1, n2), n1))
    return (_average_onn4(ensemble, breathing),
            _average_onn4(ensemble, sloshing))


def stability_curve(pair, epsilons, clip_ratio=1.5, numerics=None,
                    n_states=None, overlap_method='auto', subsample=None,
                    seed=0):
    """
    For every eps, rebuild branch 2 of `pair` and average |O_nn|^4 over the
    clipped thermal ensemble of branch 1. The long-time echo level is
    (1 - average) / 2.

    :param epsilons: Physical eps values, ascending and >= 0.
    :param overlap_method: 'quadrature' samples the harmonic bases on the
    grid and integrates instead of using the recursion.
    :param subsample: Estimate each average from a stratified sample of
    this many states, with a standard error, instead of the exact sum.
    :return: StabilityCurve. Harmonic pairs also carry the breathing-only
    and sloshing-only curves.
    """
    epsilons = np.asarray(epsilons, dtype=float)
    if (epsilons.size == 0 or np.any(epsilons < 0)
            or np.any(np.diff(epsilons) < 0)):
        raise ValueError("epsilons must be non-empty, >= 0 and ascending")
    harmonic = pair.kind == HARMONIC
    with_grid = overlap_method == 'quadrature'
    kT = thermal_kT(pair)

    ensemble = None
    average = []
    stderr = []
    breathing = []
    sloshing = []
    for epsilon in epsilons:
        system = build_system(pair.scaled(epsilon), numerics, clip_ratio,
                              n_states, with_grid, overlap_method)
        if ensemble is None:
            ensemble = build_ensemble(system.bases1, kT, clip_ratio)
            logger.log("stability curve over {} thermal states".format(
                ensemble.n_states))
        diagonals = [_padded_diagonal(o.entries, b.n_states)
                     for o, b in zip(system.overlaps.axes, system.bases1)]
        if subsample is None:
            average.append(_average_onn4(ensemble, diagonals))
            stderr.append(0.0)
        else:
            value, error = _sampled_onn4(ensemble, diagonals, subsample,
                                         seed)
            average.append(value)
            stderr.append(error)
        if harmonic:
            b, s = _split_contributions(system, ensemble)
            breathing.append(b)
            sloshing.append(s)
        if not np.isfinite(average[-1]):
            raise NumericalValidityError(
                "branch-2 basis does not cover the thermal ensemble")

    metadata = OrderedDict(
        ensemble=ensemble.describe(),
        basis_sizes=[b.n_states for b in system.bases1],
        overlap_method=overlap_method,
        subsample=subsample,
        seed=None if subsample is None else seed,
    )
    return StabilityCurve(epsilons, average,
                          breathing if harmonic else None,
                          sloshing if harmonic else None, metadata, stderr)
