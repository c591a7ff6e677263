"""
Detuning scans and sideband analysis.
"""
import math
from collections import OrderedDict

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy.signal import find_peaks

from trapecho.core.units import FREQUENCY
from trapecho.ensemble.averaging import ensemble_average
from trapecho.pythonplusplus import batch
from trapecho.spectroscopy.rabi import RabiWindow, evolve_rabi, \
    state_spectrum

SPECTRUM_COLUMNS = ('detuning_hz', 'P2', 'stderr')
SIDEBAND_ORDERS = (-2, -1, 1, 2)
SIDEBAND_TOLERANCE = 0.1


class Spectrum(object):
    """
    :param detunings: Angular detunings (rad/s, or internal when the system
    has no units attached).
    """
    def __init__(self, detunings, p2, stderr=None, metadata=None):
        self.detunings = np.asarray(detunings, dtype=float)
        self.p2 = np.asarray(p2, dtype=float)
        self.stderr = np.zeros_like(self.p2) if stderr is None \
            else np.asarray(stderr, dtype=float)
        self.metadata = OrderedDict(metadata or {})

    def to_frame(self):
        return pd.DataFrame(OrderedDict([
            ('detuning_hz', self.detunings / (2 * math.pi)),
            ('P2', self.p2),
            ('stderr', self.stderr),
        ]))


def _to_angular(system, values):
    if system.pair is None:
        return np.asarray(values, dtype=float)
    return system.pair.units.from_internal(np.asarray(values, dtype=float),
                                           FREQUENCY)


def _detuning_chunk(system, n0, problem, window, detunings):
    return [evolve_rabi(system, n0, problem, d, window) for d in detunings]


def scan_spectrum(system, problem, ensemble=None, n0=0, subsample=None,
                  seed=0, n_jobs=1):
    """
    P2 against microwave detuning after one pulse.

    Without an ensemble the single state n0 is scanned, with the detuning
    grid split across `n_jobs` threads. With an ensemble every initial
    state is scanned and averaged (stratified when `subsample` is set);
    reductions keep a fixed order either way.
    """
    metadata = OrderedDict(problem.to_dict())
    if ensemble is None:
        window = RabiWindow(system, n0, problem)
        chunks = list(batch(problem.detunings,
                            max(1, int(math.ceil(len(problem.detunings)
                                                 / n_jobs)))))
        if n_jobs == 1:
            parts = [_detuning_chunk(system, n0, problem, window, chunk)
                     for chunk in chunks]
        else:
            parts = Parallel(n_jobs=n_jobs, backend='threading')(
                delayed(_detuning_chunk)(system, n0, problem, window, chunk)
                for chunk in chunks)
        p2 = np.array([value for part in parts for value in part])
        stderr = None
        metadata.update(initial_state=list(window.index),
                        window=[list(r) for r in window.ranges],
                        captured_transfer_weight=window.captured)
    else:
        result = ensemble_average(
            lambda index: state_spectrum(system, index, problem),
            ensemble, subsample=subsample, seed=seed, n_jobs=n_jobs,
            chunk_size=1)
        p2 = result.value
        stderr = result.stderr
        metadata.update(n_evaluated=result.n_evaluated, seed=result.seed,
                        ensemble=ensemble.describe())
    return Spectrum(_to_angular(system, problem.detunings),
                    np.clip(p2, 0.0, 1.0), stderr, metadata)


def sideband_report(spectrum, omega_osc, carrier=None):
    """
    Locate the carrier and the sidebands at carrier + k omega_osc,
    k in (-2, -1, 1, 2).

    A sideband is the highest local maximum within 10% of omega_osc of its
    nominal offset; absent peaks are reported with zero amplitude.

    :param omega_osc: Trap angular frequency, same units as the detunings.
    :param carrier: Expected carrier detuning; the global maximum when None.
    Strong pulses split the carrier, so pass the resonance explicitly there.
    """
    detunings = spectrum.detunings
    p2 = spectrum.p2
    window = SIDEBAND_TOLERANCE * omega_osc
    if carrier is None:
        carrier = detunings[int(np.argmax(p2))]
    near_carrier = np.abs(detunings - carrier) <= window
    carrier_p2 = float(np.max(p2[near_carrier])) if np.any(near_carrier) \
        else float(np.interp(carrier, detunings, p2))

    peaks, _ = find_peaks(p2)
    report = OrderedDict(carrier_detuning=float(carrier),
                         carrier_p2=carrier_p2,
                         omega_osc=float(omega_osc))
    ratios = []
    for order in SIDEBAND_ORDERS:
        nominal = carrier + order * omega_osc
        candidates = peaks[np.abs(detunings[peaks] - nominal) <= window]
        if candidates.size:
            best = candidates[int(np.argmax(p2[candidates]))]
            location = float(detunings[best])
            amplitude = float(p2[best])
            offset = (location - carrier) / omega_osc
        else:
            location, amplitude, offset = math.nan, 0.0, math.nan
        ratio = amplitude / carrier_p2 if carrier_p2 > 0 else math.inf
        ratios.append(ratio)
        report['sideband_{:+d}'.format(order)] = OrderedDict(
            detuning=location,
            p2=amplitude,
            ratio_to_carrier=ratio,
            offset_in_omega_osc=offset,
        )
    report['max_sideband_ratio'] = float(max(ratios))
    return report
