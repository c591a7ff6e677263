"""
Thermal averages of per-state signals and the RMS-detuning dephasing
estimate.
"""
import math
from collections import OrderedDict, namedtuple

import numpy as np
from joblib import Parallel, delayed

from trapecho.core.errors import NumericalValidityError
from trapecho.core.units import ENERGY, FREQUENCY
from trapecho.dynamics.signals import (
    SignalTrace,
    axis_echo_table,
    axis_ramsey_table,
    to_seconds,
)
from trapecho.pythonplusplus import batch

SAMPLES_PER_STRATUM = 8

EnsembleAverage = namedtuple(
    'EnsembleAverage', ['value', 'stderr', 'n_evaluated', 'seed'])
DephasingEstimate = namedtuple(
    'DephasingEstimate',
    ['delta_rms', 'decay_time', 'mean_detuning', 'degenerate',
     'line_rms_hz', 'line_decay_time'])


def thermal_kT(pair):
    """k_B T of the pair's trap in internal energy units."""
    units = pair.units
    return units.to_internal(units.thermal_energy, ENERGY)


def _evaluate_chunk(per_state_fn, chunk):
    return [per_state_fn(tuple(int(k) for k in index)) for index in chunk]


def _evaluate(per_state_fn, indices, n_jobs, chunk_size):
    chunks = list(batch(indices, chunk_size))
    if n_jobs == 1:
        results = [_evaluate_chunk(per_state_fn, chunk) for chunk in chunks]
    else:
        results = Parallel(n_jobs=n_jobs, backend='threading')(
            delayed(_evaluate_chunk)(per_state_fn, chunk) for chunk in chunks)
    return np.array([value for chunk in results for value in chunk])


def strata_bounds(weights, n_strata):
    """Contiguous [lo, hi) blocks holding about equal total weight."""
    cumulative = np.cumsum(weights)
    targets = np.linspace(0.0, cumulative[-1], n_strata + 1)[1:-1]
    edges = np.searchsorted(cumulative, targets, side='right')
    bounds = np.unique(np.concatenate([[0], edges, [len(weights)]]))
    return list(zip(bounds[:-1], bounds[1:]))


def ensemble_average(per_state_fn, ensemble, subsample=None, seed=0,
                     n_jobs=1, chunk_size=64):
    """
    sum_n w_n per_state_fn(n) over the ensemble, in ascending-energy order.

    Parallel evaluation only changes who computes each term; the reduction
    order is fixed, so results are bitwise identical to a serial run.

    :param per_state_fn: Maps an index tuple to a scalar or an array.
    :param subsample: When smaller than the ensemble, estimate the sum by
    stratified sampling: energy-ordered strata of equal weight, states
    drawn within each stratum in proportion to their weight.
    :return: EnsembleAverage(value, stderr, n_evaluated, seed). stderr is
    0 for the full sum.
    """
    indices = ensemble.indices
    weights = ensemble.weights
    if subsample is None or subsample >= len(weights):
        values = _evaluate(per_state_fn, indices, n_jobs, chunk_size)
        value = np.tensordot(weights, values, axes=1)
        return EnsembleAverage(value, np.zeros_like(value, dtype=float),
                               len(weights), None)

    rng = np.random.RandomState(seed)
    n_strata = max(1, subsample // SAMPLES_PER_STRATUM)
    per_stratum = max(2, subsample // n_strata)
    plan = []
    for lo, hi in strata_bounds(weights, n_strata):
        stratum_weight = float(np.sum(weights[lo:hi]))
        if hi - lo <= per_stratum:
            plan.append((stratum_weight, np.arange(lo, hi), True))
        else:
            picks = rng.choice(np.arange(lo, hi), size=per_stratum,
                               replace=True,
                               p=weights[lo:hi] / stratum_weight)
            plan.append((stratum_weight, picks, False))

    picked = np.concatenate([rows for _, rows, _ in plan])
    values = _evaluate(per_state_fn, indices[picked], n_jobs, chunk_size)
    value = 0.0
    variance = 0.0
    start = 0
    for stratum_weight, rows, exact in plan:
        block = values[start:start + len(rows)]
        start += len(rows)
        if exact:
            value = value + np.tensordot(weights[rows], block, axes=1)
        else:
            value = value + stratum_weight * np.mean(block, axis=0)
            variance = variance + stratum_weight ** 2 * np.var(
                block, axis=0, ddof=1) / len(rows)
    stderr = np.sqrt(np.abs(variance) + np.zeros_like(np.abs(value)))
    return EnsembleAverage(value, stderr, len(picked), seed)


def _axis_detunings(system):
    """nu_a[n] = E2_a[n] - E1_a[n] per axis; NaN where branch 2 is short."""
    detunings = []
    for b1, b2 in zip(system.bases1, system.bases2):
        nu = np.full(b1.n_states, np.nan)
        m = min(b1.n_states, b2.n_states)
        nu[:m] = b2.energies[:m] - b1.energies[:m]
        detunings.append(nu)
    return detunings


def _axis_moment(ensemble, factors_by_axis):
    factors = [np.ones(size) for size in ensemble.shape]
    for axis_index, factor in factors_by_axis.items():
        factors[axis_index] = factors[axis_index] * factor
    return float(np.real(ensemble.separable_sum(factors)))


def delta_rms(system, ensemble):
    """
    Weighted RMS spread of the |n> -> |n'=n> resonance frequencies
    nu_n = (E2_n - E1_n) / hbar and the Ramsey decay estimate
    1 / (2 Delta_RMS).

    Frequencies are angular (rad/s) and times in seconds when the system
    carries a PotentialPair, internal units otherwise.

    Next to the spread about the mean, `line_rms_hz` is the RMS offset
    of the lines from the trap-bottom line nu_0, in cycles per unit time,
    and `line_decay_time` = 1 / (2 line_rms_hz). That reading lands on the
    directly averaged contrast 1/e time within tens of percent for a
    clipped 2D harmonic ensemble; 1 / (2 Delta_RMS) falls short of it by a
    factor of about 2.6.

    :return: DephasingEstimate. A single-state ensemble or a vanishing
    spread gives decay_time = inf with `degenerate` set.
    """
    detunings = _axis_detunings(system)
    centers = [nu[0] for nu in detunings]
    shifted = [nu - c for nu, c in zip(detunings, centers)]
    mean = sum(_axis_moment(ensemble, {a: d}) for a, d in enumerate(shifted))
    second = sum(_axis_moment(ensemble, {a: d ** 2})
                 for a, d in enumerate(shifted))
    for a in range(len(shifted)):
        for b in range(a + 1, len(shifted)):
            second += 2 * _axis_moment(ensemble, {a: shifted[a],
                                                  b: shifted[b]})
    if not (math.isfinite(mean) and math.isfinite(second)):
        raise NumericalValidityError(
            "branch-2 basis does not cover the thermal ensemble")
    spread = math.sqrt(max(second - mean ** 2, 0.0))
    line_rms = math.sqrt(max(second, 0.0))
    mean = mean + sum(centers)
    if system.pair is not None:
        units = system.pair.units
        spread = units.from_internal(spread, FREQUENCY)
        line_rms = units.from_internal(line_rms, FREQUENCY)
        mean = units.from_internal(mean, FREQUENCY)
    line_rms_hz = line_rms / (2 * math.pi)
    degenerate = ensemble.n_states < 2 or spread == 0.0
    decay_time = math.inf if degenerate else 1.0 / (2.0 * spread)
    line_decay_time = math.inf if line_rms_hz == 0.0 \
        else 1.0 / (2.0 * line_rms_hz)
    return DephasingEstimate(spread, decay_time, mean, degenerate,
                             line_rms_hz, line_decay_time)


def ensemble_trace(system, ensemble, tau, detuning=0.0, n_jobs=1,
                   label='thermal'):
    """
    Thermally averaged Ramsey fringe and echo signal on a tau grid, using
    per-axis tables and factorized sums.

    :param tau: Internal pulse separations.
    :param detuning: Microwave detuning for the Ramsey fringe (internal).
    :return: (ramsey SignalTrace with the averaged contrast, echo
    SignalTrace).
    """
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    overlaps = system.overlaps.axes
    coherence = ensemble.separable_sum(
        [axis_ramsey_table(o, tau) for o in overlaps])
    transfer = ensemble.separable_sum([o.column_norms() for o in overlaps])
    echo = ensemble.separable_sum(
        [axis_echo_table(o, tau, n_jobs) for o in overlaps])

    metadata = OrderedDict(ensemble.describe())
    tau_s = to_seconds(system, tau)
    ramsey = SignalTrace(
        tau_s,
        np.clip(0.5 * (transfer + np.real(coherence
                                          * np.exp(1j * detuning * tau))),
                0.0, 1.0),
        contrast=np.abs(coherence),
        label=label,
        metadata=OrderedDict(metadata, sequence='ramsey', detuning=detuning),
    )
    echo_trace = SignalTrace(
        tau_s, np.clip(0.5 * (1.0 - np.real(echo)), 0.0, 1.0), label=label,
        metadata=OrderedDict(metadata, sequence='echo'),
    )
    return ramsey, echo_trace
