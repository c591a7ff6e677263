"""
Closed-form Ramsey and echo signals for single motional states.

All times and energies are internal (hbar_eff = 1). Multi-axis systems are
separable, so every per-state amplitude is the product of per-axis
amplitudes; the `axis_*_table` helpers evaluate one axis on a whole tau
grid at once and the ensemble module multiplies them together.
"""
from collections import OrderedDict

import numpy as np
import pandas as pd
import scipy.linalg
from joblib import Parallel, delayed

from trapecho.core.units import TIME
from trapecho.pythonplusplus import batch

TRACE_COLUMNS = ('tau_s', 'P2', 'contrast', 'n_index_or_ensemble')


class SignalTrace(object):
    """
    P2 sampled on a grid of pulse separations.

    :param tau_s: Pulse separations in seconds.
    :param p2: Branch-2 population per tau, in [0, 1].
    :param contrast: Optional Ramsey contrast per tau.
    :param label: State index ("3" or "3-7") or ensemble id.
    """
    def __init__(self, tau_s, p2, contrast=None, label='', metadata=None):
        self.tau_s = np.asarray(tau_s, dtype=float)
        self.p2 = np.asarray(p2, dtype=float)
        assert self.tau_s.shape == self.p2.shape
        self.contrast = None if contrast is None else np.asarray(
            contrast, dtype=float)
        self.label = label
        self.metadata = OrderedDict(metadata or {})

    def __len__(self):
        return len(self.tau_s)

    def to_frame(self):
        contrast = self.contrast if self.contrast is not None \
            else np.full_like(self.p2, np.nan)
        return pd.DataFrame(OrderedDict([
            ('tau_s', self.tau_s),
            ('P2', self.p2),
            ('contrast', contrast),
            ('n_index_or_ensemble', [self.label] * len(self)),
        ]))


def state_label(index):
    return '-'.join(str(k) for k in index)


def to_seconds(system, tau):
    if system.pair is None:
        return np.asarray(tau, dtype=float)
    return system.pair.units.from_internal(np.asarray(tau, dtype=float), TIME)


"""
Per-axis tables
"""


def axis_ramsey_table(overlap, tau):
    """
    G[n, t] = sum_n' |O[n', n]|^2 exp(-i (E2[n'] - E1[n]) tau[t]).

    :return: (n1, len(tau)) complex array.
    """
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    e1 = overlap.basis1.energies
    e2 = overlap.basis2.energies
    weights = np.abs(overlap.entries) ** 2
    table = weights.T @ np.exp(-1j * np.outer(e2, tau))
    return table * np.exp(1j * np.outer(e1, tau))


def _echo_columns(overlap, tau_chunk):
    e1 = overlap.basis1.energies
    e2 = overlap.basis2.energies
    o = overlap.entries
    out = np.empty((len(e1), len(tau_chunk)), dtype=complex)
    for t, tau in enumerate(tau_chunk):
        # A = O^dagger exp(-i E2 tau) O, column n is exp(-i H2 tau)|n> in
        # the branch-1 basis.
        a = o.conj().T @ (np.exp(-1j * e2 * tau)[:, None] * o)
        phase1 = np.exp(-1j * e1 * tau)
        out[:, t] = np.conj(phase1) * ((np.abs(a) ** 2).T @ phase1)
    return out


def axis_echo_table(overlap, tau, n_jobs=1):
    """
    Echo overlap per state, V[n, t] = exp(i E1[n] tau) <phi_n(0)|phi_n(tau)>
    with |phi_n(0)> = exp(-i H2 tau)|n> written in the branch-1 basis.

    :param n_jobs: Threads used over chunks of the tau grid; chunks are
    joined in grid order.
    :return: (n1, len(tau)) complex array.
    """
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if n_jobs == 1 or len(tau) < 2 * n_jobs:
        return _echo_columns(overlap, tau)
    chunk = int(np.ceil(len(tau) / n_jobs))
    parts = Parallel(n_jobs=n_jobs, backend='threading')(
        delayed(_echo_columns)(overlap, list(piece))
        for piece in batch(tau, chunk)
    )
    return np.concatenate(parts, axis=1)


"""
Single-state signals
"""


def _ramsey_amplitude(system, n, tau):
    index = system.index(n)
    value = np.ones(np.shape(tau), dtype=complex)
    for overlap, k in zip(system.overlaps.axes, index):
        value = value * axis_ramsey_table(overlap, tau)[k].reshape(
            np.shape(tau))
    return value


def ramsey_contrast(system, n, tau):
    """
    Fringe contrast |sum_n' |O[n', n]|^2 exp(-i E2[n'] tau)| and the
    generalized detuning Delta_n of state n.

    Delta_n makes exp(i Delta_n tau) sum_n' |O|^2 exp(-i (E2[n'] - E1[n]) tau)
    real and positive. The phase is unwrapped around E2[n] - E1[n], which is
    also the value reported at tau = 0.

    :return: (contrast, detuning), scalars or arrays shaped like `tau`.
    """
    index = system.index(n)
    tau = np.asarray(tau, dtype=float)
    reference = system.energies2[index] - system.energies1[index]
    amplitude = _ramsey_amplitude(system, index, tau)
    contrast = np.abs(amplitude)
    winding = np.angle(amplitude * np.exp(1j * reference * tau))
    with np.errstate(divide='ignore', invalid='ignore'):
        detuning = np.where(tau == 0, reference,
                            reference - winding / np.where(tau == 0, 1, tau))
    if contrast.ndim == 0:
        return float(contrast), float(detuning)
    return contrast, detuning


def ramsey_fringe(system, n, tau, detuning=0.0):
    """
    P2 after pi/2 - tau - pi/2 for the initial state |1>|n>,

        P2 = (c_n + contrast cos((detuning - Delta_n) tau)) / 2,

    with c_n the column norm of O (1 for a complete basis).
    """
    index = system.index(n)
    tau = np.asarray(tau, dtype=float)
    column_norm = float(system.overlaps.column_norms([index])[0])
    amplitude = _ramsey_amplitude(system, index, tau)
    return 0.5 * (column_norm + np.real(amplitude * np.exp(1j * detuning
                                                          * tau)))


def echo_signal(system, n, tau, route='phi'):
    """
    P2 after pi/2 - tau - pi - tau - pi/2,

        P2 = (1 - Re[exp(i E1_n tau) <phi_n(0)|phi_n(tau)>]) / 2.

    Independent of the microwave detuning and of E_HF.

    :param route: 'phi' evaluates the overlap of the two echo states axis by
    axis; 'propagators' applies the four branch propagators to the full
    amplitude array.
    """
    index = system.index(n)
    tau = np.asarray(tau, dtype=float)
    if route == 'phi':
        value = np.ones(np.shape(tau), dtype=complex)
        for overlap, k in zip(system.overlaps.axes, index):
            value = value * axis_echo_table(overlap, tau)[k].reshape(
                np.shape(tau))
    elif route == 'propagators':
        value = np.array([_four_propagators(system, index, t)
                          for t in np.ravel(tau)]).reshape(np.shape(tau))
    else:
        raise ValueError("Unknown echo route: {}".format(route))
    p2 = 0.5 * (1.0 - np.real(value))
    return float(p2) if p2.ndim == 0 else p2


def _four_propagators(system, index, tau):
    """<n| e^{iH1 t} e^{iH2 t} e^{-iH1 t} e^{-iH2 t} |n> in the branch-1
    basis."""
    phase1 = np.exp(-1j * system.energies1 * tau)
    phase2 = np.exp(-1j * system.energies2 * tau)
    overlaps = system.overlaps
    amp = np.zeros(system.shape1, dtype=complex)
    amp[index] = 1.0
    amp = overlaps.apply_adjoint(phase2 * overlaps.apply(amp))
    amp = phase1 * amp
    amp = overlaps.apply_adjoint(np.conj(phase2) * overlaps.apply(amp))
    amp = np.conj(phase1) * amp
    return amp[index]


def long_time_echo(system, n):
    """
    Random-phase plateau of the echo signal, (1 - |O_nn|^4) / 2.
    """
    index = system.index(n)
    diagonal = system.overlaps.diagonal([index])[0]
    return 0.5 * (1.0 - np.abs(diagonal) ** 4)


"""
Dense oracles on a shared small basis
"""


def survival_amplitude_dense(h1, h2, psi, tau):
    """<psi| e^{i H1 tau} e^{-i H2 tau} |psi> by matrix exponentials."""
    forward = scipy.linalg.expm(-1j * h2 * tau) @ psi
    return np.vdot(scipy.linalg.expm(-1j * h1 * tau) @ psi, forward)


def echo_signal_dense(h1, h2, psi, tau):
    """
    Brute-force echo P2 from the four propagators,

        (1 - Re <psi| e^{iH1 t} e^{iH2 t} e^{-iH1 t} e^{-iH2 t} |psi>) / 2.

    :param h1: Dense branch-1 Hamiltonian (hyperfine offset excluded).
    :param h2: Dense branch-2 Hamiltonian on the same basis.
    :param psi: Initial motional state, an eigenvector of h1.
    """
    u1 = scipy.linalg.expm(-1j * h1 * tau)
    u2 = scipy.linalg.expm(-1j * h2 * tau)
    chain = u1.conj().T @ (u2.conj().T @ (u1 @ (u2 @ psi)))
    return 0.5 * (1.0 - np.real(np.vdot(psi, chain)))


"""
Traces
"""


def ramsey_trace(system, n, tau, detuning=0.0):
    index = system.index(n)
    contrast, shift = ramsey_contrast(system, index, np.asarray(tau))
    p2 = ramsey_fringe(system, index, tau, detuning)
    return SignalTrace(
        to_seconds(system, tau), p2, contrast, label=state_label(index),
        metadata=OrderedDict(sequence='ramsey', detuning=detuning,
                             generalized_detuning_at_first_tau=float(
                                 np.ravel(shift)[0])),
    )


def echo_trace(system, n, tau):
    index = system.index(n)
    p2 = echo_signal(system, index, np.asarray(tau))
    return SignalTrace(
        to_seconds(system, tau), p2, label=state_label(index),
        metadata=OrderedDict(sequence='echo',
                             long_time_p2=float(long_time_echo(system,
                                                               index))),
    )
