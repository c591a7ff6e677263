"""
Finite microwave pulses in the rotating frame.

On a window of motional states around the initial state n0,

    H = [[ D1,          (Omega/2) O^dagger ],
         [ (Omega/2) O, D2 - detuning      ]],

with D1, D2 the branch energies measured from E1[n0]. The free-space
matrix element is absorbed into Omega.
"""
import math
from collections import OrderedDict

import numpy as np
import scipy.linalg

from trapecho.core.errors import NumericalValidityError
from trapecho.core.units import FREQUENCY, TIME

DEFAULT_RABI_FREQUENCY = 2 * math.pi * 5e3


class RabiProblem(object):
    """
    Rectangular pulse parameters, internal units.

    :param rabi_frequency: Free-space Rabi frequency Omega.
    :param pulse_duration: Pulse length.
    :param detunings: Microwave detunings to scan.
    :param tail_threshold: Branch-2 weight allowed outside a window.
    :param padding: Extra states kept on both sides of a window.
    :param coverage: Minimum captured transfer weight |O|^2 of the initial
    state.
    """
    def __init__(self, rabi_frequency, pulse_duration, detunings=(0.0,),
                 tail_threshold=1e-8, padding=4, coverage=0.999):
        if not rabi_frequency > 0:
            raise ValueError("Rabi frequency must be > 0")
        if not pulse_duration > 0:
            raise ValueError("pulse duration must be > 0")
        self.rabi_frequency = float(rabi_frequency)
        self.pulse_duration = float(pulse_duration)
        self.detunings = np.atleast_1d(np.asarray(detunings, dtype=float))
        self.tail_threshold = tail_threshold
        self.padding = int(padding)
        self.coverage = coverage

    @property
    def pulse_area(self):
        return self.rabi_frequency * self.pulse_duration

    @classmethod
    def from_si(cls, units, pulse_duration, detunings_hz, pulse_area=None,
                rabi_frequency=DEFAULT_RABI_FREQUENCY, **kwargs):
        """
        :param pulse_duration: Seconds.
        :param detunings_hz: Detunings in Hz (cycles, not radians).
        :param pulse_area: Free-space rotation angle in units of pi; when
        given it sets Omega = area pi / duration, otherwise `rabi_frequency`
        (rad/s) is used.
        """
        if pulse_area is not None:
            rabi_frequency = pulse_area * math.pi / pulse_duration
        return cls(
            units.to_internal(rabi_frequency, FREQUENCY),
            units.to_internal(pulse_duration, TIME),
            units.to_internal(2 * math.pi * np.asarray(detunings_hz,
                                                       dtype=float),
                              FREQUENCY),
            **kwargs
        )

    def to_dict(self):
        return OrderedDict(
            rabi_frequency=self.rabi_frequency,
            pulse_duration=self.pulse_duration,
            pulse_area_over_pi=self.pulse_area / math.pi,
            n_detunings=len(self.detunings),
            tail_threshold=self.tail_threshold,
            padding=self.padding,
            coverage=self.coverage,
        )


def axis_window(overlap, n0, problem):
    """
    Contiguous index range [lo, hi) around n0 holding all but
    `tail_threshold` of |O[:, n0]|^2, padded on both sides.
    """
    weights = np.abs(overlap.entries[:, n0]) ** 2
    half = 0.5 * problem.tail_threshold
    below = np.cumsum(weights)
    above = np.cumsum(weights[::-1])[::-1]
    first = int(np.argmax(below > half)) if np.any(below > half) else 0
    inside = np.flatnonzero(above > half)
    last = int(inside[-1]) if inside.size else len(weights) - 1
    n_states = min(overlap.shape)
    lo = max(0, min(first, n0) - problem.padding)
    hi = min(n_states, max(last, n0) + problem.padding + 1)
    return lo, hi


class RabiWindow(object):
    """
    Windowed joint basis for one initial state: per-axis index ranges and
    the dense blocks built from them.
    """
    def __init__(self, system, n0, problem):
        self.index = system.index(n0)
        self.ranges = [axis_window(o, k, problem)
                       for o, k in zip(system.overlaps.axes, self.index)]
        coupling = np.ones((1, 1))
        energies1 = np.zeros(())
        energies2 = np.zeros(())
        captured = 1.0
        for (lo, hi), o, b1, b2, k in zip(self.ranges, system.overlaps.axes,
                                          system.bases1, system.bases2,
                                          self.index):
            block = o.entries[lo:hi, lo:hi]
            coupling = np.kron(coupling, block)
            energies1 = np.add.outer(energies1, b1.energies[lo:hi])
            energies2 = np.add.outer(energies2, b2.energies[lo:hi])
            captured *= float(np.sum(np.abs(o.entries[lo:hi, k]) ** 2))
        if captured < problem.coverage:
            raise NumericalValidityError(
                "Rabi window around state {} captures only {:.6f} of the "
                "transfer weight; increase padding or enlarge the basis"
                .format(self.index, captured))
        self.captured = captured
        self.coupling = coupling
        self.shape = energies1.shape
        self.energies1 = energies1.ravel()
        self.energies2 = energies2.ravel()
        local = tuple(k - lo for k, (lo, _) in zip(self.index, self.ranges))
        self.start = int(np.ravel_multi_index(local, self.shape))
        self.reference = self.energies1[self.start]

    @property
    def size(self):
        return len(self.energies1)

    def hamiltonian(self, rabi_frequency, detuning):
        n = self.size
        h = np.zeros((2 * n, 2 * n), dtype=complex)
        h[:n, :n] = np.diag(self.energies1 - self.reference)
        h[n:, n:] = np.diag(self.energies2 - self.reference - detuning)
        h[n:, :n] = 0.5 * rabi_frequency * self.coupling
        h[:n, n:] = 0.5 * rabi_frequency * self.coupling.conj().T
        return h


def evolve_rabi(system, n0, problem, detuning, window=None):
    """
    Branch-2 population after one rectangular pulse starting from |1>|n0>.

    :param window: Reuse a RabiWindow built for the same n0.
    :raises NumericalValidityError: when the window misses more than
    1 - coverage of the transfer weight, or the propagation is not unitary.
    """
    if window is None:
        window = RabiWindow(system, n0, problem)
    h = window.hamiltonian(problem.rabi_frequency, detuning)
    psi = np.zeros(2 * window.size, dtype=complex)
    psi[window.start] = 1.0
    psi = scipy.linalg.expm(-1j * problem.pulse_duration * h) @ psi
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > 1e-8:
        raise NumericalValidityError(
            "pulse propagation changed the norm by {:.3e}".format(norm - 1.0))
    return float(np.sum(np.abs(psi[window.size:]) ** 2))


def state_spectrum(system, n0, problem):
    """P2 on the full detuning grid of `problem` for one initial state."""
    window = RabiWindow(system, n0, problem)
    return np.array([evolve_rabi(system, n0, problem, d, window)
                     for d in problem.detunings])


def two_level_transfer(rabi_frequency, detuning, duration):
    """Omega^2 / (Omega^2 + Delta^2) sin^2(sqrt(Omega^2 + Delta^2) t / 2)."""
    generalized = np.hypot(rabi_frequency, detuning)
    return (rabi_frequency / generalized) ** 2 * np.sin(
        0.5 * generalized * duration) ** 2
