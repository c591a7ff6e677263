"""
Pulse-sequence engine.

States live in each branch's own eigenbasis, so free evolution is a
diagonal phase and basis transport through the overlap matrix only happens
at (sudden) microwave pulses.
"""
import abc
import math

import numpy as np

from trapecho.core.errors import NumericalValidityError

DEFICIT_WARNING = 1e-3
NORM_DRIFT_TOLERANCE = 1e-6


def _sq_norm(amplitudes):
    return float(np.sum(np.abs(amplitudes) ** 2))


def apply_sudden_pulse(state, area, phase, system):
    """
    Instantaneous rotation of the internal doublet,

        [[cos(area/2), -i e^{-i phase} sin(area/2)],
         [-i e^{i phase} sin(area/2), cos(area/2)]],

    with motional amplitudes projected between the bases: amp2 picks up
    O amp1 and amp1 picks up O^dagger amp2. The cross terms cancel, so the
    norm lost to basis truncation is

        sin^2(area/2) (|amp1|^2 - |O amp1|^2 + |amp2|^2 - |O^dagger amp2|^2).

    That expected loss is accumulated in `truncation_deficit`, never
    renormalized away.

    :raises NumericalValidityError: when the overlaps are not a contraction.
    """
    c = math.cos(0.5 * area)
    s = math.sin(0.5 * area)
    u12 = -1j * np.exp(-1j * phase) * s
    u21 = -1j * np.exp(1j * phase) * s
    moved1 = system.overlaps.apply(state.amp1)
    moved2 = system.overlaps.apply_adjoint(state.amp2)
    loss1 = _sq_norm(state.amp1) - _sq_norm(moved1)
    loss2 = _sq_norm(state.amp2) - _sq_norm(moved2)
    if min(loss1, loss2) < -NORM_DRIFT_TOLERANCE:
        raise NumericalValidityError(
            "overlap transfer gained {:.3e} of the norm; the overlap matrix "
            "is not a contraction".format(-min(loss1, loss2)))
    amp1 = c * state.amp1 + u12 * moved2
    amp2 = u21 * moved1 + c * state.amp2
    new_state = state.evolved(amp1, amp2)
    deficit = s * s * max(loss1 + loss2, 0.0)
    new_state.truncation_deficit += deficit
    if abs(deficit) > DEFICIT_WARNING:
        new_state.warnings.append(
            "pulse lost {:.3e} of the norm to basis truncation; enlarge the "
            "basis".format(deficit))
    return new_state


def free_evolve(state, duration, system):
    """
    amp1 <- amp1 exp(-i E1 t), amp2 <- amp2 exp(-i (E2 - detuning) t).

    The hyperfine splitting is absorbed into the rotating-frame detuning.
    """
    if duration == 0:
        return state.evolved(state.amp1, state.amp2)
    amp1 = state.amp1 * np.exp(-1j * system.energies1 * duration)
    amp2 = state.amp2 * np.exp(
        -1j * (system.energies2 - state.detuning) * duration)
    return state.evolved(amp1, amp2, time=state.time + duration)


class Step(object, metaclass=abc.ABCMeta):
    @abc.abstractmethod
    def apply(self, state, system):
        pass

    @abc.abstractmethod
    def describe(self):
        pass


class Delay(Step):
    def __init__(self, duration):
        if duration < 0:
            raise ValueError("delay must be >= 0, got {}".format(duration))
        self.duration = duration

    def apply(self, state, system):
        return free_evolve(state, self.duration, system)

    def describe(self):
        return {'delay': self.duration}


class Pulse(Step):
    """
    Sudden pulse of rotation angle `area` about an equatorial axis set by
    `phase`.
    """
    def __init__(self, area, phase=0.0):
        if not 0 < area <= 2 * math.pi + 1e-12:
            raise ValueError("pulse area must be in (0, 2 pi], got {}".format(
                area))
        self.area = area
        self.phase = phase

    def apply(self, state, system):
        return apply_sudden_pulse(state, self.area, self.phase, system)

    def describe(self):
        return {'pulse': self.area, 'phase': self.phase}


class PulseSequence(object):
    def __init__(self, steps, name='custom'):
        for step in steps:
            assert isinstance(step, Step), step
        self.steps = list(steps)
        self.name = name

    @classmethod
    def ramsey(cls, tau):
        return cls([Pulse(math.pi / 2), Delay(tau), Pulse(math.pi / 2)],
                   name='ramsey')

    @classmethod
    def echo(cls, tau):
        return cls([Pulse(math.pi / 2), Delay(tau), Pulse(math.pi),
                    Delay(tau), Pulse(math.pi / 2)], name='echo')

    @classmethod
    def transfer(cls):
        return cls([Pulse(math.pi)], name='transfer')


def run_sequence(state0, sequence, system):
    """
    Apply every step in order.

    :return: (P2, final JointState). P2 is the branch-2 population.
    :raises NumericalValidityError: when the norm grows, or falls by more
    than the truncation loss the pulses account for.
    """
    state = state0
    start_norm = state0.norm()
    for step in sequence.steps:
        state = step.apply(state, system)
        norm = state.norm()
        expected = start_norm - (state.truncation_deficit
                                 - state0.truncation_deficit)
        drift = max(abs(norm - expected), norm - start_norm)
        if not drift <= NORM_DRIFT_TOLERANCE:
            raise NumericalValidityError(
                "norm drift {:.3e} after step {} of sequence {}".format(
                    drift, step.describe(), sequence.name))
    return state.population2(), state
