import math

import numpy as np
import pytest

from trapecho.core.errors import NumericalValidityError
from trapecho.dynamics.sequences import (
    Delay,
    Pulse,
    PulseSequence,
    apply_sudden_pulse,
    free_evolve,
    run_sequence,
)
from trapecho.dynamics.signals import echo_signal, ramsey_fringe
from trapecho.dynamics.state import JointState
from trapecho.dynamics.system import BranchSystem


def test_pulse_validation():
    with pytest.raises(ValueError):
        Pulse(0.0)
    with pytest.raises(ValueError):
        Pulse(7.0)
    with pytest.raises(ValueError):
        Delay(-1e-3)
    assert Pulse(2 * math.pi).describe() == {'pulse': 2 * math.pi,
                                             'phase': 0.0}


def test_sequence_layouts():
    echo = PulseSequence.echo(1.5)
    assert echo.name == 'echo'
    assert [type(step) for step in echo.steps] == [
        Pulse, Delay, Pulse, Delay, Pulse]
    assert echo.steps[2].area == pytest.approx(math.pi)
    ramsey = PulseSequence.ramsey(2.0)
    assert ramsey.steps[1].duration == 2.0
    assert len(PulseSequence.transfer().steps) == 1


def test_initial_state(dense_system):
    system, _, _ = dense_system
    state = JointState.initial(system, 4, detuning=0.3)
    assert state.norm() == pytest.approx(1.0)
    assert state.population2() == 0.0
    assert state.amp1[4] == 1.0
    assert state.detuning == 0.3
    with pytest.raises(IndexError):
        JointState.initial(system, 100)


def test_pulse_is_unitary_on_complete_basis(dense_system):
    system, _, _ = dense_system
    rng = np.random.RandomState(1)
    amp1 = rng.randn(24) + 1j * rng.randn(24)
    amp2 = rng.randn(24) + 1j * rng.randn(24)
    state = JointState(amp1, amp2)
    for area, phase in [(math.pi / 2, 0.0), (math.pi, 0.7), (1.3, -2.0)]:
        rotated = apply_sudden_pulse(state, area, phase, system)
        assert rotated.norm() == pytest.approx(state.norm(), rel=1e-12)
        assert abs(rotated.truncation_deficit) < 1e-10
        assert rotated.warnings == []


def test_pi_pulse_transfers_everything_without_motion(identical_system):
    state = JointState.initial(identical_system, 2)
    p2, final = run_sequence(state, PulseSequence.transfer(), identical_system)
    assert p2 == pytest.approx(1.0, abs=1e-12)
    assert abs(final.amp2[2]) == pytest.approx(1.0)


def test_free_evolution_phases(dense_system):
    system, _, _ = dense_system
    state = JointState(np.ones(24), np.ones(24), detuning=0.5)
    evolved = free_evolve(state, 2.0, system)
    assert evolved.time == 2.0
    assert np.allclose(evolved.amp1, np.exp(-2j * system.energies1))
    assert np.allclose(evolved.amp2,
                       np.exp(-2j * (system.energies2 - 0.5)))
    assert free_evolve(state, 0.0, system).time == 0.0


@pytest.mark.parametrize('tau', [0.3, 1.7, 6.0])
def test_echo_engine_matches_closed_form(dense_system, tau):
    system, _, _ = dense_system
    p2, _ = run_sequence(JointState.initial(system, 5),
                         PulseSequence.echo(tau), system)
    assert p2 == pytest.approx(echo_signal(system, 5, tau), abs=1e-10)


@pytest.mark.parametrize('detuning', [0.0, 0.8])
def test_ramsey_engine_matches_closed_form(dense_system, detuning):
    system, _, _ = dense_system
    tau = 1.9
    p2, _ = run_sequence(JointState.initial(system, 7, detuning),
                         PulseSequence.ramsey(tau), system)
    assert p2 == pytest.approx(
        float(ramsey_fringe(system, 7, tau, detuning)), abs=1e-10)


def test_echo_ignores_microwave_detuning(dense_system):
    system, _, _ = dense_system
    values = [
        run_sequence(JointState.initial(system, 3, detuning),
                     PulseSequence.echo(2.2), system)[0]
        for detuning in (0.0, 0.9, -13.0)
    ]
    assert np.allclose(values, values[0], atol=1e-10)


def test_identical_branches(identical_system):
    p2, _ = run_sequence(JointState.initial(identical_system, 1),
                         PulseSequence.echo(3.3), identical_system)
    assert p2 < 1e-10
    p2, _ = run_sequence(JointState.initial(identical_system, 1, 0.25),
                         PulseSequence.ramsey(2.0), identical_system)
    assert p2 == pytest.approx(0.5 * (1.0 + math.cos(0.5)), abs=1e-12)


def test_sloshing_echo_revival(sloshing_system):
    p2, _ = run_sequence(JointState.initial(sloshing_system, 0),
                         PulseSequence.echo(2 * math.pi), sloshing_system)
    assert p2 < 1e-8


def test_truncation_deficit_is_tracked(make_harmonic_pair):
    system = make_harmonic_pair(x=3.0, n_states=5)
    column_norm = float(system.overlaps.column_norms([(4,)])[0])
    assert column_norm < 0.9
    p2, state = run_sequence(JointState.initial(system, 4),
                             PulseSequence.transfer(), system)
    assert p2 == pytest.approx(column_norm)
    assert state.truncation_deficit == pytest.approx(1.0 - column_norm)
    assert any('truncation' in w for w in state.warnings)


def test_norm_drift_is_rejected(dense_system):
    system, _, _ = dense_system

    class Leak(Delay):
        def apply(self, state, system):
            return state.evolved(0.5 * state.amp1, state.amp2)

    sequence = PulseSequence([Pulse(math.pi / 2), Leak(0.0)], name='leaky')
    with pytest.raises(NumericalValidityError):
        run_sequence(JointState.initial(system, 0), sequence, system)


class ScaledOverlaps(object):
    def __init__(self, overlaps, factor):
        self.overlaps = overlaps
        self.factor = factor

    def apply(self, amplitudes):
        return self.factor * self.overlaps.apply(amplitudes)

    def apply_adjoint(self, amplitudes):
        return self.factor * self.overlaps.apply_adjoint(amplitudes)


def test_non_contractive_overlaps_are_rejected(dense_system):
    system, _, _ = dense_system
    inflated = BranchSystem(system.bases1, system.bases2,
                            ScaledOverlaps(system.overlaps, 2.0))
    with pytest.raises(NumericalValidityError):
        run_sequence(JointState.initial(inflated, 0),
                     PulseSequence.echo(1.0), inflated)


def test_norm_gain_is_rejected(dense_system):
    system, _, _ = dense_system

    class Pump(Delay):
        def apply(self, state, system):
            return state.evolved(1.5 * state.amp1, state.amp2)

    sequence = PulseSequence([Pump(0.0)], name='pumped')
    with pytest.raises(NumericalValidityError):
        run_sequence(JointState.initial(system, 0), sequence, system)


def test_shrunken_overlaps_count_as_truncation(dense_system):
    system, _, _ = dense_system
    shrunk = BranchSystem(system.bases1, system.bases2,
                          ScaledOverlaps(system.overlaps, 0.5))
    p2, state = run_sequence(JointState.initial(shrunk, 2),
                             PulseSequence.transfer(), shrunk)
    assert p2 == pytest.approx(0.25)
    assert state.truncation_deficit == pytest.approx(0.75)
