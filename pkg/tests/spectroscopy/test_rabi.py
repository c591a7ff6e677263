import math

import numpy as np
import pytest

from trapecho.core.errors import NumericalValidityError
from trapecho.core.model import NumericsConfig, PhysicalConstants, TrapConfig
from trapecho.core.units import natural_units
from trapecho.spectroscopy.rabi import (
    RabiProblem,
    RabiWindow,
    evolve_rabi,
    state_spectrum,
    two_level_transfer,
)


def test_problem_validation():
    with pytest.raises(ValueError):
        RabiProblem(0.0, 1.0)
    with pytest.raises(ValueError):
        RabiProblem(1.0, -1.0)
    problem = RabiProblem(0.5, 2.0, detunings=0.3)
    assert problem.detunings.shape == (1,)
    assert problem.pulse_area == pytest.approx(1.0)
    assert problem.to_dict()['pulse_area_over_pi'] == pytest.approx(
        1.0 / math.pi)


def test_from_si_sets_area():
    constants = PhysicalConstants()
    units = natural_units(constants, TrapConfig(wavelength_lambda=800e-9),
                          NumericsConfig())
    problem = RabiProblem.from_si(units, 20e-3, [0.0, 100.0],
                                  pulse_area=4.0)
    assert problem.pulse_area == pytest.approx(4 * math.pi)
    assert units.from_internal(problem.detunings[1], 'frequency') == \
        pytest.approx(2 * math.pi * 100.0)


def test_two_level_transfer_resonant_pi_pulse():
    assert two_level_transfer(1.0, 0.0, math.pi) == pytest.approx(1.0)
    assert two_level_transfer(1.0, 0.0, 2 * math.pi) == pytest.approx(
        0.0, abs=1e-15)


def test_unperturbed_system_is_a_two_level_atom(identical_system):
    detunings = np.linspace(-2.0, 2.0, 41)
    problem = RabiProblem(0.5, 3.0, detunings)
    expected = two_level_transfer(0.5, detunings, 3.0)
    for n0 in (0, 3):
        assert np.allclose(state_spectrum(identical_system, n0, problem),
                           expected, atol=1e-10)


def test_window_brackets_initial_state(sloshing_system):
    problem = RabiProblem(0.05, 60.0)
    window = RabiWindow(sloshing_system, 10, problem)
    (lo, hi), = window.ranges
    assert lo <= 10 - problem.padding
    assert hi >= 10 + problem.padding + 1
    assert window.captured > 1.0 - 1e-7
    assert window.reference == pytest.approx(
        sloshing_system.energies1[10])


def test_window_missing_transfer_weight(make_harmonic_pair):
    system = make_harmonic_pair(x=1.0, n_states=40)
    problem = RabiProblem(0.1, 10.0, tail_threshold=0.5, padding=0)
    with pytest.raises(NumericalValidityError):
        evolve_rabi(system, 0, problem, 0.0)


def test_pulse_conserves_probability(sloshing_system):
    problem = RabiProblem(0.2, 15.0)
    p2 = evolve_rabi(sloshing_system, 2, problem, 0.4)
    assert 0.0 <= p2 <= 1.0
