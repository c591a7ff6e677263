"""
Constructors for the state-dependent potential pair.

V1 = -U0 exp(-2 q^2 / w0^2) (+ m g q on the vertical axis) and
V2 = (1 + eps) * optical(V1) + the same gravity term. Gravity is state
independent, so only the optical part is scaled.
"""
import math
import os.path as osp
from collections import OrderedDict

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from trapecho.core.errors import ConfigError, NumericalValidityError
from trapecho.core.units import natural_units, ENERGY, LENGTH
from trapecho.core.logging import mkdir_p
from trapecho.potentials.axis import (
    AxisPotential,
    PotentialPair,
    GAUSSIAN,
    HARMONIC,
    VERTICAL_AXIS,
    uniform_grid,
)

GAUSSIAN_HALFWIDTH = 1.6
GAUSSIAN_MIN_HALFWIDTH = 1.0
# Largest slope of 4 q exp(-2 q^2); steeper tilts open the well.
MAX_TILT = 2.0 * math.exp(-0.5)


def _line_detuning(line_wavelength, wavelength, constants):
    return (2 * math.pi * constants.speed_of_light
            * (1.0 / line_wavelength - 1.0 / wavelength))


def epsilon_from_wavelength(wavelength, constants, model='d1'):
    """
    Differential light-shift ratio of the two hyperfine states.

    'd1': eps = omega_HF / delta_1 with delta_1 = 2 pi c (1/lambda_D1 -
    1/lambda).
    'd1_d2': both lines with strengths 1:2,

        eps = omega_HF (1/delta_1^2 + 2/delta_2^2) / (1/delta_1 + 2/delta_2).

    :param wavelength: Trap laser wavelength in m, red of the D1 line.
    """
    if wavelength <= constants.lambda_D1:
        raise ConfigError(
            'trap.wavelength_lambda',
            "trap must be red-detuned from the D1 line ({} m), got {} m"
            .format(constants.lambda_D1, wavelength))
    delta1 = _line_detuning(constants.lambda_D1, wavelength, constants)
    if model == 'd1':
        return constants.omega_HF / delta1
    if model != 'd1_d2':
        raise ConfigError('trap.epsilon_model',
                          "unknown epsilon model {}".format(model))
    delta2 = _line_detuning(constants.lambda_D2, wavelength, constants)
    return (constants.omega_HF * (1.0 / delta1 ** 2 + 2.0 / delta2 ** 2)
            / (1.0 / delta1 + 2.0 / delta2))


def trap_epsilon(trap, constants):
    if trap.epsilon_override is not None:
        return float(trap.epsilon_override)
    return epsilon_from_wavelength(trap.wavelength_lambda, constants,
                                   trap.epsilon_model)


def axis_labels(dimensionality):
    return ['y'] if dimensionality == 1 else ['x', 'y']


def _downhill_edge(halfwidth, tilt):
    """Unit Gaussian well tilted by `tilt`, evaluated at its lower edge."""
    return -math.exp(-2.0 * halfwidth ** 2) - abs(tilt) * halfwidth


def barrier_position(tilt):
    """
    Distance from the well centre to the top of the downhill barrier of a
    tilted unit Gaussian well, where 4 q exp(-2 q^2) = |tilt|.
    """
    tilt = abs(tilt)
    if tilt >= MAX_TILT:
        raise NumericalValidityError(
            "gravity tilt {:.4g} U0/w0 leaves no barrier on the downhill "
            "side; deepen the trap".format(tilt))
    return brentq(lambda q: 4.0 * q * math.exp(-2.0 * q ** 2) - tilt,
                  0.5, 10.0)


def gaussian_halfwidth(tilt, e_target):
    """
    Smallest half-width (w0) whose lower edge lies at or above `e_target`.

    Without tilt the edge at GAUSSIAN_HALFWIDTH is already at the
    continuum. With tilt the edge cannot rise above the downhill barrier;
    when `e_target` is out of reach the barrier position is returned.
    """
    h_max = GAUSSIAN_HALFWIDTH if tilt == 0 else barrier_position(tilt)
    if e_target >= _downhill_edge(h_max, tilt):
        return h_max
    h_min = min(GAUSSIAN_MIN_HALFWIDTH, h_max)
    if e_target <= _downhill_edge(h_min, tilt):
        return h_min
    return brentq(lambda q: _downhill_edge(q, tilt) - e_target, h_min, h_max)


def auto_halfwidth(units, trap, constants, kind):
    """Grid half-width in w0 for the 'auto' setting."""
    if kind == GAUSSIAN:
        kT = units.to_internal(units.thermal_energy, ENERGY)
        tilt = units.gravity_tilt if trap.gravity_enabled else 0.0
        # Clip energy above the well bottom, plus one k_B T of headroom.
        e_target = -1.0 + (trap.clip_ratio + 1.0) * kT
        return gaussian_halfwidth(tilt, e_target)
    omega = units.to_internal(trap.trap_frequency(constants), 'frequency')
    e_max = trap.clip_ratio * units.to_internal(units.thermal_energy, ENERGY)
    turning = math.sqrt(2 * e_max / (units.mass * omega ** 2))
    sag = units.gravity_tilt / (units.mass * omega ** 2) \
        if trap.gravity_enabled else 0.0
    return abs(sag) + 1.25 * turning + 8.0 / math.sqrt(units.mass * omega)


def _gaussian_axis(grid, label, scale, tilt, mass):
    optical = -scale * np.exp(-2.0 * grid ** 2)
    return AxisPotential(
        grid, optical + tilt * grid, label, GAUSSIAN,
        params=dict(depth=1.0, width=1.0, scale=scale, tilt=tilt),
        optical=optical,
        mass=mass,
    )


def _harmonic_axis(grid, label, curvature, scale, tilt, mass):
    """
    -scale + curvature q^2 / 2 + tilt q, written in completed-square form.
    """
    center = -tilt / curvature
    offset = -scale - tilt ** 2 / (2 * curvature)
    optical = -scale + 0.5 * curvature * grid ** 2
    values = offset + 0.5 * curvature * (grid - center) ** 2
    return AxisPotential(
        grid, values, label, HARMONIC,
        params=dict(omega=math.sqrt(curvature / mass), center=center,
                    offset=offset, mass=mass, curvature=curvature,
                    scale=scale, tilt=tilt),
        optical=optical,
        mass=mass,
    )


def build_pair(trap, numerics, constants, units=None, epsilon=None):
    """
    Build the two-branch potential for every axis.

    :param epsilon: Physical eps to use instead of the trap's own.
    :return: PotentialPair in internal units.
    """
    if units is None:
        units = natural_units(constants, trap, numerics)
    if epsilon is None:
        epsilon = trap_epsilon(trap, constants)
    epsilon_eff = units.effective_epsilon(epsilon)
    if numerics.domain_halfwidth == 'auto':
        halfwidth = auto_halfwidth(units, trap, constants, trap.kind)
    else:
        halfwidth = units.to_internal(numerics.domain_halfwidth, LENGTH)
    e_hf = units.to_internal(constants.hbar * constants.omega_HF, ENERGY)

    v1 = OrderedDict()
    v2 = OrderedDict()
    for label in axis_labels(numerics.dimensionality):
        grid = uniform_grid(halfwidth, numerics.grid_points_per_axis)
        tilt = units.gravity_tilt \
            if trap.gravity_enabled and label == VERTICAL_AXIS else 0.0
        v1[label] = _gaussian_axis(grid, label, 1.0, tilt, units.mass)
        v2[label] = _gaussian_axis(grid, label, 1.0 + epsilon_eff, tilt,
                                   units.mass)
    pair = PotentialPair(v1, v2, epsilon, epsilon_eff, e_hf, units)
    if trap.kind == HARMONIC:
        pair = harmonic_surrogate(pair, trap.oscillation_time)
        check_surrogate(pair)
    if numerics.basis_cutoff_energy is not None:
        cutoff = units.to_internal(numerics.basis_cutoff_energy, ENERGY) \
            + pair.v1[pair.axes[0]].minimum
        _check_domain(pair, cutoff)
    return pair


def _check_domain(pair, cutoff):
    for label in pair.axes:
        axis = pair.v1[label]
        if cutoff >= axis.edge_value:
            if axis.kind == HARMONIC:
                p = axis.params
                suggested = abs(p['center']) + 1.25 * math.sqrt(
                    2 * (cutoff - p['offset']) / p['curvature'])
            else:
                suggested = 1.5 * axis.halfwidth
            raise NumericalValidityError(
                "domain too small on axis {}: cutoff {:.4g} U0 exceeds edge "
                "potential {:.4g} U0; try domain_halfwidth >= {:.4g} m".format(
                    label, cutoff, axis.edge_value,
                    pair.units.from_internal(suggested, LENGTH)))


def check_surrogate(pair):
    """
    The analytic minimum displacement of a harmonic pair must match the
    displacement of the sampled minima to within one grid step.
    """
    for label in pair.axes:
        v1, v2 = pair.v1[label], pair.v2[label]
        sampled = v2.argmin_position() - v1.argmin_position()
        analytic = pair.sag_displacement(label)
        if abs(sampled - analytic) > v1.spacing * (1 + 1e-9):
            raise NumericalValidityError(
                "axis {}: sampled minima are {:.4g} w0 apart but the "
                "surrogate puts them {:.4g} w0 apart; the well centre is "
                "off the grid or the grid is too coarse".format(
                    label, sampled, analytic))


def harmonic_surrogate(pair, oscillation_time=None):
    """
    Replace each axis by its second-order expansion at the bottom of the
    optical well, keeping gravity exact through completion of the square.

    :param oscillation_time: If given (s), pins omega1 = 2 pi / time;
    otherwise the Gaussian curvature is used. omega2 = omega1 sqrt(1 + eps).
    """
    units = pair.units
    mass = units.mass
    v1 = OrderedDict()
    v2 = OrderedDict()
    for label in pair.axes:
        a1, a2 = pair.v1[label], pair.v2[label]
        if a1.kind == HARMONIC:
            v1[label], v2[label] = a1, a2
            continue
        p = a1.params
        if oscillation_time is None:
            curvature = 4.0 * p['depth'] / p['width'] ** 2
        else:
            omega = units.to_internal(2 * math.pi / oscillation_time,
                                      'frequency')
            curvature = mass * omega ** 2
        scale2 = a2.params['scale']
        v1[label] = _harmonic_axis(a1.grid, label, curvature, p['scale'],
                                   p['tilt'], mass)
        v2[label] = _harmonic_axis(a2.grid, label, curvature * scale2,
                                   scale2, p['tilt'], mass)
    return PotentialPair(v1, v2, pair.epsilon, pair.epsilon_eff, pair.e_hf,
                         units)


def export_potential_csv(pair, directory):
    """
    Write `potential_<axis>_v<branch>.csv` files with columns
    position_m, energy_J (motional part, hyperfine offset excluded).

    :return: List of written paths.
    """
    mkdir_p(directory)
    units = pair.units
    paths = []
    for index in (1, 2):
        for label, axis in pair.branch(index).items():
            path = osp.join(directory,
                            "potential_{}_v{}.csv".format(label, index))
            frame = pd.DataFrame(OrderedDict([
                ('position_m', units.from_internal(axis.grid, LENGTH)),
                ('energy_J', units.from_internal(axis.values, ENERGY)),
            ]))
            frame.to_csv(path, index=False, float_format='%.12e')
            paths.append(path)
    return paths
