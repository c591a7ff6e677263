"""
State-dependent trap potentials.
"""
from trapecho.potentials.axis import AxisPotential, PotentialPair
from trapecho.potentials.builders import (
    build_pair,
    epsilon_from_wavelength,
    export_potential_csv,
    harmonic_surrogate,
    trap_epsilon,
)

__all__ = [
    'AxisPotential',
    'PotentialPair',
    'build_pair',
    'epsilon_from_wavelength',
    'export_potential_csv',
    'harmonic_surrogate',
    'trap_epsilon',
]
