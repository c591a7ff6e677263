"""
Finite-pulse microwave spectroscopy.
"""
from trapecho.spectroscopy.rabi import (
    RabiProblem,
    RabiWindow,
    evolve_rabi,
    state_spectrum,
    two_level_transfer,
)
from trapecho.spectroscopy.spectrum import (
    Spectrum,
    scan_spectrum,
    sideband_report,
)

__all__ = [
    'RabiProblem',
    'RabiWindow',
    'evolve_rabi',
    'state_spectrum',
    'two_level_transfer',
    'Spectrum',
    'scan_spectrum',
    'sideband_report',
]
