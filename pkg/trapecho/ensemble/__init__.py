"""
Thermal ensembles, averages and dephasing estimates.
"""
from trapecho.ensemble.averaging import (
    DephasingEstimate,
    EnsembleAverage,
    delta_rms,
    ensemble_average,
    ensemble_trace,
    thermal_kT,
)
from trapecho.ensemble.stability import StabilityCurve, stability_curve
from trapecho.ensemble.thermal import (
    ThermalEnsemble,
    build_ensemble,
    factorized_sum,
)

__all__ = [
    'DephasingEstimate',
    'EnsembleAverage',
    'delta_rms',
    'ensemble_average',
    'ensemble_trace',
    'thermal_kT',
    'StabilityCurve',
    'stability_curve',
    'ThermalEnsemble',
    'build_ensemble',
    'factorized_sum',
]
