"""
Bound-state spectra and inter-branch overlap matrices.
"""
from trapecho.spectral.basis import SpectralBasis, combined_energies
from trapecho.spectral.eigensolvers import (
    convergence_check,
    diagonalize,
    diagonalize_2d,
)
from trapecho.spectral.hermite import (
    analytic_harmonic_basis,
    harmonic_basis_for,
)
from trapecho.spectral.overlaps import (
    OverlapMatrix,
    TensorOverlap,
    export_basis_csv,
    export_overlap_csv,
    overlap_matrix,
    tensor_overlap,
)

__all__ = [
    'SpectralBasis',
    'combined_energies',
    'convergence_check',
    'diagonalize',
    'diagonalize_2d',
    'analytic_harmonic_basis',
    'harmonic_basis_for',
    'OverlapMatrix',
    'TensorOverlap',
    'export_basis_csv',
    'export_overlap_csv',
    'overlap_matrix',
    'tensor_overlap',
]
