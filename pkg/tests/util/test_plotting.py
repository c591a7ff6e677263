import numpy as np
import pandas as pd

from trapecho.spectroscopy.spectrum import Spectrum
from trapecho.ensemble.stability import StabilityCurve
from trapecho.util import io
from trapecho.util.plotting import plot_csv


def test_spectrum_plot_is_deterministic(tmp_path):
    detunings = 2 * np.pi * np.linspace(-500.0, 500.0, 51)
    spectrum = Spectrum(detunings, np.exp(-(detunings / 600.0) ** 2))
    csv_path = io.write_csv(spectrum.to_frame(),
                            str(tmp_path / 'spectrum.csv'))
    first = plot_csv(csv_path, out_path=str(tmp_path / 'a.svg'))
    second = plot_csv(csv_path, out_path=str(tmp_path / 'b.svg'))
    with open(first, 'rb') as f1, open(second, 'rb') as f2:
        assert f1.read() == f2.read()


def test_default_output_path_and_title(tmp_path):
    curve = StabilityCurve([0.0, 1e-4, 1e-3], [1.0, 0.9, 0.4])
    csv_path = io.write_csv(curve.to_frame(), str(tmp_path / 'curve.csv'))
    out = plot_csv(csv_path, title='stability')
    assert out == str(tmp_path / 'curve.svg')
    with open(out) as f:
        assert 'stability' in f.read()


def test_basis_plot(tmp_path):
    frame = pd.DataFrame({
        'axis': ['x', 'x', 'y', 'y'],
        'n': [0, 1, 0, 1],
        'E1_J': [1e-30, 3e-30, 1e-30, 3e-30],
        'E2_J': [1.1e-30, np.nan, 1.1e-30, 3.3e-30],
        'abs_Onn': [0.99, np.nan, 0.98, 0.97],
        'column_norm': [1.0, 0.999, 1.0, 0.998],
    }, columns=list(io.BASIS_COLUMNS))
    csv_path = io.write_csv(frame, str(tmp_path / 'basis.csv'))
    assert plot_csv(csv_path).endswith('basis.svg')
