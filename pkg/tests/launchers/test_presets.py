import json
import math

import numpy as np
import pandas as pd
import pytest
from scipy import constants as csts

from trapecho.launchers.cli import main

# Clipped 2D harmonic ensemble, x = E / k_B T on [0, 1.5] with density
# x e^{-x}: <x^2> = 0.8907.
SECOND_MOMENT = 0.8907


def run_preset(preset, tmp_path, *extra):
    out = tmp_path / preset
    assert main([preset, '--quiet', '--out', str(out)] + list(extra)) == 0
    return json.loads((out / 'meta.json').read_text())


def test_ramsey_decay_time(tmp_path):
    meta = run_preset('ramsey-decay', tmp_path)
    estimate = meta['delta_rms']
    assert meta['epsilon'] == pytest.approx(9.667e-4, rel=2e-3)

    assert 0.7 * 2.7e-3 <= estimate['line_decay_time'] <= 1.3 * 2.7e-3
    ratio = meta['contrast_1_over_e_time_s'] / estimate['line_decay_time']
    assert 0.5 <= ratio <= 2.0

    kT_over_h = csts.k * 20e-6 / csts.h
    expected = 0.5 * meta['epsilon'] * math.sqrt(SECOND_MOMENT) * kT_over_h
    assert estimate['line_rms_hz'] == pytest.approx(expected, rel=0.05)
    # The spread about the mean dephases faster than the contrast decays.
    assert estimate['decay_time'] < 0.5 * estimate['line_decay_time']


def off_revival_median(trace, period, margin=0.15):
    """Median P2 with tau more than `margin` periods from any revival."""
    phase = trace['tau_s'].values / period
    off = np.abs(phase - np.round(phase)) > margin
    return float(np.median(trace['P2'].values[off]))


def test_wavelength_regimes(tmp_path):
    meta = run_preset('wavelength-compare', tmp_path)
    frame = pd.read_csv(str(tmp_path / 'wavelength-compare' / 'trace.csv'))
    far, middle, near = meta['wavelengths']
    assert [s['wavelength'] for s in (far, middle, near)] == \
        [805e-9, 798.25e-9, 796.25e-9]
    period = 3.6e-3

    assert far['p2_max'] < 0.15

    trace = frame[frame['n_index_or_ensemble'] == middle['label']]
    assert 0.15 < off_revival_median(trace, period) < 0.45
    phase = trace['tau_s'].values / period
    swing = trace['P2'].values[np.abs(phase - np.round(phase)) > 0.15]
    assert np.ptp(swing) > 0.05

    trace = frame[frame['n_index_or_ensemble'] == near['label']]
    assert off_revival_median(trace, period) == pytest.approx(0.5, abs=0.05)
    revival = np.argmin(np.abs(trace['tau_s'].values - period))
    assert trace['P2'].values[revival] < 0.25


def test_sidebands_need_a_strong_pulse(tmp_path):
    strong = run_preset('mw-spectrum', tmp_path / 'strong',
                        '--set', 'scan.initial_state=30')
    weak = run_preset('mw-spectrum', tmp_path / 'weak',
                      '--set', 'scan.initial_state=30',
                      '--set', 'scan.pulse_area=1.0')
    assert strong['epsilon'] == pytest.approx(6.5e-4, rel=1e-2)

    report = weak['sidebands']
    assert report['carrier_p2'] > 0.9
    assert report['max_sideband_ratio'] < 0.05

    first = strong['sidebands']['sideband_+1']
    assert 0.9 <= first['offset_in_omega_osc'] <= 1.1
    assert first['ratio_to_carrier'] > 0.1
