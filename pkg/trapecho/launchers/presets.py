"""
Named experiments. Each takes (config, log_dir, full), writes its CSV
artifacts into log_dir and returns a PresetResult; the runner adds
meta.json around it.
"""
import math
import os.path as osp
from collections import OrderedDict

import gtimer as gt
import numpy as np
import pandas as pd

from trapecho.core import logger
from trapecho.core.eval_util import create_stats_ordered_dict
from trapecho.core.model import NumericsConfig
from trapecho.core.units import ENERGY, FREQUENCY, TIME
from trapecho.dynamics.signals import echo_trace
from trapecho.dynamics.system import build_system
from trapecho.ensemble.averaging import delta_rms, ensemble_trace, thermal_kT
from trapecho.ensemble.stability import stability_curve
from trapecho.ensemble.thermal import build_ensemble
from trapecho.launchers.launcher_util import PresetResult
from trapecho.potentials.axis import HARMONIC
from trapecho.potentials.builders import (
    build_pair,
    epsilon_from_wavelength,
    export_potential_csv,
)
from trapecho.spectral.eigensolvers import convergence_check
from trapecho.spectral.overlaps import export_overlap_csv
from trapecho.spectroscopy.rabi import RabiProblem
from trapecho.spectroscopy.spectrum import scan_spectrum, sideband_report
from trapecho.util import io

TRACE_FILE = 'trace.csv'
SPECTRUM_FILE = 'spectrum.csv'
CURVE_FILE = 'curve.csv'
BASIS_FILE = 'basis.csv'
OVERLAP_BLOCK = 32


def _physical_numerics(numerics):
    return NumericsConfig(**dict(numerics.to_dict(), thermal_quanta=None))


def _build(config, numerics=None, epsilon=None):
    numerics = numerics or config.numerics
    pair = build_pair(config.trap, numerics, config.constants,
                      epsilon=epsilon)
    gt.stamp('potentials')
    system = build_system(pair, numerics, config.trap.clip_ratio)
    gt.stamp('spectra')
    logger.log("basis sizes {} / {} (branch 1 / branch 2), R = {:.4g}".format(
        [b.n_states for b in system.bases1],
        [b.n_states for b in system.bases2],
        pair.units.desk_factor))
    return pair, system


def _thermal(pair, system, config):
    ensemble = build_ensemble(system.bases1, thermal_kT(pair),
                              config.trap.clip_ratio)
    logger.log("thermal ensemble: {} states below {:.4g} k_B T".format(
        ensemble.n_states, config.trap.clip_ratio))
    return ensemble


def _ensemble_meta(ensemble):
    info = ensemble.describe()
    info.update(create_stats_ordered_dict(
        'energy_over_kT', ensemble.energies / ensemble.kT,
        weights=ensemble.weights))
    return info


def _system_meta(pair, system):
    return OrderedDict(
        epsilon=pair.epsilon,
        epsilon_eff=pair.epsilon_eff,
        desk_factor=pair.units.desk_factor,
        units=pair.units.to_dict(),
        potential=pair.describe(),
        truncation=system.diagnostics(),
    )


def _tau_grid(config, units):
    tau_s = np.linspace(0.0, config.scan['tau_max'], config.scan['n_tau'])
    return units.to_internal(tau_s, TIME)


def _threads(config):
    return config.numerics.scan_parallelism


def _first_below(tau_s, values, level):
    """Linearly interpolated first crossing of `level`, or None."""
    below = np.flatnonzero(values < level)
    if below.size == 0 or below[0] == 0:
        return None
    k = below[0]
    t0, t1 = tau_s[k - 1], tau_s[k]
    v0, v1 = values[k - 1], values[k]
    return float(t0 + (level - v0) * (t1 - t0) / (v1 - v0))


def _trace_summary(trace):
    return OrderedDict(
        label=trace.label,
        p2_max=float(np.max(trace.p2)),
        p2_mean=float(np.mean(trace.p2)),
        p2_final=float(trace.p2[-1]),
    )


def _write_traces(traces, log_dir):
    frame = pd.concat([t.to_frame() for t in traces], ignore_index=True)
    io.write_csv(frame, osp.join(log_dir, TRACE_FILE))
    return [TRACE_FILE]


def ramsey_decay(config, log_dir, full=False):
    """
    Ensemble-averaged Ramsey contrast and echo P2 on one tau grid, plus
    the RMS-detuning decay estimate. `full` repeats the estimate in the
    physical regime.
    """
    pair, system = _build(config)
    units = pair.units
    ensemble = _thermal(pair, system, config)
    tau = _tau_grid(config, units)
    detuning = units.to_internal(2 * math.pi * config.scan['detuning'],
                                 FREQUENCY)
    ramsey, echo = ensemble_trace(system, ensemble, tau, detuning,
                                  n_jobs=_threads(config))
    ramsey.label = 'thermal-ramsey'
    echo.label = 'thermal-echo'
    gt.stamp('scan')

    estimate = delta_rms(system, ensemble)
    contrast_time = _first_below(ramsey.tau_s, ramsey.contrast,
                                 ramsey.contrast[0] / math.e)
    meta = _system_meta(pair, system)
    meta['ensemble'] = _ensemble_meta(ensemble)
    meta['delta_rms'] = estimate._asdict()
    meta['contrast_1_over_e_time_s'] = contrast_time
    meta['echo'] = _trace_summary(echo)

    logger.record_tabular('DeltaRMS (rad/s)', estimate.delta_rms)
    logger.record_tabular('DecayTime (s)', estimate.decay_time)
    logger.record_tabular('LineDecayTime (s)', estimate.line_decay_time)
    logger.record_tabular('Contrast1OverE (s)', contrast_time)
    if full:
        full_pair, full_system = _build(
            config, _physical_numerics(config.numerics))
        full_ensemble = _thermal(full_pair, full_system, config)
        full_estimate = delta_rms(full_system, full_ensemble)
        meta['delta_rms_full'] = full_estimate._asdict()
        meta['ensemble_full'] = _ensemble_meta(full_ensemble)
        logger.record_tabular('DecayTimeFull (s)', full_estimate.decay_time)
        logger.record_tabular('LineDecayTimeFull (s)',
                              full_estimate.line_decay_time)
    logger.dump_tabular(with_prefix=False)
    return PresetResult(_write_traces([ramsey, echo], log_dir), io.TRACE,
                        meta)


def echo_vs_tau(config, log_dir, full=False):
    """
    Thermal echo trace; with scan.initial_state set, the single-state echo
    is written next to it.
    """
    pair, system = _build(config)
    ensemble = _thermal(pair, system, config)
    tau = _tau_grid(config, pair.units)
    _, echo = ensemble_trace(system, ensemble, tau,
                             n_jobs=_threads(config), label='thermal')
    traces = [echo]
    meta = _system_meta(pair, system)
    meta['ensemble'] = _ensemble_meta(ensemble)
    meta['echo'] = _trace_summary(echo)
    initial = config.scan['initial_state']
    if initial is not None:
        single = echo_trace(system, initial, tau)
        traces.append(single)
        meta['initial_state'] = _trace_summary(single)
        meta['initial_state']['long_time_p2'] = \
            single.metadata['long_time_p2']
    gt.stamp('scan')
    return PresetResult(_write_traces(traces, log_dir), io.TRACE, meta)


def wavelength_compare(config, log_dir, full=False):
    """Thermal echo traces for every wavelength in scan.wavelengths."""
    pair, system = _build(config)
    ensemble = _thermal(pair, system, config)
    tau = _tau_grid(config, pair.units)
    traces = []
    summaries = []
    for wavelength in config.scan['wavelengths']:
        epsilon = epsilon_from_wavelength(wavelength, config.constants,
                                          config.trap.epsilon_model)
        with logger.prefix("[{:.2f} nm] ".format(wavelength * 1e9)):
            scaled = build_system(pair.scaled(epsilon), config.numerics,
                                  config.trap.clip_ratio)
            _, echo = ensemble_trace(scaled, ensemble, tau,
                                     n_jobs=_threads(config),
                                     label='{:.2f}nm'.format(wavelength * 1e9))
            summary = _trace_summary(echo)
            summary.update(wavelength=wavelength, epsilon=epsilon,
                           epsilon_eff=pair.units.effective_epsilon(epsilon))
            logger.record_dict(summary)
            logger.dump_tabular(with_prefix=False)
        traces.append(echo)
        summaries.append(summary)
        gt.stamp('scan')
    meta = _system_meta(pair, system)
    meta['ensemble'] = _ensemble_meta(ensemble)
    meta['wavelengths'] = summaries
    return PresetResult(_write_traces(traces, log_dir), io.TRACE, meta)


def _epsilon_grid(scan):
    if scan['epsilons'] is not None:
        return np.asarray(scan['epsilons'], dtype=float)
    return np.logspace(math.log10(scan['epsilon_min']),
                       math.log10(scan['epsilon_max']), scan['n_epsilons'])


def stability(config, log_dir, full=False):
    """
    Thermal average of |O_nn|^4 against eps. `full` runs the physical
    regime instead of the desk-scale reduction.
    """
    numerics = _physical_numerics(config.numerics) if full \
        else config.numerics
    pair = build_pair(config.trap, numerics, config.constants)
    gt.stamp('potentials')
    curve = stability_curve(pair, _epsilon_grid(config.scan),
                            config.trap.clip_ratio, numerics,
                            subsample=config.scan['curve_subsample'],
                            seed=config.scan['seed'])
    gt.stamp('scan')
    frame = curve.to_frame()
    for row in frame.itertuples(index=False):
        logger.record_tabular('epsilon', row.epsilon)
        logger.record_tabular('avg |O_nn|^4', row.avg_Onn4)
        logger.record_tabular('P2 long time', row.P2_longtime)
        logger.record_tabular('stderr', row.stderr)
        logger.dump_tabular(with_prefix=False)
    io.write_csv(frame, osp.join(log_dir, CURVE_FILE))

    meta = OrderedDict(
        epsilon=pair.epsilon,
        desk_factor=pair.units.desk_factor,
        units=pair.units.to_dict(),
        potential=pair.describe(),
    )
    meta['curve'] = curve.describe()
    if curve.epsilons[0] <= pair.epsilon <= curve.epsilons[-1]:
        meta['avg_Onn4_at_trap_epsilon'] = float(
            np.interp(pair.epsilon, curve.epsilons, curve.average))
    return PresetResult([CURVE_FILE], io.CURVE, meta)


def mw_spectrum(config, log_dir, full=False):
    """
    P2 after one microwave pulse against detuning, centred on the carrier
    of scan.initial_state (or the thermal mean) and spanning
    +-detuning_span trap frequencies.
    """
    scan = config.scan
    pair, system = _build(config)
    units = pair.units
    omega_osc = float(system.bases1[0].energies[1]
                      - system.bases1[0].energies[0])
    initial = scan['initial_state']
    if initial is None:
        ensemble = _thermal(pair, system, config)
        center = units.to_internal(
            delta_rms(system, ensemble).mean_detuning, FREQUENCY)
        n0 = 0
    else:
        ensemble = None
        n0 = system.index(initial)
        center = float(system.energies2[n0] - system.energies1[n0])
    detunings = center + omega_osc * np.linspace(
        -scan['detuning_span'], scan['detuning_span'], scan['n_detunings'])
    problem = RabiProblem.from_si(
        units, scan['pulse_duration'],
        units.from_internal(detunings, FREQUENCY) / (2 * math.pi),
        pulse_area=scan['pulse_area'],
        rabi_frequency=scan['rabi_frequency'],
        padding=scan['window_padding'],
    )
    logger.log("pulse area {:.3f} pi over {} detunings".format(
        problem.pulse_area / math.pi, len(problem.detunings)))
    spectrum = scan_spectrum(system, problem, ensemble, n0,
                             subsample=scan['subsample'], seed=scan['seed'],
                             n_jobs=_threads(config))
    gt.stamp('scan')
    report = sideband_report(
        spectrum, units.from_internal(omega_osc, FREQUENCY),
        carrier=units.from_internal(center, FREQUENCY))
    logger.record_tabular('CarrierP2', report['carrier_p2'])
    logger.record_tabular('MaxSidebandRatio', report['max_sideband_ratio'])
    logger.dump_tabular(with_prefix=False)
    io.write_csv(spectrum.to_frame(), osp.join(log_dir, SPECTRUM_FILE))

    meta = _system_meta(pair, system)
    meta['spectrum'] = spectrum.metadata
    meta['sidebands'] = report
    return PresetResult([SPECTRUM_FILE], io.SPECTRUM, meta)


def _padded(values, size):
    values = np.asarray(values)[:size]
    padded = np.full(size, np.nan)
    padded[:len(values)] = values
    return padded


def eigensolve_report(config, log_dir, full=False):
    """
    Per-axis energies, |O_nn| and column norms in basis.csv, potential and
    leading overlap-block CSVs, plus a doubled-grid convergence check.
    """
    pair, system = _build(config)
    units = pair.units
    frames = []
    artifacts = [BASIS_FILE]
    convergence = OrderedDict()
    for b1, b2, o in zip(system.bases1, system.bases2,
                         system.overlaps.axes):
        n1 = b1.n_states
        frames.append(pd.DataFrame(OrderedDict([
            ('axis', [b1.label] * n1),
            ('n', np.arange(n1)),
            ('E1_J', units.from_internal(b1.energies, ENERGY)),
            ('E2_J', units.from_internal(_padded(b2.energies, n1), ENERGY)),
            ('abs_Onn', _padded(np.abs(o.diagonal()), n1)),
            ('column_norm', o.column_norms()),
        ])))
        name = 'overlap_{}.csv'.format(b1.label)
        export_overlap_csv(o, osp.join(log_dir, name),
                           block=min(OVERLAP_BLOCK, n1))
        artifacts.append(name)
        if pair.v1[b1.label].kind != HARMONIC:
            shift = convergence_check(pair.v1[b1.label], config.numerics,
                                      cutoff=b1.cutoff)
            convergence[b1.label] = OrderedDict(
                max_energy_change_J=units.from_internal(shift, ENERGY),
                max_energy_change_U0=shift,
                orthonormality_error_1=b1.orthonormality_error(),
                orthonormality_error_2=b2.orthonormality_error(),
            )
        logger.record_tabular_misc_stat('ColumnNorm ' + b1.label,
                                        o.column_norms())
    gt.stamp('report')
    logger.dump_tabular(with_prefix=False)
    io.write_csv(pd.concat(frames, ignore_index=True),
                 osp.join(log_dir, BASIS_FILE))
    for path in export_potential_csv(pair, log_dir):
        artifacts.append(osp.basename(path))

    meta = _system_meta(pair, system)
    meta['convergence'] = convergence
    return PresetResult(artifacts, io.BASIS, meta)


PRESET_FUNCTIONS = OrderedDict([
    ('ramsey-decay', ramsey_decay),
    ('echo-vs-tau', echo_vs_tau),
    ('wavelength-compare', wavelength_compare),
    ('stability-curve', stability),
    ('mw-spectrum', mw_spectrum),
    ('eigensolve-report', eigensolve_report),
])
