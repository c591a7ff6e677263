"""
Experiment configuration.

A run is described by a nested *variant* dict with the sections
`constants`, `trap`, `numerics` and `scan`. Config files (JSON, or YAML by
suffix) are merged onto DEFAULT_VARIANT and the preset's overrides; any key
that is not in the defaults is rejected.

All quantities are SI. The `scan` section:

    tau_max            longest pulse separation (s)
    n_tau              points on the tau grid, starting at 0
    detuning           Ramsey microwave detuning (Hz)
    wavelengths        trap wavelengths for wavelength-compare (m)
    epsilons           explicit eps list for stability-curve, or null
    epsilon_min/max    log-spaced eps range used when `epsilons` is null
    n_epsilons         points in that range
    pulse_duration     microwave pulse length (s)
    pulse_area         free-space pulse area in units of pi, or null to use
                       rabi_frequency
    rabi_frequency     free-space Rabi frequency (rad/s)
    detuning_span      half-width of the spectrum scan in trap frequencies
    n_detunings        points on the detuning grid
    initial_state      motional state index for single-state scans, or null
                       for the thermal ensemble
    subsample          stratified sample size for ensemble spectra, or null
    curve_subsample    stratified sample size per stability-curve point, or
                       null for the exact sum
    seed               seed for subsampling
    window_padding     extra states around each Rabi window
"""
import copy
import json
import os
import os.path as osp
from collections import namedtuple

import yaml

import trapecho
import trapecho.pythonplusplus as ppp
from trapecho.core.errors import ConfigError
from trapecho.core.model import NumericsConfig, PhysicalConstants, TrapConfig

# The directory of the project, not source
trapecho_project_dir = osp.join(osp.dirname(trapecho.__file__), os.pardir)
LOCAL_LOG_DIR = osp.join(trapecho_project_dir, 'data')

PRESETS = (
    'ramsey-decay',
    'echo-vs-tau',
    'wavelength-compare',
    'stability-curve',
    'mw-spectrum',
    'eigensolve-report',
)

DEFAULT_VARIANT = dict(
    constants=PhysicalConstants().to_dict(),
    trap=TrapConfig().to_dict(),
    numerics=NumericsConfig().to_dict(),
    scan=dict(
        tau_max=10e-3,
        n_tau=201,
        detuning=0.0,
        wavelengths=[805e-9, 798.25e-9, 796.25e-9],
        epsilons=None,
        epsilon_min=1e-5,
        epsilon_max=1e-2,
        n_epsilons=16,
        pulse_duration=20e-3,
        pulse_area=4.0,
        rabi_frequency=2 * 3.141592653589793 * 5e3,
        detuning_span=2.5,
        n_detunings=401,
        initial_state=None,
        subsample=64,
        curve_subsample=None,
        seed=0,
        window_padding=4,
    ),
)

# Two-dimensional harmonic surrogate pinned to the measured 3.6 ms period.
_HARMONIC_2D = dict(
    trap=dict(kind='harmonic', oscillation_time=3.6e-3),
    numerics=dict(dimensionality=2),
)

PRESET_DEFAULTS = {
    'ramsey-decay': ppp.merge_recursive_dicts(_HARMONIC_2D, dict(
        trap=dict(wavelength_lambda=800e-9, epsilon_model='d1_d2'),
    )),
    'echo-vs-tau': dict(
        trap=dict(wavelength_lambda=798.25e-9),
        scan=dict(tau_max=8e-3),
    ),
    'wavelength-compare': ppp.merge_recursive_dicts(_HARMONIC_2D, dict(
        trap=dict(wavelength_lambda=800e-9),
        scan=dict(tau_max=8e-3),
    )),
    'stability-curve': ppp.merge_recursive_dicts(_HARMONIC_2D, dict(
        trap=dict(wavelength_lambda=800e-9),
    )),
    'mw-spectrum': dict(
        trap=dict(kind='harmonic', wavelength_lambda=805e-9),
    ),
    'eigensolve-report': dict(
        trap=dict(wavelength_lambda=800e-9),
    ),
}

ExperimentConfig = namedtuple(
    'ExperimentConfig', ['constants', 'trap', 'numerics', 'scan', 'variant'])


def preset_variant(preset=None):
    variant = copy.deepcopy(DEFAULT_VARIANT)
    if preset is not None:
        if preset not in PRESET_DEFAULTS:
            raise ConfigError('preset', "unknown preset {}".format(preset))
        variant = ppp.merge_recursive_dicts(variant, PRESET_DEFAULTS[preset])
    return variant


def read_config_file(path):
    """Parse a JSON or YAML (by suffix) config file into a dict."""
    if not osp.isfile(path):
        raise ConfigError('config', "no such file: {}".format(path))
    with open(path) as f:
        try:
            if path.endswith(('.yaml', '.yml')):
                data = yaml.safe_load(f)
            else:
                data = json.load(f)
        except (ValueError, yaml.YAMLError) as e:
            raise ConfigError('config', "cannot parse {}: {}".format(path, e))
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError('config', "top level must be a mapping")
    return data


def build_config(variant):
    """
    Validate a full variant and build the config objects.

    :raises ConfigError: naming the first offending field.
    """
    for section in ('constants', 'trap', 'numerics', 'scan'):
        if not isinstance(variant.get(section), dict):
            raise ConfigError(section, "section must be a mapping")
    constants = PhysicalConstants(**variant['constants'])
    trap = TrapConfig(**variant['trap']).validate(constants)
    numerics = NumericsConfig(**variant['numerics']).validate()
    scan = variant['scan']
    _validate_scan(scan)
    return ExperimentConfig(constants, trap, numerics, scan, variant)


def _validate_scan(scan):
    for key in ('tau_max', 'pulse_duration', 'epsilon_min', 'epsilon_max',
                'detuning_span'):
        if not isinstance(scan[key], (int, float)) or not scan[key] > 0:
            raise ConfigError('scan.' + key, "must be > 0")
    for key in ('n_tau', 'n_epsilons', 'n_detunings'):
        if not isinstance(scan[key], int) or scan[key] < 2:
            raise ConfigError('scan.' + key, "must be an integer >= 2")
    if scan['epsilons'] is not None:
        epsilons = scan['epsilons']
        if (not isinstance(epsilons, list) or not epsilons
                or any(e < 0 for e in epsilons)
                or sorted(epsilons) != epsilons):
            raise ConfigError('scan.epsilons',
                              "must be a non-empty ascending list of eps >= 0")
    if not scan['wavelengths']:
        raise ConfigError('scan.wavelengths', "must not be empty")
    if scan['pulse_area'] is not None and not scan['pulse_area'] > 0:
        raise ConfigError('scan.pulse_area', "must be > 0")
    for key in ('subsample', 'curve_subsample'):
        if scan[key] is not None and (
                not isinstance(scan[key], int) or scan[key] < 2):
            raise ConfigError('scan.' + key, "must be an integer >= 2")


def load_config(path=None, preset=None, overrides=None):
    """
    Load, merge and validate a configuration.

    :param path: JSON/YAML file, or None for the defaults alone.
    :param preset: Preset whose defaults sit between DEFAULT_VARIANT and the
    file.
    :param overrides: Dotted-key dict applied last, e.g.
    {'trap.temperature_T': 1e-5}.
    :return: ExperimentConfig(constants, trap, numerics, scan, variant).
    """
    variant = preset_variant(preset)
    layers = []
    if path is not None:
        layers.append(read_config_file(path))
    if overrides:
        layers.append(ppp.dot_map_dict_to_nested_dict(overrides))
    for layer in layers:
        try:
            variant = ppp.merge_recursive_dicts(variant, layer,
                                                allow_new_keys=False)
        except KeyError as e:
            raise ConfigError(e.args[0], "unknown configuration key")
    return build_config(variant)


def dump_config(config, path):
    """Write the resolved variant as JSON; `load_config(path)` restores it."""
    variant = dict(
        constants=config.constants.to_dict(),
        trap=config.trap.to_dict(),
        numerics=config.numerics.to_dict(),
        scan=copy.deepcopy(config.scan),
    )
    with open(path, 'w') as f:
        json.dump(variant, f, indent=2, sort_keys=True)
        f.write('\n')
    return path
