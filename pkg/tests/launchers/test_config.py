import json

import pytest
import yaml

from trapecho.core.errors import ConfigError
from trapecho.launchers.cli import parse_overrides
from trapecho.launchers.config import (
    DEFAULT_VARIANT,
    PRESETS,
    PRESET_DEFAULTS,
    dump_config,
    load_config,
    preset_variant,
)


def test_every_preset_has_defaults():
    assert sorted(PRESETS) == sorted(PRESET_DEFAULTS)
    for preset in PRESETS:
        config = load_config(preset=preset)
        assert config.trap.wavelength_lambda is not None


def test_defaults_need_a_wavelength():
    with pytest.raises(ConfigError) as excinfo:
        load_config()
    assert excinfo.value.field == 'trap.wavelength_lambda'


def test_preset_overrides_stay_local():
    variant = preset_variant('ramsey-decay')
    assert variant['trap']['kind'] == 'harmonic'
    assert variant['numerics']['dimensionality'] == 2
    assert DEFAULT_VARIANT['trap']['kind'] == 'gaussian'
    with pytest.raises(ConfigError):
        preset_variant('no-such-preset')


def test_json_file(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'trap': {'temperature_T': 1e-5},
                                'scan': {'n_tau': 11}}))
    config = load_config(str(path), preset='echo-vs-tau')
    assert config.trap.temperature_T == 1e-5
    assert config.scan['n_tau'] == 11
    assert config.trap.wavelength_lambda == 798.25e-9


def test_yaml_file(tmp_path):
    path = tmp_path / 'run.yaml'
    path.write_text(yaml.safe_dump({'numerics': {'grid_points_per_axis': 256},
                                    'trap': {'clip_ratio': 2.0}}))
    config = load_config(str(path), preset='eigensolve-report')
    assert config.numerics.grid_points_per_axis == 256
    assert config.trap.clip_ratio == 2.0


def test_overrides_win_over_file(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'scan': {'seed': 3}}))
    config = load_config(str(path), preset='echo-vs-tau',
                         overrides={'scan.seed': 7})
    assert config.scan['seed'] == 7


def test_unknown_key_is_named(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'trap': {'colour': 'red'}}))
    with pytest.raises(ConfigError) as excinfo:
        load_config(str(path), preset='echo-vs-tau')
    assert excinfo.value.field == 'trap.colour'
    assert excinfo.value.exit_code == 2


def test_unreadable_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / 'missing.json'), preset='echo-vs-tau')
    broken = tmp_path / 'broken.json'
    broken.write_text('{"trap": ')
    with pytest.raises(ConfigError):
        load_config(str(broken), preset='echo-vs-tau')
    listing = tmp_path / 'list.yaml'
    listing.write_text('- 1\n- 2\n')
    with pytest.raises(ConfigError):
        load_config(str(listing), preset='echo-vs-tau')


@pytest.mark.parametrize('key, value', [
    ('trap.temperature_T', -1.0),
    ('trap.kind', 'parabolic'),
    ('trap.epsilon_model', 'd3'),
    ('trap.wavelength_lambda', 790e-9),
    ('trap.epsilon_override', -0.1),
    ('numerics.grid_points_per_axis', 32),
    ('numerics.dimensionality', 3),
    ('scan.n_tau', 1),
    ('scan.epsilons', [1e-3, 1e-4]),
    ('scan.subsample', 1),
    ('scan.curve_subsample', 1),
])
def test_invalid_values(key, value):
    with pytest.raises(ConfigError) as excinfo:
        load_config(preset='echo-vs-tau', overrides={key: value})
    assert excinfo.value.field == key


def test_dump_and_reload(tmp_path):
    config = load_config(preset='mw-spectrum',
                         overrides={'trap.temperature_T': 1.5e-5})
    path = dump_config(config, str(tmp_path / 'config.json'))
    reloaded = load_config(path)
    assert reloaded.trap.to_dict() == config.trap.to_dict()
    assert reloaded.numerics.to_dict() == config.numerics.to_dict()
    assert reloaded.constants.to_dict() == config.constants.to_dict()
    assert reloaded.scan == config.scan


def test_parse_overrides():
    overrides = parse_overrides([
        'trap.temperature_T=1.0e-5',
        'scan.epsilons=[0.0, 1.0e-3]',
        'trap.kind=harmonic',
        'scan.initial_state=null',
        'trap.waist_w0=5e-6',
    ])
    assert overrides == {
        'trap.temperature_T': 1e-5,
        'trap.waist_w0': 5e-6,
        'scan.epsilons': [0.0, 1e-3],
        'trap.kind': 'harmonic',
        'scan.initial_state': None,
    }
    with pytest.raises(ConfigError):
        parse_overrides(['no-equals-sign'])
