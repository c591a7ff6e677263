"""
Run one preset, optionally over a grid of dotted overrides:

    python scripts/run_preset.py wavelength-compare --out data/wl \
        --sweep trap.gravity_enabled=true,false
"""
import argparse
import os.path as osp
import sys

import yaml

from trapecho.launchers.cli import main as cli_main
from trapecho.launchers.presets import PRESET_FUNCTIONS
from trapecho.pythonplusplus import nested_dict_to_dot_map_dict
from trapecho.util.hyperparameter import DeterministicHyperparameterSweeper


def parse_sweep(items):
    hyperparameters = {}
    for item in items:
        key, _, values = item.partition('=')
        hyperparameters[key] = [yaml.safe_load(v) for v in values.split(',')]
    return hyperparameters


def run_sweep(args, passthrough):
    sweeper = DeterministicHyperparameterSweeper(parse_sweep(args.sweep))
    codes = []
    for exp_id, variant in enumerate(sweeper.iterate_hyperparameters()):
        overrides = nested_dict_to_dot_map_dict(variant)
        argv = [args.preset] + passthrough
        for key, value in sorted(overrides.items()):
            argv += ['--set', '{}={}'.format(key, yaml.safe_dump(
                value, default_flow_style=True).strip().splitlines()[0])]
        if args.out is not None:
            argv += ['--out', osp.join(args.out, 'point-{:03d}'.format(
                exp_id))]
        codes.append(cli_main(argv))
    return max(codes) if codes else 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument('preset', choices=list(PRESET_FUNCTIONS))
    parser.add_argument('--out', type=str, default=None)
    parser.add_argument('--sweep', action='append', default=[],
                        metavar='KEY=V1,V2,...',
                        help='grid over a dotted config key')
    args, passthrough = parser.parse_known_args()
    if args.sweep:
        sys.exit(run_sweep(args, passthrough))
    argv = [args.preset] + passthrough
    if args.out is not None:
        argv += ['--out', args.out]
    sys.exit(cli_main(argv))
