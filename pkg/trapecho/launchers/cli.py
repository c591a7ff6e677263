"""
Command line entry point.

    trapecho <preset> [--config FILE] [--out DIR] [--threads N] [--seed S]
                      [--full] [--plot] [--set KEY=VALUE ...]
    trapecho plot <csv> [--kind KIND] [--out SVG]

Exit codes: 0 ok, 2 configuration or CSV format error, 3 numerical
validity error, 1 anything else.
"""
import argparse
import os.path as osp
import sys

import yaml

from trapecho.core.errors import ConfigError, CsvFormatError
from trapecho.launchers import config
from trapecho.launchers.launcher_util import create_log_dir, \
    run_experiment_here
from trapecho.launchers.presets import PRESET_FUNCTIONS
from trapecho.util import io

PLOT_COMMAND = 'plot'


def _add_preset_parser(subparsers, name, function):
    parser = subparsers.add_parser(
        name, help=(function.__doc__ or '').strip().split('\n')[0])
    parser.add_argument('--config', type=str, default=None,
                        help='JSON or YAML file merged onto the defaults')
    parser.add_argument('--out', type=str, default=None,
                        help='output directory (default: a new timestamped '
                             'directory under {})'.format(
                                 config.LOCAL_LOG_DIR))
    parser.add_argument('--threads', type=int, default=None,
                        help='cap on concurrent scan workers')
    parser.add_argument('--seed', type=int, default=None)
    parser.add_argument('--full', action='store_true',
                        help='run the physical regime where supported')
    parser.add_argument('--plot', action='store_true',
                        help='also render the main CSV to SVG')
    parser.add_argument('--set', dest='overrides', action='append',
                        default=[], metavar='KEY=VALUE',
                        help='dotted override, e.g. trap.temperature_T=1e-5')
    parser.add_argument('--quiet', action='store_true',
                        help='log to files only')
    parser.set_defaults(command=name)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='trapecho',
        description='Microwave Ramsey, echo and spectroscopy simulations '
                    'of atoms in a state-dependent dipole trap.')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    for name, function in PRESET_FUNCTIONS.items():
        _add_preset_parser(subparsers, name, function)
    plot = subparsers.add_parser(PLOT_COMMAND,
                                 help='render a result CSV to SVG')
    plot.add_argument('csv', type=str)
    plot.add_argument('--kind', choices=sorted(io.CSV_COLUMNS),
                      default=None,
                      help='artifact kind; inferred from the file name')
    plot.add_argument('--out', type=str, default=None)
    return parser


def parse_overrides(items):
    """['trap.temperature_T=1e-5', ...] -> {'trap.temperature_T': 1e-5}."""
    overrides = {}
    for item in items:
        key, sep, text = item.partition('=')
        if not sep or not key:
            raise ConfigError(item, "override must look like KEY=VALUE")
        try:
            value = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ConfigError(key, "cannot parse value {!r}: {}".format(
                text, e))
        if isinstance(value, str):
            # YAML 1.1 leaves '1e-5' (no dot) as a string.
            try:
                value = float(value)
            except ValueError:
                pass
        overrides[key.strip()] = value
    return overrides


def _plot(args):
    from trapecho.util.plotting import plot_csv
    try:
        path = plot_csv(args.csv, args.kind, args.out)
    except CsvFormatError as e:
        print("error: {}".format(e), file=sys.stderr)
        return e.exit_code
    print(path)
    return 0


def _run_preset(args):
    overrides = {}
    try:
        overrides.update(parse_overrides(args.overrides))
        if args.seed is not None:
            overrides['scan.seed'] = args.seed
        if args.threads is not None:
            overrides['numerics.scan_parallelism'] = args.threads
        experiment_config = config.load_config(
            args.config, preset=args.command, overrides=overrides)
    except ConfigError as e:
        print("error: {}".format(e), file=sys.stderr)
        return e.exit_code

    log_dir = args.out
    if log_dir is None:
        log_dir = create_log_dir(args.command,
                                 seed=experiment_config.scan['seed'])
    code, result = run_experiment_here(
        PRESET_FUNCTIONS[args.command], experiment_config,
        exp_prefix=args.command, log_dir=log_dir, full=args.full,
        quiet=args.quiet,
    )
    if code != 0:
        print("error: {} failed with exit code {}; see {}".format(
            args.command, code, osp.join(log_dir, 'debug.log')),
            file=sys.stderr)
        return code
    if args.plot:
        from trapecho.util.plotting import plot_csv
        plot_csv(osp.join(log_dir, result.artifacts[0]), result.plot_kind,
                 osp.join(log_dir, 'plot.svg'))
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == PLOT_COMMAND:
        return _plot(args)
    return _run_preset(args)


if __name__ == "__main__":
    sys.exit(main())
