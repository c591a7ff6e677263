import argparse
import sys

from trapecho.core.errors import CsvFormatError
from trapecho.util.plotting import plot_csv


def plot_results(args):
    for path in args.files:
        try:
            print(plot_csv(path, args.kind))
        except CsvFormatError as e:
            print("error: {}".format(e), file=sys.stderr)
            return e.exit_code
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument('files', nargs='+', type=str,
                        help='trace.csv / spectrum.csv / curve.csv files')
    parser.add_argument('--kind', type=str, default=None,
                        help='artifact kind; inferred from each file name')
    args = parser.parse_args()
    sys.exit(plot_results(args))
