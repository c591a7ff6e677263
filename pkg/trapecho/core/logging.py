"""
Process-wide logger in the rllab style.

Text goes to stdout and to every registered text output, scan-point rows go
to the tabular (CSV) outputs, and resolved run parameters are written as
JSON through `log_variant`.
"""
import csv
import datetime
import errno
import json
import os
import sys
from contextlib import contextmanager
from enum import Enum

import dateutil.tz
import numpy as np
from tabulate import tabulate


class MetaEncoder(json.JSONEncoder):
    """JSON encoder that understands numpy scalars/arrays and enums."""
    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        elif isinstance(o, np.floating):
            return float(o)
        elif isinstance(o, np.bool_):
            return bool(o)
        elif isinstance(o, np.ndarray):
            return o.tolist()
        elif isinstance(o, Enum):
            return o.name
        elif isinstance(o, type):
            return {'$class': o.__module__ + "." + o.__name__}
        return json.JSONEncoder.default(self, o)


def mkdir_p(path):
    if not path:
        return
    try:
        os.makedirs(path)
    except OSError as exc:
        if exc.errno == errno.EEXIST and os.path.isdir(path):
            pass
        else:
            raise


class Logger(object):
    def __init__(self):
        self._prefixes = []
        self._prefix_str = ''

        self._tabular = []

        self._text_outputs = []
        self._tabular_outputs = []

        self._text_fds = {}
        self._tabular_fds = {}
        self._tabular_header_written = set()

        self._quiet = False
        self.warnings = []

    def reset(self):
        for fd in list(self._text_fds.values()):
            fd.close()
        for fd in list(self._tabular_fds.values()):
            fd.close()
        self.__init__()

    def _add_output(self, file_name, arr, fds, mode='a'):
        if file_name not in arr:
            mkdir_p(os.path.dirname(file_name))
            arr.append(file_name)
            fds[file_name] = open(file_name, mode)

    def _remove_output(self, file_name, arr, fds):
        if file_name in arr:
            fds[file_name].close()
            del fds[file_name]
            arr.remove(file_name)

    def add_text_output(self, file_name):
        self._add_output(file_name, self._text_outputs, self._text_fds,
                         mode='a')

    def remove_text_output(self, file_name):
        self._remove_output(file_name, self._text_outputs, self._text_fds)

    def add_tabular_output(self, file_name):
        self._add_output(file_name, self._tabular_outputs,
                         self._tabular_fds, mode='w')

    def remove_tabular_output(self, file_name):
        if file_name in self._tabular_fds:
            self._tabular_header_written.discard(self._tabular_fds[file_name])
        self._remove_output(file_name, self._tabular_outputs,
                            self._tabular_fds)

    def close_outputs(self):
        for file_name in list(self._text_outputs):
            self.remove_text_output(file_name)
        for file_name in list(self._tabular_outputs):
            self.remove_tabular_output(file_name)

    def set_quiet(self, quiet):
        """Stop echoing to stdout; file outputs are unaffected."""
        self._quiet = quiet

    def push_prefix(self, prefix):
        self._prefixes.append(prefix)
        self._prefix_str = ''.join(self._prefixes)

    def pop_prefix(self):
        del self._prefixes[-1]
        self._prefix_str = ''.join(self._prefixes)

    @contextmanager
    def prefix(self, key):
        self.push_prefix(key)
        try:
            yield
        finally:
            self.pop_prefix()

    def log(self, s, with_prefix=True, with_timestamp=True):
        out = s
        if with_prefix:
            out = self._prefix_str + out
        if with_timestamp:
            now = datetime.datetime.now(dateutil.tz.tzlocal())
            timestamp = now.strftime('%Y-%m-%d %H:%M:%S.%f %Z')
            out = "%s | %s" % (timestamp, out)
        if not self._quiet:
            print(out)
            sys.stdout.flush()
        for fd in list(self._text_fds.values()):
            fd.write(out + '\n')
            fd.flush()

    def warn(self, s):
        """Log a warning and keep it for the run metadata."""
        self.warnings.append(s)
        self.log("WARNING: " + s)

    def record_tabular(self, key, val):
        self._tabular.append((str(key), val))

    def record_dict(self, d):
        for key, val in d.items():
            self.record_tabular(key, val)

    def record_tabular_misc_stat(self, key, values, weights=None):
        """
        Record mean / std / min / max of `values`, weighted when `weights`
        is given (weights need not be normalized).
        """
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            for stat in ('Mean', 'Std', 'Min', 'Max'):
                self.record_tabular(key + ' ' + stat, np.nan)
            return
        mean = np.average(values, weights=weights)
        var = np.average((values - mean) ** 2, weights=weights)
        self.record_tabular(key + ' Mean', mean)
        self.record_tabular(key + ' Std', np.sqrt(var))
        self.record_tabular(key + ' Min', np.min(values))
        self.record_tabular(key + ' Max', np.max(values))

    def dump_tabular(self, *args, **kwargs):
        """
        Write the recorded row to the tabular outputs and a rendered table
        to the text outputs, then clear the row.
        """
        if len(self._tabular) == 0:
            return
        for line in tabulate(self._tabular).split('\n'):
            self.log(line, *args, **kwargs)
        tabular_dict = dict(self._tabular)
        # Keys are assumed constant for the lifetime of an output file.
        for tabular_fd in list(self._tabular_fds.values()):
            writer = csv.DictWriter(tabular_fd,
                                    fieldnames=list(tabular_dict.keys()))
            if tabular_fd not in self._tabular_header_written:
                writer.writeheader()
                self._tabular_header_written.add(tabular_fd)
            writer.writerow(tabular_dict)
            tabular_fd.flush()
        del self._tabular[:]

    def log_variant(self, log_file, variant_data):
        mkdir_p(os.path.dirname(log_file))
        with open(log_file, "w") as f:
            json.dump(variant_data, f, indent=2, sort_keys=True,
                      cls=MetaEncoder)
            f.write('\n')


logger = Logger()
