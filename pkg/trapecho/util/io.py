"""
Result CSV files.

Every artifact is a plain header-plus-rows CSV written through pandas with
a fixed float format, so identical inputs give identical bytes.
"""
import os.path as osp

import numpy as np
import pandas as pd

from trapecho.core.errors import CsvFormatError
from trapecho.core.logging import mkdir_p
from trapecho.dynamics.signals import TRACE_COLUMNS
from trapecho.ensemble.stability import CURVE_COLUMNS
from trapecho.spectroscopy.spectrum import SPECTRUM_COLUMNS

FLOAT_FORMAT = '%.12e'

TRACE = 'trace'
SPECTRUM = 'spectrum'
CURVE = 'curve'
BASIS = 'basis'

BASIS_COLUMNS = ('axis', 'n', 'E1_J', 'E2_J', 'abs_Onn', 'column_norm')

CSV_COLUMNS = {
    TRACE: TRACE_COLUMNS,
    SPECTRUM: SPECTRUM_COLUMNS,
    CURVE: CURVE_COLUMNS,
    BASIS: BASIS_COLUMNS,
}
_TEXT_COLUMNS = {
    TRACE: ('n_index_or_ensemble',),
    BASIS: ('axis',),
}
# Numeric columns that may be left empty (written from NaN).
_NULLABLE_COLUMNS = {
    TRACE: ('contrast',),
    BASIS: ('E2_J', 'abs_Onn'),
}


def write_csv(frame, path):
    mkdir_p(osp.dirname(path))
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT,
                 lineterminator='\n')
    return path


def infer_kind(path):
    """Artifact kind from the file name, e.g. run/trace.csv -> 'trace'."""
    stem = osp.splitext(osp.basename(path))[0]
    if stem not in CSV_COLUMNS:
        raise CsvFormatError(path, 0, "cannot infer kind from file name; "
                             "expected one of {}".format(sorted(CSV_COLUMNS)))
    return stem


def read_csv(path, kind=None):
    """
    Load a result CSV and check it against the columns of its kind.

    :raises CsvFormatError: naming the first offending line (1 is the
    header).
    """
    if kind is None:
        kind = infer_kind(path)
    if not osp.isfile(path):
        raise CsvFormatError(path, 0, "no such file")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError,
            UnicodeDecodeError) as e:
        raise CsvFormatError(path, 1, str(e))
    expected = list(CSV_COLUMNS[kind])
    if list(frame.columns) != expected:
        raise CsvFormatError(path, 1, "header {} does not match {}".format(
            list(frame.columns), expected))
    if frame.empty:
        raise CsvFormatError(path, 2, "no data rows")

    nullable = _NULLABLE_COLUMNS.get(kind, ())
    for column in expected:
        if column in _TEXT_COLUMNS.get(kind, ()):
            continue
        values = pd.to_numeric(frame[column], errors='coerce')
        bad = values.isna().to_numpy()
        if column in nullable:
            bad &= ~frame[column].isin(['', 'nan', 'NaN']).to_numpy()
        if np.any(bad):
            row = int(np.flatnonzero(bad)[0])
            raise CsvFormatError(
                path, row + 2, "column {}: not a number: {!r}".format(
                    column, frame[column].iloc[row]))
        frame[column] = values
    return frame
