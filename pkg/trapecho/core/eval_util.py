"""
Common summary statistics for scan diagnostics.
"""

from collections import OrderedDict
from numbers import Number

import numpy as np


def create_stats_ordered_dict(
        name,
        data,
        weights=None,
        stat_prefix=None,
        exclude_max_min=False,
):
    """
    Mean / Std (/ Max / Min) of `data`, optionally weighted.

    :param weights: Non-negative weights with the shape of `data`.
    """
    if stat_prefix is not None:
        name = "{} {}".format(stat_prefix, name)
    if isinstance(data, Number):
        return OrderedDict({name: data})

    data = np.asarray(data, dtype=float)
    if data.size == 0:
        return OrderedDict()

    mean = np.average(data, weights=weights)
    std = np.sqrt(np.average((data - mean) ** 2, weights=weights))
    stats = OrderedDict([
        (name + ' Mean', mean),
        (name + ' Std', std),
    ])
    if not exclude_max_min:
        stats[name + ' Max'] = np.max(data)
        stats[name + ' Min'] = np.min(data)
    return stats


def column_norm_diagnostics(column_norms, n_reported=None):
    """
    Completeness summary of an overlap matrix.

    :param column_norms: sum_{n'} |O_{n'n}|^2 for each column n.
    :param n_reported: Only the first `n_reported` columns count toward the
    worst-column figure (the top of a truncated basis is always incomplete).
    """
    norms = np.asarray(column_norms, dtype=float)
    if n_reported is not None:
        norms = norms[:n_reported]
    worst = int(np.argmin(norms))
    return OrderedDict([
        ('worst_column', worst),
        ('worst_column_norm', float(norms[worst])),
        ('max_deficit', float(1.0 - norms[worst])),
    ])
