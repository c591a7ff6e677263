"""
SVG rendering of result CSVs.

Output is deterministic: fixed figure size, fixed SVG id salt and no
creation date in the metadata.
"""
import os.path as osp

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

from trapecho.util import io  # noqa: E402

FIGSIZE = (6.4, 4.0)
SVG_METADATA = {'Date': None, 'Creator': 'trapecho'}

matplotlib.rcParams['svg.hashsalt'] = 'trapecho'
matplotlib.rcParams['svg.fonttype'] = 'none'


def _plot_trace(ax, frame):
    for label, rows in frame.groupby('n_index_or_ensemble', sort=False):
        ax.plot(rows['tau_s'] * 1e3, rows['P2'], label=str(label))
    ax.set_xlabel('pulse separation tau (ms)')
    ax.set_ylabel('P2')
    ax.set_ylim(-0.02, 1.02)
    if frame['n_index_or_ensemble'].nunique() > 1:
        ax.legend(loc='best', fontsize='small')


def _plot_spectrum(ax, frame):
    detuning_khz = frame['detuning_hz'] * 1e-3
    ax.plot(detuning_khz, frame['P2'])
    carrier = int(frame['P2'].to_numpy().argmax())
    ax.axvline(detuning_khz.iloc[carrier], color='0.5', linestyle='--',
               linewidth=0.8)
    ax.plot([detuning_khz.iloc[carrier]], [frame['P2'].iloc[carrier]],
            marker='v', color='C3', label='carrier')
    ax.set_xlabel('microwave detuning (kHz)')
    ax.set_ylabel('P2')
    ax.legend(loc='best', fontsize='small')


def _plot_curve(ax, frame):
    positive = frame[frame['epsilon'] > 0]
    ax.semilogx(positive['epsilon'], positive['avg_Onn4'], marker='o',
                markersize=3, label='avg |O_nn|^4')
    ax.semilogx(positive['epsilon'], positive['P2_longtime'], marker='s',
                markersize=3, label='long-time echo P2')
    ax.set_xlabel('differential light shift epsilon')
    ax.set_ylabel('value')
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc='best', fontsize='small')


def _plot_basis(ax, frame):
    for axis_label, rows in frame.groupby('axis', sort=False):
        ax.plot(rows['n'], rows['column_norm'], marker='.',
                label='column norm ({})'.format(axis_label))
    ax.set_xlabel('state index n')
    ax.set_ylabel('sum |O|^2 over branch 2')
    ax.legend(loc='best', fontsize='small')


_PLOTTERS = {
    io.TRACE: _plot_trace,
    io.SPECTRUM: _plot_spectrum,
    io.CURVE: _plot_curve,
    io.BASIS: _plot_basis,
}


def plot_csv(csv_path, kind=None, out_path=None, title=None):
    """
    Render a result CSV to SVG.

    :param kind: 'trace', 'spectrum', 'curve' or 'basis'; inferred from the
    file name when None.
    :param out_path: Defaults to the CSV path with an .svg suffix.
    :raises CsvFormatError: for malformed input.
    """
    if kind is None:
        kind = io.infer_kind(csv_path)
    frame = io.read_csv(csv_path, kind)
    if out_path is None:
        out_path = osp.splitext(csv_path)[0] + '.svg'
    fig, ax = plt.subplots(figsize=FIGSIZE)
    try:
        _PLOTTERS[kind](ax, frame)
        if title:
            ax.set_title(title)
        ax.grid(True, linewidth=0.3)
        fig.tight_layout()
        fig.savefig(out_path, format='svg', metadata=SVG_METADATA)
    finally:
        plt.close(fig)
    return out_path
