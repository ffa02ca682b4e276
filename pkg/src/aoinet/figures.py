'''Ratio curves rendered from experiment rows.

Kept out of the CSV path on purpose: the CSV is the byte-stable artifact,
these are for eyeballs. matplotlib is an optional dependency, imported
lazily.
'''

from __future__ import annotations

import os
from typing import Sequence

from .harness import ExperimentRow

STYLE = {
    'figure.figsize': (6.0, 4.0),
    'figure.dpi': 110,
    'axes.grid': True,
    'grid.alpha': 0.3,
    'font.size': 10,
}


def _pyplot():
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt
    return plt


def render_figures(rows: Sequence[ExperimentRow], out_dir: str) -> list[str]:
    '''One PNG per ratio curve (peak_ratio.png, avg_ratio.png). Returns paths.'''
    if not rows:
        return []
    plt = _pyplot()
    os.makedirs(out_dir, exist_ok=True)
    ks = [r.k for r in rows]
    name = rows[0].algorithm
    written = []
    for column, label in (('peak_ratio', 'peak age ratio'), ('avg_ratio', 'average age ratio')):
        with plt.rc_context(STYLE):
            fig, ax = plt.subplots()
            ax.plot(ks, [getattr(r, column) for r in rows], marker='o', label=name)
            ax.axhline(1.0, color='gray', lw=0.8, ls='--')
            ax.set_xlabel('seeding rounds k')
            ax.set_ylabel(label)
            ax.legend()
            fig.tight_layout()
            path = os.path.join(out_dir, f'{column}.png')
            fig.savefig(path)
            plt.close(fig)
        written.append(path)
    return written
