"""
Plotting Module
Convergence plots from RunLog CSV files
"""
import logging
import os
from typing import Optional, Sequence

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .export_formats import read_runlog  # noqa: E402

logger = logging.getLogger(__name__)


def _label(path, metadata: dict) -> str:
    name = os.path.splitext(os.path.basename(str(path)))[0]
    if "mode" not in metadata:
        return name
    return (f"{name} ({metadata['mode']}, {metadata.get('stepsizes', '?')}, "
            f"tau={metadata.get('tau', '?')})")


def plot_runlogs(paths: Sequence, out, fstar: Optional[float] = None) -> str:
    """
    Objective versus iteration for one or more run logs

    Args:
        paths: RunLog CSV files
        out: PNG file to write
        fstar: Optimal value; when given the gap F - F* is drawn on a log scale

    Returns:
        The output path
    """
    fig, ax = plt.subplots(figsize=(7, 4.5))
    try:
        for path in paths:
            log = read_runlog(path)
            ks = log.ks()
            values = log.objectives()
            if fstar is not None:
                values = np.maximum(values - fstar, np.finfo(float).tiny)
            ax.plot(ks, values, label=_label(path, log.metadata))
        ax.set_xlabel("iteration k")
        if fstar is not None:
            ax.set_yscale("log")
            ax.set_ylabel("F(x_k) - F*")
        else:
            ax.set_ylabel("F(x_k)")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(out, dpi=120)
    finally:
        plt.close(fig)
    logger.info("saved plot of %d run logs to %s", len(paths), out)
    return str(out)
