"""Bode-style figure rendering (SVG via matplotlib)."""

from __future__ import annotations

import os
import tempfile

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .response import ResponseCurve

# Display window used by the reference semilog plots.
DEFAULT_XLIM = (20.0, 24000.0)


def bode_figure(
    curves: list[ResponseCurve],
    labels: list[str],
    title: str = "Modelled Response",
    xlim: tuple[float, float] = DEFAULT_XLIM,
):
    """Overlay magnitude curves on a log-frequency axis."""
    fig, ax = plt.subplots(figsize=(8, 5))
    for curve, label in zip(curves, labels):
        ax.semilogx(curve.frequencies(), curve.magnitudes_db(), label=label)
    ax.set_xlim(*xlim)
    ax.set_xlabel("Hz")
    ax.set_ylabel("dB")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if labels and any(labels):
        ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def save_figure(fig, path: str) -> None:
    """Render to SVG atomically (temp file in the target dir, then rename)."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".svg")
    os.close(fd)
    try:
        fig.savefig(tmp, format="svg")
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
    finally:
        plt.close(fig)
