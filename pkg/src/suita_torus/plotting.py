"""Line charts of scan columns, written as standalone SVG 1.1 files."""
from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed element ids and no timestamp, so reruns are byte-identical
_RC = {
    "svg.hashsalt": "suita-torus",
    "svg.fonttype": "path",
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.5,
    "lines.markersize": 4,
}


def line_chart_svg(x, y, xlabel: str, ylabel: str, log_y: bool = False, title: str | None = None) -> str:
    """Render one series as an SVG document and return it as text."""
    with matplotlib.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        ax.plot(x, y, marker="o")
        if log_y:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
        plt.close(fig)
    return buf.getvalue()
