"""Figure rendering for the report paths.

Values in this project overflow any linear axis almost immediately, so plots
show bit lengths (log2 scale up to one bit).  Output is deterministic: SVG
hash salts are pinned and no timestamps are embedded, so re-running a command
with the same inputs reproduces the file byte for byte.
"""

from __future__ import annotations

from typing import Optional, Sequence


def _mpl():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "growth-forge"
    import matplotlib.pyplot as plt

    return plt


def save_bitlength_plot(path, xs: Sequence[int], values: Sequence[int], *,
                        title: str, ylabel: str = "bits of f(n)",
                        label: Optional[str] = None) -> None:
    """Plot ``bit_length`` of exact values against the index and save."""
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(list(xs), [v.bit_length() for v in values], lw=1.2, label=label)
    ax.set_xlabel("n")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if label:
        ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, metadata=_clean_metadata(path))
    plt.close(fig)


def save_count_plot(path, xs: Sequence[int], series: dict[str, Sequence[int]], *,
                    title: str, ylabel: str = "count") -> None:
    """Plot one or more integer series on a log-scaled axis."""
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(7, 4.2))
    for name, values in series.items():
        ax.plot(list(xs), [int(v) for v in values], lw=1.2, label=name)
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, metadata=_clean_metadata(path))
    plt.close(fig)


def _clean_metadata(path) -> Optional[dict]:
    name = str(path).lower()
    if name.endswith(".svg"):
        return {"Date": None}
    if name.endswith(".png"):
        return None
    return None
