"""DET curve artifacts: CSV dump and SVG rendering on normal-deviate axes."""

from __future__ import annotations

import csv
from pathlib import Path
from statistics import NormalDist

from .metrics import DetCurve

# Rates are clipped into (0, 1) before the probit transform; rendering only,
# the CSV keeps exact values.
_PLOT_CLIP = 1e-4
_TICKS = (0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.4)


def write_det_csv(curve: DetCurve, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tau", "apcer", "bpcer"])
        for tau, a, b in curve.points():
            writer.writerow([repr(tau), repr(a), repr(b)])


def read_det_csv(path: str | Path) -> list[tuple[float, float, float]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        return [(float(r["tau"]), float(r["apcer"]), float(r["bpcer"])) for r in reader]


def _probit(rate: float) -> float:
    clipped = min(max(rate, _PLOT_CLIP), 1.0 - _PLOT_CLIP)
    return NormalDist().inv_cdf(clipped)


def render_det_svg(
    curves: list[tuple[str, DetCurve]],
    path: str | Path,
    title: str = "DET curve",
) -> None:
    """Render one or more DET curves to an SVG with probit-scaled axes."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    for label, curve in curves:
        xs = [_probit(a) for a in curve.apcer]
        ys = [_probit(b) for b in curve.bpcer]
        ax.plot(xs, ys, label=label, linewidth=1.4)

    tick_pos = [_probit(t) for t in _TICKS]
    tick_lab = [f"{100 * t:g}" for t in _TICKS]
    ax.set_xticks(tick_pos, tick_lab)
    ax.set_yticks(tick_pos, tick_lab)
    lo, hi = _probit(_PLOT_CLIP), _probit(0.5)
    ax.set_xlim(lo, hi)
    ax.set_ylim(lo, hi)
    ax.set_xlabel("APCER (%)")
    ax.set_ylabel("BPCER (%)")
    ax.set_title(title)
    ax.grid(True, linewidth=0.3)
    if len(curves) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
