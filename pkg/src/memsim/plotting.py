"""Figure rendering for the report path (I-V loop, state, rate vs drive).

Figures are written next to the delimited outputs; everything here is a
plain view of a Trace, no analysis happens in this module.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .analysis import SummaryTable  # noqa: E402
from .trace import Trace  # noqa: E402

_STATE_LABEL = {"m": "w [m]", "nm": "w [nm]", "1": "w [-]"}


def render_trace_figures(trace: Trace, out_dir: str | Path, stem: str) -> list[Path]:
    """Write <stem>_iv.png, <stem>_state.png and <stem>_rate.png."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    unit = trace.metadata.get("state_unit", "1")
    title = trace.metadata.get("scenario", trace.metadata.get("model", ""))
    paths = []

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(trace.v, trace.i, lw=0.8)
    ax.axhline(0.0, color="0.8", lw=0.5)
    ax.axvline(0.0, color="0.8", lw=0.5)
    ax.set_xlabel("v [V]")
    ax.set_ylabel("i [A]")
    ax.set_title(f"{title}: I-V")
    paths.append(out_dir / f"{stem}_iv.png")
    fig.savefig(paths[-1], dpi=120, bbox_inches="tight")
    plt.close(fig)

    fig, axes = plt.subplots(2, 1, figsize=(5, 5), sharex=True)
    axes[0].plot(trace.t, trace.w, lw=0.8)
    axes[0].set_ylabel(_STATE_LABEL.get(unit, "w"))
    axes[0].set_title(f"{title}: state and drive")
    drive_kind = trace.metadata.get("drive", {}).get("kind", "current")
    if drive_kind == "voltage":
        axes[1].plot(trace.t, trace.v, lw=0.8)
        axes[1].set_ylabel("v [V]")
    else:
        axes[1].plot(trace.t, trace.i, lw=0.8)
        axes[1].set_ylabel("i [A]")
    axes[1].set_xlabel("t [s]")
    paths.append(out_dir / f"{stem}_state.png")
    fig.savefig(paths[-1], dpi=120, bbox_inches="tight")
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(5, 4))
    controlling = trace.metadata.get("controlled_by", "current")
    x = trace.v if controlling == "voltage" else trace.i
    ax.plot(x, trace.dwdt, ".", ms=1.5)
    ax.set_xlabel("v [V]" if controlling == "voltage" else "i [A]")
    ax.set_ylabel(f"dw/dt [{_STATE_LABEL.get(unit, 'w').split(' ')[-1].strip('[]')}/s]")
    ax.set_title(f"{title}: state velocity vs drive")
    paths.append(out_dir / f"{stem}_rate.png")
    fig.savefig(paths[-1], dpi=120, bbox_inches="tight")
    plt.close(fig)
    return paths


def render_summary_figure(table: SummaryTable, out_path: str | Path) -> Path:
    """Bar panels of the comparison quantities behind the summary table."""
    rows = table.rows()
    labels = [row["label"] for row in rows]
    r2 = [row["linearity_r2"] if row["linearity_r2"] is not None else 0.0
          for row in rows]
    ratio = [row["symmetry_ratio"] if row["symmetry_ratio"] is not None else 0.0
             for row in rows]
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.5))
    axes[0].bar(labels, r2, color="tab:blue")
    axes[0].axhline(0.99, color="tab:red", ls="--", lw=0.8)
    axes[0].set_ylabel("linearity $R^2$")
    axes[0].tick_params(axis="x", rotation=20)
    axes[1].bar(labels, ratio, color="tab:orange")
    axes[1].axhline(1.0, color="tab:red", ls="--", lw=0.8)
    axes[1].set_yscale("log")
    axes[1].set_ylabel("t(on->off) / t(off->on)")
    axes[1].tick_params(axis="x", rotation=20)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return out_path
