"""Metrics extracted from transient traces.

Thresholds, switching times, linearity and symmetry feed the per-model
classification row of the comparative summary table; the pinched-hysteresis
residual verifies the memristor fingerprint on every run.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InsufficientData
from .trace import Trace


@dataclass(frozen=True)
class AnalysisOptions:
    threshold_fraction: float = 0.05
    band_lo: float = 0.1
    band_hi: float = 0.9
    # Classification cutoffs are deliberately explicit: the published
    # categories are qualitative, so the decision rule must be visible.
    linear_r2_cutoff: float = 0.99
    symmetric_lo: float = 0.9
    symmetric_hi: float = 1.11
    pinched_tol_rel: float = 1e-9


@dataclass
class AnalysisReport:
    model: str
    label: str = ""
    threshold_pos: float | None = None
    threshold_neg: float | None = None
    t_on_to_off: float | None = None
    t_off_to_on: float | None = None
    symmetry_ratio: float | None = None
    linearity_r2: float | None = None
    pinched_residual: float | None = None
    pinched: bool | None = None
    linearity_class: str = "unknown"
    symmetry_class: str = "unknown"
    options: dict = field(default_factory=dict)

    @property
    def classification(self) -> tuple[str, str]:
        return self.linearity_class, self.symmetry_class

    def to_dict(self) -> dict:
        return asdict(self)


def _up_crossings(t: np.ndarray, y: np.ndarray, level: float) -> np.ndarray:
    """Times where y rises through `level`, linearly interpolated."""
    d = y - level
    k = np.nonzero((d[:-1] < 0.0) & (d[1:] >= 0.0))[0]
    theta = -d[k] / (d[k + 1] - d[k])
    return t[k] + theta * (t[k + 1] - t[k])


def _down_crossings(t: np.ndarray, y: np.ndarray, level: float) -> np.ndarray:
    d = y - level
    k = np.nonzero((d[:-1] > 0.0) & (d[1:] <= 0.0))[0]
    theta = d[k] / (d[k] - d[k + 1])
    return t[k] + theta * (t[k + 1] - t[k])


def pinched_check(trace: Trace, tol: float | None = None) -> float:
    """Max |i| over the interpolated zero crossings of v.

    Returns the residual; the loop is pinched when it does not exceed
    `tol` (callers usually take tol relative to the peak current).
    """
    v, i = trace.v, trace.i
    residuals = [abs(float(i[k])) for k in np.nonzero(v == 0.0)[0]]
    k = np.nonzero(v[:-1] * v[1:] < 0.0)[0]
    theta = v[k] / (v[k] - v[k + 1])
    residuals.extend(np.abs(i[k] + theta * (i[k + 1] - i[k])))
    if not residuals:
        raise InsufficientData("no zero crossing of v in trace")
    return float(max(residuals))


def estimate_threshold(trace: Trace, fraction: float = 0.05,
                       polarity: str = "positive") -> float:
    """Smallest |v| of the given polarity at which |dw/dt| first exceeds
    fraction * max|dw/dt|, interpolated between samples."""
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction!r}")
    if polarity not in ("positive", "negative"):
        raise ValueError(f"polarity must be 'positive' or 'negative', got {polarity!r}")
    d = np.abs(trace.dwdt)
    d_max = float(d.max(initial=0.0))
    if d_max == 0.0:
        raise InsufficientData("dw/dt is identically zero")
    level = fraction * d_max
    delta = d - level
    k = np.nonzero((delta[:-1] < 0.0) & (delta[1:] >= 0.0))[0]
    if len(k) == 0:
        raise InsufficientData("|dw/dt| never rises through the threshold level")
    theta = -delta[k] / (delta[k + 1] - delta[k])
    v_cross = trace.v[k] + theta * (trace.v[k + 1] - trace.v[k])
    wanted = v_cross > 0.0 if polarity == "positive" else v_cross < 0.0
    if not wanted.any():
        raise InsufficientData(f"no {polarity} threshold crossing in trace")
    return float(np.abs(v_cross[wanted]).min())


def band_traversal_times(trace: Trace, lo: float = 0.1, hi: float = 0.9,
                         bounds: tuple[float, float] | None = None
                         ) -> tuple[float | None, float | None]:
    """(upward, downward) traversal times of the lo..hi state band."""
    if bounds is None:
        w_min = trace.metadata.get("w_min", float(trace.w.min(initial=0.0)))
        w_max = trace.metadata.get("w_max", float(trace.w.max(initial=0.0)))
    else:
        w_min, w_max = bounds
    span = w_max - w_min
    if span <= 0:
        raise InsufficientData("state bounds are degenerate")
    level_lo = w_min + lo * span
    level_hi = w_min + hi * span

    t_up = None
    lo_up = _up_crossings(trace.t, trace.w, level_lo)
    if len(lo_up):
        hi_up = _up_crossings(trace.t, trace.w, level_hi)
        hi_up = hi_up[hi_up >= lo_up[0]]
        if len(hi_up):
            t_up = float(hi_up[0] - lo_up[0])

    t_down = None
    hi_down = _down_crossings(trace.t, trace.w, level_hi)
    if len(hi_down):
        lo_down = _down_crossings(trace.t, trace.w, level_lo)
        lo_down = lo_down[lo_down >= hi_down[0]]
        if len(lo_down):
            t_down = float(lo_down[0] - hi_down[0])
    return t_up, t_down


def extract_switching_times(trace: Trace, lo: float = 0.1, hi: float = 0.9,
                            bounds: tuple[float, float] | None = None,
                            increasing_w_turns_on: bool | None = None
                            ) -> tuple[float, float]:
    """(t_on_to_off, t_off_to_on) from the 10-90% band traversals.

    If only one direction is traversed, its duration is reported for both
    (a single monotone trajectory has one band-crossing time regardless of
    labeling); a trace that never traverses the band is an error.
    """
    t_up, t_down = band_traversal_times(trace, lo, hi, bounds)
    if t_up is None and t_down is None:
        raise InsufficientData("state never traverses the lo..hi band")
    if t_up is None:
        t_up = t_down
    if t_down is None:
        t_down = t_up
    if increasing_w_turns_on is None:
        increasing_w_turns_on = bool(trace.metadata.get("increasing_w_turns_on", True))
    if increasing_w_turns_on:
        return t_down, t_up  # growing w drives the device toward ON
    return t_up, t_down


def linearity_metric(trace: Trace, controlled_by: str | None = None) -> float:
    """R^2 of the least-squares line of dw/dt versus the controlling drive."""
    if controlled_by is None:
        controlled_by = trace.metadata.get("controlled_by", "current")
    x = trace.v if controlled_by == "voltage" else trace.i
    y = trace.dwdt
    mask = x != 0.0
    if int(mask.sum()) < 10:
        raise InsufficientData("fewer than 10 samples with nonzero drive")
    x, y = x[mask], y[mask]
    x_c = x - x.mean()
    y_c = y - y.mean()
    sxx = float(x_c @ x_c)
    syy = float(y_c @ y_c)
    if sxx == 0.0:
        raise InsufficientData("drive column has zero variance")
    if syy == 0.0:
        raise InsufficientData("dw/dt column has zero variance")
    slope = float(x_c @ y_c) / sxx
    resid = y_c - slope * x_c
    r2 = 1.0 - float(resid @ resid) / syy
    return min(max(r2, 0.0), 1.0)


def symmetry_metric(trace: Trace, lo: float = 0.1, hi: float = 0.9,
                    bounds: tuple[float, float] | None = None,
                    increasing_w_turns_on: bool | None = None) -> float:
    """t_on_to_off / t_off_to_on."""
    t_on_to_off, t_off_to_on = extract_switching_times(
        trace, lo, hi, bounds, increasing_w_turns_on)
    if t_off_to_on == 0.0:
        raise InsufficientData("off-to-on transition time is zero")
    return t_on_to_off / t_off_to_on


def analyze_trace(trace: Trace, options: AnalysisOptions = AnalysisOptions(),
                  label: str = "") -> AnalysisReport:
    """Assemble the full report; metrics the trace cannot support are left
    absent rather than failing the run."""
    report = AnalysisReport(model=trace.metadata.get("model", "unknown"),
                            label=label, options=asdict(options))
    try:
        report.pinched_residual = pinched_check(trace)
        peak = float(np.abs(trace.i).max(initial=0.0))
        report.pinched = report.pinched_residual <= options.pinched_tol_rel * peak
    except InsufficientData:
        pass
    for attr, polarity in (("threshold_pos", "positive"),
                           ("threshold_neg", "negative")):
        try:
            setattr(report, attr,
                    estimate_threshold(trace, options.threshold_fraction, polarity))
        except InsufficientData:
            pass
    try:
        report.t_on_to_off, report.t_off_to_on = extract_switching_times(
            trace, options.band_lo, options.band_hi)
        if report.t_off_to_on > 0.0:
            report.symmetry_ratio = report.t_on_to_off / report.t_off_to_on
    except InsufficientData:
        pass
    try:
        report.linearity_r2 = linearity_metric(trace)
    except InsufficientData:
        pass
    if report.linearity_r2 is not None:
        report.linearity_class = (
            "linear" if report.linearity_r2 >= options.linear_r2_cutoff
            else "nonlinear")
    if report.symmetry_ratio is not None:
        report.symmetry_class = (
            "symmetric"
            if options.symmetric_lo <= report.symmetry_ratio <= options.symmetric_hi
            else "asymmetric")
    return report


_TABLE_FIELDS = ("label", "model", "linearity_r2", "symmetry_ratio",
                 "threshold_pos", "classification")


@dataclass
class SummaryTable:
    reports: list[AnalysisReport]

    def rows(self) -> list[dict]:
        rows = []
        for r in self.reports:
            rows.append({
                "label": r.label or r.model,
                "model": r.model,
                "linearity_r2": r.linearity_r2,
                "symmetry_ratio": r.symmetry_ratio,
                "threshold_pos": r.threshold_pos,
                "classification": f"{r.linearity_class}, {r.symmetry_class}",
            })
        return rows

    def to_text(self) -> str:
        def fmt(value) -> str:
            if value is None:
                return "-"
            if isinstance(value, float):
                return f"{value:.6g}"
            return str(value)

        rows = [[fmt(row[f]) for f in _TABLE_FIELDS] for row in self.rows()]
        header = list(_TABLE_FIELDS)
        widths = [max(len(header[c]), *(len(r[c]) for r in rows)) if rows
                  else len(header[c]) for c in range(len(header))]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        for r in rows:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        lines = [",".join(_TABLE_FIELDS)]
        for row in self.rows():
            cells = []
            for f in _TABLE_FIELDS:
                value = row[f]
                if value is None:
                    cells.append("")
                elif isinstance(value, float):
                    cells.append(repr(value))
                else:
                    cells.append(f'"{value}"' if "," in str(value) else str(value))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def build_summary_table(reports: list[AnalysisReport]) -> SummaryTable:
    if not reports:
        raise InsufficientData("summary table needs at least one report")
    return SummaryTable(list(reports))
