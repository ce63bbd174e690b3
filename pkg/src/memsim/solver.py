"""Transient integration of dw/dt = f(w, drive(t)) for any device model.

Two integrators are provided: fixed-step classical RK4 and an adaptive
Fehlberg 4(5) pair.  The drive is evaluated at stage times; whenever the
drive kind differs from the model's controlling quantity, the port relation
is resolved at every stage so the coupled system keeps the formal order.

The state is hard-clamped to its bounds after each accepted step.  A
derivative pointing outward at (or beyond) a bound is treated as zero,
which is what keeps the strongly one-sided tunnel-barrier dynamics from
blowing up intermediate stages.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .drive import DriveSignal
from .errors import ConfigError, MemsimError, NoConvergence, SolverDiverged
from .models import (DeviceState, Model, PickettModel, StrukovModel,
                     YangModel, pickett_current, yang_current)
from .rootfind import newton_bisection
from .trace import Trace

METHODS = ("rk4_fixed", "rk45_adaptive")


@dataclass(frozen=True)
class SolverConfig:
    method: str = "rk4_fixed"
    dt: float = 1e-5  # s, fixed-step size
    t_end: float = 1.0  # s
    # Adaptive-step controls (rk45_adaptive only).
    dt_min: float = 1e-12
    dt_max: float = 1e-2
    rel_tol: float = 1e-8
    abs_tol: float = 1e-15
    # Implicit port solves.
    newton_tol: float = 1e-12
    newton_max_iter: int = 100

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.dt <= 0 or self.t_end <= 0:
            raise ConfigError("dt and t_end must be positive")
        if self.dt_min <= 0 or self.dt_max < self.dt_min:
            raise ConfigError("need 0 < dt_min <= dt_max")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ConfigError("rel_tol and abs_tol must be positive")
        if self.newton_tol <= 0 or self.newton_max_iter < 1:
            raise ConfigError("newton_tol must be positive and newton_max_iter >= 1")


def solve_gap_voltage(state: DeviceState, v_m: float, params,
                      cfg: SolverConfig, hint: float | None = None) -> float:
    """Barrier voltage v_g with v_m = v_g + i(w, v_g) * R_S.

    Newton iteration with a guaranteed bisection fallback on the bracket
    [0, v_m]; the tunnel current is monotone in v_g, so the bracket always
    contains exactly one root.
    """
    if v_m == 0.0:
        return 0.0
    if params.r_s == 0.0:
        return v_m

    def residual(v_g: float) -> float:
        return v_m - v_g - pickett_current(state, v_g, params) * params.r_s

    ftol = cfg.newton_tol * max(1.0, abs(v_m))
    return newton_bisection(residual, 0.0, v_m, x0=hint, ftol=ftol,
                            max_iter=cfg.newton_max_iter)


def _solve_current_equation(current_of, i_target: float, ftol: float,
                            max_iter: int, hint: float | None) -> float:
    """Bias v with current_of(v) == i_target (current_of monotone, odd sign).

    A warm-started secant iteration handles the common case (consecutive
    trace samples); the bracketed Newton/bisection path is the guaranteed
    fallback.
    """
    sign = 1.0 if i_target > 0 else -1.0
    if hint is not None and hint * sign > 0.0:
        x0 = hint
        try:
            f0 = current_of(x0) - i_target
            if abs(f0) <= ftol:
                return x0
            x1 = x0 * 1.001 + sign * 1e-9
            f1 = current_of(x1) - i_target
            for _ in range(12):
                if f1 == f0:
                    break
                x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
                if x2 * sign <= 0.0:
                    break
                f2 = current_of(x2) - i_target
                if abs(f2) <= ftol:
                    return x2
                x0, f0, x1, f1 = x1, f1, x2, f2
        except MemsimError:
            pass
    hi = _expand_current_bracket(current_of, i_target)
    lo, hi = (0.0, hi) if hi > 0 else (hi, 0.0)
    return newton_bisection(lambda v: current_of(v) - i_target, lo, hi,
                            x0=hint, ftol=ftol, max_iter=max_iter)


def _expand_current_bracket(current_of, i_target: float) -> float:
    """Outer bracket endpoint v with |current(v)| >= |i_target|.

    Expands geometrically from zero bias; when the validity window ends
    before the target current is reached, backs off to the window edge and
    reports the unreachable demand.
    """
    sign = 1.0 if i_target > 0 else -1.0
    hi = 0.05 * sign
    last_good = 0.0
    for _ in range(60):
        try:
            value = current_of(hi)
        except MemsimError:
            # Shrink toward the last evaluable point to sit just inside
            # the validity window.
            bad = hi
            for _ in range(60):
                mid = 0.5 * (last_good + bad)
                try:
                    value = current_of(mid)
                except MemsimError:
                    bad = mid
                    continue
                if abs(value) >= abs(i_target):
                    return mid
                last_good = mid
            raise NoConvergence(
                f"requested current {i_target!r} A is outside the reachable "
                f"range (validity window ends near v={last_good!r} V)")
        if abs(value) >= abs(i_target):
            return hi
        last_good = hi
        hi *= 1.8
    raise NoConvergence(f"could not bracket current {i_target!r} A")


def port_solve(model: Model, state: DeviceState, drive_value: float,
               drive_kind: str, cfg: SolverConfig,
               hint: float | None = None) -> tuple[float, float]:
    """Complete the (v_m, i_m) port pair from one driven quantity.

    `hint` warm-starts the implicit solves (previous barrier voltage for
    the tunnel model, previous device voltage for the rectifier model).
    """
    if drive_value == 0.0:
        return 0.0, 0.0

    if isinstance(model, StrukovModel):
        m = model.memristance(state)
        if drive_kind == "current":
            return m * drive_value, drive_value
        return drive_value, drive_value / m

    if isinstance(model, YangModel):
        if drive_kind == "voltage":
            return drive_value, model.current(state, drive_value)
        i_target = drive_value
        v = _solve_current_equation(
            lambda v: yang_current(state, v, model.params), i_target,
            ftol=cfg.newton_tol * max(1.0, abs(i_target)),
            max_iter=cfg.newton_max_iter, hint=hint)
        return v, i_target

    if isinstance(model, PickettModel):
        p = model.params
        if drive_kind == "voltage":
            v_g = solve_gap_voltage(state, drive_value, p, cfg, hint=hint)
            return drive_value, pickett_current(state, v_g, p)
        i_target = drive_value
        v_g = _solve_current_equation(
            lambda v_g: pickett_current(state, v_g, p), i_target,
            ftol=cfg.newton_tol * max(1.0, abs(i_target)),
            max_iter=cfg.newton_max_iter, hint=hint)
        return v_g + i_target * p.r_s, i_target

    raise ConfigError(f"unknown model {model!r}")


def params_hash(model: Model) -> str:
    payload = json.dumps(asdict(model.params), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


class _PortResolver:
    """Per-run closure over model/drive with warm-started implicit solves."""

    def __init__(self, model: Model, drive: DriveSignal, bounds: tuple[float, float],
                 cfg: SolverConfig):
        self.model = model
        self.drive = drive
        self.w_min, self.w_max = bounds
        self.cfg = cfg
        self.kind_matches = drive.kind == model.controlled_by
        self._hint: float | None = None

    def _state(self, w: float) -> DeviceState:
        return DeviceState(w, self.w_min, self.w_max)

    def pair(self, t: float, w: float) -> tuple[float, float]:
        u = self.drive.evaluate(t)
        v, i = port_solve(self.model, self._state(w), u, self.drive.kind,
                          self.cfg, hint=self._hint)
        if isinstance(self.model, PickettModel):
            self._hint = v - i * self.model.params.r_s
        elif isinstance(self.model, YangModel):
            self._hint = v
        return v, i

    def controlling(self, t: float, w: float) -> float:
        if self.kind_matches:
            return self.drive.evaluate(t)
        v, i = self.pair(t, w)
        return v if self.model.controlled_by == "voltage" else i

    def rate(self, t: float, w: float) -> float:
        """Effective state velocity with the one-sided boundary rule."""
        w_eval = min(max(w, self.w_min), self.w_max)
        r = self.model.rate(self._state(w_eval), self.controlling(t, w_eval))
        if (w <= self.w_min and r < 0.0) or (w >= self.w_max and r > 0.0):
            return 0.0
        return r

    def raw_rate(self, w: float, v: float, i: float) -> float:
        ctrl = v if self.model.controlled_by == "voltage" else i
        return self.model.rate(self._state(w), ctrl)


# Fehlberg 4(5) tableau.
_RKF_C = (0.0, 0.25, 3.0 / 8.0, 12.0 / 13.0, 1.0, 0.5)
_RKF_A = (
    (),
    (0.25,),
    (3.0 / 32.0, 9.0 / 32.0),
    (1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0),
    (439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0),
    (-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0),
)
_RKF_B4 = (25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -0.2, 0.0)
_RKF_B5 = (16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0,
           -9.0 / 50.0, 2.0 / 55.0)


def integrate(model: Model, drive: DriveSignal, state0: DeviceState,
              cfg: SolverConfig) -> Trace:
    """Integrate the state over [0, t_end] and emit the sampled Trace.

    The recorded dw/dt column is the unconstrained model velocity at the
    sample (the state column already reflects clamping); this keeps the
    velocity-versus-drive characteristics meaningful through saturation.
    """
    w_min, w_max = state0.w_min, state0.w_max
    if not (w_min <= state0.w <= w_max):
        raise ConfigError(
            f"initial state {state0.w!r} outside [{w_min!r}, {w_max!r}]")
    ports = _PortResolver(model, drive, (w_min, w_max), cfg)

    ts: list[float] = []
    vs: list[float] = []
    is_: list[float] = []
    ws: list[float] = []
    rates: list[float] = []

    def record(t: float, w: float) -> None:
        try:
            v, i = ports.pair(t, w)
            rates.append(ports.raw_rate(w, v, i))
        except MemsimError as exc:
            raise type(exc)(f"t={t:.9g} s: {exc}") from exc
        ts.append(t)
        vs.append(v)
        is_.append(i)
        ws.append(w)

    def clamp(w: float) -> float:
        return min(max(w, w_min), w_max)

    def rk4_step(t: float, w: float, h: float) -> float:
        k1 = ports.rate(t, w)
        k2 = ports.rate(t + 0.5 * h, w + 0.5 * h * k1)
        k3 = ports.rate(t + 0.5 * h, w + 0.5 * h * k2)
        k4 = ports.rate(t + h, w + h * k3)
        return w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    w = state0.w
    record(0.0, w)

    if cfg.method == "rk4_fixed":
        n_full = int(cfg.t_end / cfg.dt + 1e-9)
        remainder = cfg.t_end - n_full * cfg.dt
        for k in range(n_full):
            t = k * cfg.dt
            try:
                w = clamp(rk4_step(t, w, cfg.dt))
            except MemsimError as exc:
                raise type(exc)(f"t={t:.9g} s: {exc}") from exc
            record((k + 1) * cfg.dt, w)
        if remainder > 1e-12 * cfg.t_end:
            t = n_full * cfg.dt
            w = clamp(rk4_step(t, w, remainder))
            record(cfg.t_end, w)
    else:
        t = 0.0
        h = min(cfg.dt, cfg.dt_max)
        while t < cfg.t_end:
            h = min(h, cfg.t_end - t)
            try:
                k = [0.0] * 6
                for s in range(6):
                    ws_stage = w + h * sum(a * k[j] for j, a in enumerate(_RKF_A[s]))
                    k[s] = ports.rate(t + _RKF_C[s] * h, ws_stage)
                w4 = w + h * sum(b * ks for b, ks in zip(_RKF_B4, k))
                w5 = w + h * sum(b * ks for b, ks in zip(_RKF_B5, k))
            except MemsimError as exc:
                raise type(exc)(f"t={t:.9g} s: {exc}") from exc
            err = abs(w5 - w4)
            tol = cfg.abs_tol + cfg.rel_tol * max(abs(w), abs(w5))
            if err <= tol:
                t = t + h
                w = clamp(w5)
                record(t, w)
                grow = 0.9 * (tol / err) ** 0.2 if err > 0.0 else 5.0
                h = min(max(h * min(grow, 5.0), cfg.dt_min), cfg.dt_max)
            else:
                if h <= cfg.dt_min * (1.0 + 1e-12):
                    raise SolverDiverged(
                        f"t={t:.9g} s: step underflow below dt_min={cfg.dt_min!r}")
                h = max(h * max(0.9 * (tol / err) ** 0.2, 0.2), cfg.dt_min)

    metadata = {
        "model": model.id,
        "params": asdict(model.params),
        "params_hash": params_hash(model),
        "drive": asdict(drive),
        "solver": asdict(cfg),
        "w_min": w_min,
        "w_max": w_max,
        "state_unit": model.state_unit,
        "controlled_by": model.controlled_by,
        "increasing_w_turns_on": model.increasing_w_turns_on,
    }
    return Trace(t=np.asarray(ts), v=np.asarray(vs), i=np.asarray(is_),
                 w=np.asarray(ws), dwdt=np.asarray(rates), metadata=metadata)
