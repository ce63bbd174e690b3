"""The three device models as pure evaluations.

Each model is reduced to two functions of the scalar internal state w and
the electrical drive: a state velocity dw/dt and a port relation linking
device voltage and current.

Unit conventions (chosen to keep each model's published constants verbatim):

* Strukov: w is the doped-region width in meters, bounded by (0, D).
* Yang: w is the normalized state in [0, 1]; the dynamics exponent m acts
  on the device voltage, the influence exponent n on w itself.
* Pickett: w is the tunneling gap in nanometers; all lengths and velocities
  of its parameter set are in nm and nm/s, because the numeric constants of
  the tunnel-current formula (0.0617, 0.1148, 10.24634, 0.0998) assume nm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OutOfValidityRange, OverflowCap, StateOutOfBounds

# Arguments of exp/sinh beyond this cap would overflow double precision;
# hitting it means the parameter set is bad, so it is an error rather than
# a silent saturation.
EXP_ARG_CAP = 700.0

# Constants of the Simmons tunnel-current fit (nm / V / A conventions).
TUNNEL_PREFACTOR = 0.0617
BARRIER_LOG_COEF = 0.1148
B_PER_NM = 10.24634
LAMBDA_NUMERATOR = 0.0998


def _exp(x: float) -> float:
    if abs(x) > EXP_ARG_CAP:
        raise OverflowCap(f"exp argument {x:.6g} exceeds cap {EXP_ARG_CAP:g}")
    return math.exp(x)


def _sinh(x: float) -> float:
    if abs(x) > EXP_ARG_CAP:
        raise OverflowCap(f"sinh argument {x:.6g} exceeds cap {EXP_ARG_CAP:g}")
    return math.sinh(x)


@dataclass(frozen=True)
class DeviceState:
    """Scalar internal state w together with its admissible interval."""

    w: float
    w_min: float
    w_max: float

    def __post_init__(self):
        if not self.w_min < self.w_max:
            raise StateOutOfBounds(
                f"w_min ({self.w_min!r}) must be below w_max ({self.w_max!r})"
            )

    @property
    def span(self) -> float:
        return self.w_max - self.w_min

    def clamped(self) -> "DeviceState":
        w = min(max(self.w, self.w_min), self.w_max)
        return DeviceState(w, self.w_min, self.w_max)


@dataclass(frozen=True)
class StrukovParams:
    """Linear ion-drift parameters: mobility, end resistances, film thickness."""

    mu_v: float  # m^2 V^-1 s^-1
    r_on: float  # ohm
    r_off: float  # ohm
    d: float  # m

    def __post_init__(self):
        if self.r_on <= 0 or self.d <= 0 or self.mu_v <= 0:
            raise ValueError("mu_v, r_on and d must be strictly positive")
        if not self.r_off > self.r_on:
            raise ValueError("r_off must exceed r_on")
        if not math.isfinite(self.r_off / self.r_on):
            raise ValueError("resistance transfer ratio must be finite")

    @property
    def transfer_ratio(self) -> float:
        return self.r_off / self.r_on


@dataclass(frozen=True)
class YangParams:
    """Rectifier-plus-memristor parameters; m must be an odd integer."""

    alpha: float  # s^-1 V^-m (normalized state)
    m: int
    beta: float  # A
    delta: float  # V^-1
    chi: float  # A
    gamma: float  # V^-1
    n: int

    def __post_init__(self):
        if self.m <= 0 or self.m % 2 == 0:
            raise ValueError(f"m must be an odd positive integer, got {self.m}")
        if self.n < 0:
            raise ValueError(f"n must be a nonnegative integer, got {self.n}")
        if self.beta < 0 or self.delta < 0 or self.chi < 0 or self.gamma < 0:
            raise ValueError("beta, delta, chi and gamma must be nonnegative")


@dataclass(frozen=True)
class PickettParams:
    """Tunnel-barrier drift parameters (nm / nm/s / A conventions)."""

    f_off: float  # nm/s
    f_on: float  # nm/s
    i_off: float  # A
    i_on: float  # A
    a_off: float  # nm
    a_on: float  # nm
    b: float  # A
    w_c: float  # nm
    r_s: float  # ohm
    phi_0: float = 0.95  # V
    w_1: float = 0.1261  # nm
    # The tunnel formula's output unit is not pinned by its prefactor; this
    # explicit multiplier converts it to amperes instead of hiding a fudge.
    current_scale: float = 1.0

    def __post_init__(self):
        positive = {
            "f_off": self.f_off, "f_on": self.f_on,
            "i_off": self.i_off, "i_on": self.i_on,
            "a_off": self.a_off, "a_on": self.a_on,
            "b": self.b, "w_c": self.w_c,
            "phi_0": self.phi_0, "w_1": self.w_1,
            "current_scale": self.current_scale,
        }
        for name, value in positive.items():
            if value <= 0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if self.r_s < 0:
            raise ValueError(f"r_s must be nonnegative, got {self.r_s!r}")


@dataclass(frozen=True)
class PickettAuxiliaries:
    """Intermediate quantities of the tunnel-current evaluation (nm, V)."""

    lam: float
    w2: float
    delta_w: float
    b_coef: float
    phi_i: float


def strukov_dwdt(state: DeviceState, i_m: float, p: StrukovParams) -> float:
    """Linear drift velocity mu_v * (R_ON / D) * i, in m/s."""
    return p.mu_v * (p.r_on / p.d) * i_m


def strukov_memristance(state: DeviceState, p: StrukovParams,
                        tol: float = 1e-9) -> float:
    """Series resistance R_ON*(w/D) + R_OFF*(1 - w/D), in ohms."""
    if state.w < -tol * p.d or state.w > (1.0 + tol) * p.d:
        raise StateOutOfBounds(
            f"w={state.w!r} m outside [0, {p.d!r}] beyond tolerance"
        )
    x = min(max(state.w / p.d, 0.0), 1.0)
    return p.r_on * x + p.r_off * (1.0 - x)


def yang_dwdt(v_m: float, p: YangParams) -> float:
    """State velocity alpha * v^m (normalized 1/s); odd in v for odd m."""
    return p.alpha * v_m ** p.m


def yang_current(state: DeviceState, v_m: float, p: YangParams) -> float:
    """Port current w^n * beta * sinh(delta v) + chi * (exp(gamma v) - 1)."""
    tunnel = state.w ** p.n * p.beta * _sinh(p.delta * v_m)
    diode = p.chi * (_exp(p.gamma * v_m) - 1.0)
    return tunnel + diode


def pickett_aux(state: DeviceState, v_g: float, p: PickettParams) -> PickettAuxiliaries:
    """Auxiliary chain lambda -> w2 -> delta_w -> B -> phi_I (w in nm).

    Raises OutOfValidityRange wherever the chain leaves the region in which
    the tunnel formula is meaningful (delta_w <= 0, log argument <= 0, or
    a non-positive barrier potential).
    """
    w = state.w
    if w <= p.w_1:
        raise OutOfValidityRange(f"gap w={w!r} nm must exceed w_1={p.w_1!r} nm")
    av = abs(v_g)
    lam = LAMBDA_NUMERATOR / w
    denom = 2.85 + 4.0 * lam - 2.0 * av
    if denom <= 0.0:
        raise OutOfValidityRange(f"w2 denominator {denom:.6g} <= 0 at |v_g|={av:.6g}")
    w2 = p.w_1 + w * (1.0 - 9.2 * lam / denom)
    delta_w = w2 - p.w_1
    if delta_w <= 0.0:
        raise OutOfValidityRange(f"delta_w={delta_w:.6g} nm <= 0 at |v_g|={av:.6g}")
    log_arg = w2 * (w - p.w_1) / (p.w_1 * (w - w2))
    if log_arg <= 0.0:
        raise OutOfValidityRange(f"log argument {log_arg:.6g} <= 0 at w={w!r} nm")
    b_coef = B_PER_NM * delta_w
    phi_i = (p.phi_0
             - av * (p.w_1 + w2) / w
             - (BARRIER_LOG_COEF / delta_w) * math.log(log_arg))
    if phi_i <= 0.0:
        raise OutOfValidityRange(f"phi_I={phi_i:.6g} V <= 0 at |v_g|={av:.6g}")
    return PickettAuxiliaries(lam=lam, w2=w2, delta_w=delta_w,
                              b_coef=b_coef, phi_i=phi_i)


def pickett_current(state: DeviceState, v_g: float, p: PickettParams) -> float:
    """Simmons tunnel current through the barrier, in amperes.

    The published formula produces |i| from |v_g|; the sign of v_g is
    restored on the result so the port relation keeps its polarity.
    """
    if v_g == 0.0:
        return 0.0
    aux = pickett_aux(state, v_g, p)
    av = abs(v_g)
    bracket = (aux.phi_i * _exp(-aux.b_coef * math.sqrt(aux.phi_i))
               - (aux.phi_i + av) * _exp(-aux.b_coef * math.sqrt(aux.phi_i + av)))
    magnitude = TUNNEL_PREFACTOR / aux.delta_w ** 2 * bracket * p.current_scale
    return math.copysign(magnitude, v_g)


def pickett_dwdt(state: DeviceState, i_m: float, p: PickettParams) -> float:
    """Gap velocity in nm/s; branches on the sign of the device current."""
    if i_m == 0.0:
        return 0.0
    if i_m > 0.0:
        f, i_scale, a = p.f_off, p.i_off, p.a_off
    else:
        f, i_scale, a = p.f_on, p.i_on, p.a_on
    inner = (state.w - a) / p.w_c - abs(i_m) / p.b
    # exp(inner) may legitimately be enormous: it only drives the gating
    # factor to zero, so saturate it instead of treating it as overflow.
    gate_exponent = math.exp(inner) if inner <= EXP_ARG_CAP else math.inf
    outer = -gate_exponent - state.w / p.w_c
    if outer == -math.inf:
        return 0.0
    return f * _sinh(i_m / i_scale) * _exp(outer)


@dataclass(frozen=True)
class StrukovModel:
    """Current-controlled linear drift model (state in meters)."""

    params: StrukovParams

    id = "strukov"
    controlled_by = "current"
    state_unit = "m"
    increasing_w_turns_on = True

    def rate(self, state: DeviceState, i_m: float) -> float:
        return strukov_dwdt(state, i_m, self.params)

    def memristance(self, state: DeviceState) -> float:
        return strukov_memristance(state, self.params)


@dataclass(frozen=True)
class YangModel:
    """Voltage-controlled model with tunable nonlinearity (normalized state)."""

    params: YangParams

    id = "yang"
    controlled_by = "voltage"
    state_unit = "1"
    increasing_w_turns_on = True

    def rate(self, state: DeviceState, v_m: float) -> float:
        return yang_dwdt(v_m, self.params)

    def current(self, state: DeviceState, v_m: float) -> float:
        return yang_current(state, v_m, self.params)


@dataclass(frozen=True)
class PickettModel:
    """Current-controlled tunnel-barrier model (state in nanometers)."""

    params: PickettParams

    id = "pickett"
    controlled_by = "current"
    state_unit = "nm"
    increasing_w_turns_on = False  # a wider gap means a more resistive device

    def rate(self, state: DeviceState, i_m: float) -> float:
        return pickett_dwdt(state, i_m, self.params)

    def barrier_current(self, state: DeviceState, v_g: float) -> float:
        return pickett_current(state, v_g, self.params)


Model = StrukovModel | YangModel | PickettModel
