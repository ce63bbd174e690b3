"""Time-domain drive sources (sine, triangle, pulse train).

A signal is tagged as a current or voltage drive; the transient solver uses
the tag to decide which side of the port relation it supplies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError

KINDS = ("current", "voltage")
SHAPES = ("sine", "triangle", "pulse_train")


@dataclass(frozen=True)
class DriveSignal:
    kind: str
    shape: str
    amplitude: float
    frequency: float  # Hz
    phase: float = 0.0  # rad
    offset: float = 0.0
    # Pulse-train levels and dwell times (rise = fall = 0).  For this shape
    # amplitude is the high level and `low` the low level; frequency must be
    # consistent with 1 / (t_high + t_low).
    low: float = 0.0
    t_high: float = 0.0
    t_low: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"drive kind must be one of {KINDS}, got {self.kind!r}")
        if self.shape not in SHAPES:
            raise ConfigError(f"drive shape must be one of {SHAPES}, got {self.shape!r}")
        if self.frequency <= 0:
            raise ConfigError(f"frequency must be positive, got {self.frequency!r}")
        if self.amplitude < 0:
            raise ConfigError(f"amplitude must be nonnegative, got {self.amplitude!r}")
        if self.shape == "pulse_train":
            if self.t_high <= 0 or self.t_low <= 0:
                raise ConfigError("pulse_train requires positive t_high and t_low")
            period = self.t_high + self.t_low
            if abs(self.frequency * period - 1.0) > 1e-9:
                raise ConfigError(
                    f"pulse_train frequency {self.frequency!r} Hz inconsistent "
                    f"with t_high + t_low = {period!r} s"
                )

    @property
    def period(self) -> float:
        return 1.0 / self.frequency

    def evaluate(self, t: float) -> float:
        """Deterministic waveform sample at time t (A or V per `kind`)."""
        if self.shape == "sine":
            return self.offset + self.amplitude * math.sin(
                2.0 * math.pi * self.frequency * t + self.phase)
        if self.shape == "triangle":
            # Same phase convention as the sine: zero at t=0 (phase 0),
            # peak at a quarter period, trough at three quarters.
            x = (self.frequency * t + self.phase / (2.0 * math.pi)) % 1.0
            if x < 0.25:
                y = 4.0 * x
            elif x < 0.75:
                y = 2.0 - 4.0 * x
            else:
                y = 4.0 * x - 4.0
            return self.offset + self.amplitude * y
        # pulse_train
        x = t % (self.t_high + self.t_low)
        level = self.amplitude if x < self.t_high else self.low
        return self.offset + level


def sine(kind: str, amplitude: float, frequency: float,
         phase: float = 0.0, offset: float = 0.0) -> DriveSignal:
    return DriveSignal(kind, "sine", amplitude, frequency, phase, offset)


def triangle(kind: str, amplitude: float, frequency: float,
             phase: float = 0.0, offset: float = 0.0) -> DriveSignal:
    return DriveSignal(kind, "triangle", amplitude, frequency, phase, offset)


def pulse_train(kind: str, high: float, low: float,
                t_high: float, t_low: float) -> DriveSignal:
    return DriveSignal(kind, "pulse_train", amplitude=high,
                       frequency=1.0 / (t_high + t_low),
                       low=low, t_high=t_high, t_low=t_low)
