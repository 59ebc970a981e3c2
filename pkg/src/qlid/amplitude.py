"""Complex probability amplitudes in polar form.

An amplitude is stored as (magnitude, phase) with the phase kept in
[0, 2*pi).  Born's rule maps an amplitude to the probability magnitude**2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi
MAGNITUDE_SLACK = 1e-12


def canonical_phase(phase: float) -> float:
    """Wrap ``phase`` into [0, 2*pi)."""
    if not math.isfinite(phase):
        raise ValueError(f"phase must be finite, got {phase!r}")
    wrapped = math.fmod(phase, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod of a tiny negative number can round back up to exactly 2*pi
    if wrapped >= TWO_PI:
        wrapped = 0.0
    return wrapped


@dataclass(frozen=True)
class Amplitude:
    magnitude: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        m = float(self.magnitude)
        if not math.isfinite(m) or m < 0.0 or m > 1.0 + MAGNITUDE_SLACK:
            raise ValueError(f"amplitude magnitude must lie in [0, 1], got {self.magnitude!r}")
        object.__setattr__(self, "magnitude", m)
        object.__setattr__(self, "phase", canonical_phase(float(self.phase)))

    def __mul__(self, other: Amplitude) -> Amplitude:
        if not isinstance(other, Amplitude):
            return NotImplemented
        return multiply(self, other)

    @property
    def probability(self) -> float:
        return born_probability(self)

    def to_complex(self) -> complex:
        return cmath.rect(self.magnitude, self.phase)


ONE = Amplitude(1.0, 0.0)


def from_probability(p: float, phase: float = 0.0) -> Amplitude:
    """Amplitude whose Born probability is ``p``: magnitude sqrt(p)."""
    p = float(p)
    if not math.isfinite(p) or p < 0.0 or p > 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")
    return Amplitude(math.sqrt(p), phase)


def born_probability(a: Amplitude) -> float:
    return a.magnitude * a.magnitude


def multiply(a: Amplitude, b: Amplitude) -> Amplitude:
    return Amplitude(a.magnitude * b.magnitude, a.phase + b.phase)
