"""Piecewise clock trajectories and the Rindler geometry of a rigid cavity.

A trajectory is an ordered list of segments, each either inertial or at
constant proper acceleration, with durations given as proper time at the
cavity center.  This module does purely classical special-relativistic
bookkeeping in SI units (seconds, meters, m/s^2); the field-mode machinery
lives in :mod:`cavityclock.modes`.

Sign convention: proper_acceleration > 0 accelerates toward +x.  A rigid
cavity of length L accelerating at a sits at Rindler coordinates
[chi_c - L/2, chi_c + L/2] with chi_c = c^2/|a|; it must stay outside the
Rindler horizon, i.e. h = |a| L / c^2 < 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .constants import C
from .errors import HorizonError, ValidationError


class SegmentKind(Enum):
    INERTIAL = "inertial"
    ACCELERATED = "accelerated"


@dataclass(frozen=True)
class Segment:
    """One piece of a trajectory: proper duration at the cavity center (s)
    and signed proper acceleration (m/s^2, zero for inertial segments)."""

    kind: SegmentKind
    proper_duration: float
    proper_acceleration: float = 0.0

    def __post_init__(self):
        if self.proper_duration < 0:
            raise ValidationError(
                f"proper_duration must be >= 0, got {self.proper_duration}")
        if self.kind is SegmentKind.INERTIAL and self.proper_acceleration != 0.0:
            raise ValidationError(
                "inertial segment must have zero proper acceleration")


def make_segment(kind: SegmentKind | str, proper_duration: float,
                 proper_acceleration: float = 0.0) -> Segment:
    """Validated Segment constructor; `kind` may be the enum or its value."""
    if isinstance(kind, str):
        kind = SegmentKind(kind.lower())
    return Segment(kind, float(proper_duration), float(proper_acceleration))


@dataclass(frozen=True)
class Trajectory:
    """An ordered block of segments, repeated `repetitions` times."""

    segments: tuple[Segment, ...]
    repetitions: int = 1

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.repetitions < 1:
            raise ValidationError(
                f"repetitions must be >= 1, got {self.repetitions}")
        if not self.segments:
            raise ValidationError("trajectory needs at least one segment")

    @property
    def total_segments(self) -> int:
        return len(self.segments) * self.repetitions

    @property
    def proper_duration(self) -> float:
        """Total proper time at the cavity center (s), repetitions included."""
        return self.repetitions * sum(s.proper_duration for s in self.segments)


def build_twin_trajectory(t_a: float, t_i: float, repetitions: int,
                          a: float) -> Trajectory:
    """Round-trip block [+a, t_a][coast t_i][-a, 2 t_a][coast t_i][+a, t_a].

    The block starts and ends at rest at the same position (closure), so the
    composed trajectory is `repetitions` consecutive round trips.  Zero-length
    coasts are kept as explicit segments.
    """
    if t_a <= 0:
        raise ValidationError(f"t_a must be > 0, got {t_a}")
    if t_i < 0:
        raise ValidationError(f"t_i must be >= 0, got {t_i}")
    acc = SegmentKind.ACCELERATED
    coast = Segment(SegmentKind.INERTIAL, float(t_i))
    block = (
        Segment(acc, float(t_a), float(a)),
        coast,
        Segment(acc, 2.0 * float(t_a), -float(a)),
        coast,
        Segment(acc, float(t_a), float(a)),
    )
    return Trajectory(block, repetitions)


@dataclass(frozen=True)
class RindlerGeometry:
    """Rindler-wedge layout of a rigid cavity: chi_center = c^2/|a| and the
    dimensionless size parameter h = |a| L / c^2 (horizon at h = 2)."""

    chi_center: float
    chi_inner: float
    chi_outer: float
    h: float


def rindler_geometry(a: float, L: float) -> RindlerGeometry:
    """Geometry for proper acceleration a (m/s^2, |a| used) and length L (m)."""
    if a == 0:
        raise ValidationError("rindler_geometry needs a != 0")
    if L <= 0:
        raise ValidationError(f"cavity length must be > 0, got {L}")
    h = abs(a) * L / C**2
    if h >= 2:
        raise HorizonError(
            f"cavity intersects the Rindler horizon: h = aL/c^2 = {h:.6g} >= 2")
    chi_c = C**2 / abs(a)
    return RindlerGeometry(chi_c, chi_c - L / 2, chi_c + L / 2, h)


_MAX_RAPIDITY = 700.0  # cosh overflows just beyond this


def _propagate(w: float, seg: Segment) -> tuple[float, float, float]:
    """Advance (coordinate time, displacement, rapidity) across one segment
    starting at rapidity w, in the initial rest frame of the trajectory."""
    tau = seg.proper_duration
    a = seg.proper_acceleration
    if seg.kind is SegmentKind.INERTIAL or a == 0.0:
        return tau * math.cosh(w), C * tau * math.sinh(w), 0.0
    dw = a * tau / C
    if max(abs(w), abs(w + dw)) > _MAX_RAPIDITY:
        raise ValidationError(
            f"rapidity {w + dw:.3g} exceeds the representable range")
    # product forms of sinh(w+dw)-sinh(w) etc.: no cancellation for small dw
    half = math.sinh(0.5 * dw)
    dt = (2.0 * C / a) * math.cosh(w + 0.5 * dw) * half
    dx = (2.0 * C**2 / a) * math.sinh(w + 0.5 * dw) * half
    return dt, dx, dw


def final_kinematics(traj: Trajectory) -> tuple[float, float, float]:
    """(coordinate time s, net displacement m, final rapidity) in the frame
    where the trajectory starts at rest."""
    t = x = w = 0.0
    for _ in range(traj.repetitions):
        for seg in traj.segments:
            dt, dx, dw = _propagate(w, seg)
            t += dt
            x += dx
            w += dw
    return t, x, w


def is_closed(traj: Trajectory, rtol: float = 1e-12) -> bool:
    """True if the trajectory returns to rest at its starting position.

    Residuals are judged relative to the largest rapidity and displacement
    excursions actually reached, so closure is meaningful even for
    ultrarelativistic legs whose outbound terms cancel.
    """
    x = w = 0.0
    w_scale = x_scale = 0.0
    for _ in range(traj.repetitions):
        for seg in traj.segments:
            _, dx, dw = _propagate(w, seg)
            x += dx
            w += dw
            w_scale = max(w_scale, abs(w))
            x_scale = max(x_scale, abs(x), abs(dx))
    w_ok = abs(w) <= rtol * max(w_scale, 1.0)
    x_ok = abs(x) <= rtol * max(x_scale, 1.0)
    return w_ok and x_ok


def elapsed_times(traj: Trajectory) -> tuple[float, float]:
    """(tau_rob, tau_alice): proper time of the moving clock's center vs
    coordinate time of a stationary observer in the initial rest frame."""
    t, _, _ = final_kinematics(traj)
    return traj.proper_duration, t


def concat(trajectories: Iterable[Trajectory]) -> Trajectory:
    """Concatenate trajectories into one (repetition blocks expanded)."""
    segs: list[Segment] = []
    for tr in trajectories:
        segs.extend(tr.segments * tr.repetitions)
    return Trajectory(tuple(segs), 1)
