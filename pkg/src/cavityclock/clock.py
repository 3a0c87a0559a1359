"""Twin-paradox scenario orchestration.

Runs the full pipeline: build the round-trip trajectory, compose its
Bogoliubov map, evolve the clock mode's Gaussian state, and compare the
resulting clock time (phase / mode frequency) and precision (phase QFI)
against the pointlike and classical extended-clock predictions.

Clock readout: for displaced states the phase is atan2(p, q); for squeezed
vacuum (zero displacement) the clock is read from the squeeze orientation
phi/2, which advances at the same rate but wraps with period pi.  Phases are
unwrapped against the analytic per-block anchor (Minkowski rate on coasts,
Rindler rate during acceleration), which stays within half a branch of the
truth for any configuration whose mixing corrections are perturbative.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import C, G_NEWTON
from .errors import HorizonError, TruncationError, ValidationError
from .gauss import (GaussianParams, GaussianState, apply_reduced, coherent,
                    extract_params, squeezed_vacuum)
from .metrology import phase_qfi, qfi_change_pct
from .modes import BogoliubovMap, symplectic_residual, trajectory_map
from .trajectory import RindlerGeometry, build_twin_trajectory, elapsed_times, \
    rindler_geometry


def classical_cavity_ratio(h: float) -> float:
    """Proper-time rate of the extended cavity clock relative to a pointlike
    clock at its center during constant proper acceleration:

    ratio = h / (2 artanh(h/2)) = h / ln((2+h)/(2-h)) = 1 - h^2/12 + O(h^4).

    Even in h (the wedge orientation cannot matter); 1 at h = 0.
    """
    ah = abs(h)
    if ah >= 2:
        raise HorizonError(f"ratio defined for |h| < 2, got {h}")
    if ah == 0:
        return 1.0
    return ah / (2.0 * math.atanh(ah / 2.0))


@dataclass(frozen=True)
class ScenarioConfig:
    """Twin-paradox run parameters (SI at this surface).

    The clock is mode `clock_mode` (1-based, fundamental by default) of a
    cavity of length L; `mean_n` fixes the initial state energy (coherent
    amplitude sqrt(mean_n), or squeezed vacuum with that <N>), `theta0` its
    initial phase (displacement phase, or squeeze angle).
    """

    t_a: float
    t_i: float
    L: float
    a: float
    repetitions: int
    clock_mode: int = 1
    n_max: int = 24
    state_kind: str = "coherent"
    mean_n: float = 1.0
    theta0: float = 0.0
    residual_gate: float | None = 1e-4
    quadrature_tol: float = 1e-12

    def __post_init__(self):
        if self.t_a <= 0:
            raise ValidationError(f"t_a must be > 0, got {self.t_a}")
        if self.t_i < 0:
            raise ValidationError(f"t_i must be >= 0, got {self.t_i}")
        if self.L <= 0:
            raise ValidationError(f"L must be > 0, got {self.L}")
        if self.repetitions < 1:
            raise ValidationError(
                f"repetitions must be >= 1, got {self.repetitions}")
        if self.mean_n <= 0:
            raise ValidationError(
                f"mean_n must be > 0 (a zero-energy state carries no phase "
                f"information), got {self.mean_n}")
        if self.state_kind not in ("coherent", "squeezed_vacuum"):
            raise ValidationError(f"unknown state kind {self.state_kind!r}")
        if self.clock_mode < 1:
            raise ValidationError("clock_mode must be >= 1")
        if self.clock_mode + 4 > self.n_max:
            raise ValidationError(
                f"need clock_mode + 4 <= n_max for a trusted interior block, "
                f"got k={self.clock_mode}, n_max={self.n_max}")
        if self.h >= 2:
            raise HorizonError(
                f"cavity intersects the Rindler horizon: h = {self.h:.6g} >= 2")

    @property
    def h(self) -> float:
        return abs(self.a) * self.L / C**2

    def initial_state(self) -> GaussianState:
        if self.state_kind == "coherent":
            return coherent(math.sqrt(self.mean_n), self.theta0)
        return squeezed_vacuum(self.mean_n, self.theta0)


@dataclass(frozen=True)
class ScenarioResult:
    """Clock-time decomposition and QFI before/after for one scenario."""

    h: float
    tau_alice: float
    tau_rob_pointlike: float
    tau_rob_classical_extended: float
    theta_alice: float
    theta_full: float
    theta_mm_only: float
    phase_difference_vs_alice: float
    pc_fraction: float
    qfi_before: float
    qfi_after: float
    qfi_after_mm_only: float
    qfi_change_pct_full: float
    qfi_change_pct_mm_only: float
    residual: tuple[float, float]
    phase_difference_series: np.ndarray = field(repr=False)
    config: ScenarioConfig = field(repr=False)


def _read_phase(params: GaussianParams) -> tuple[float, float]:
    """(wrapped phase, wrap period) for the clock readout."""
    if params.displacement > 1e-12:
        return params.phase, 2.0 * math.pi
    return 0.5 * params.squeeze_angle, math.pi


def _unwrap(wrapped: float, anchor: float, period: float) -> float:
    delta = math.remainder(wrapped - anchor, period)
    return anchor + delta


def run_twin(config: ScenarioConfig) -> ScenarioResult:
    """Run the twin-paradox scenario and collect the full decomposition."""
    k = config.clock_mode
    block = build_twin_trajectory(config.t_a, config.t_i, 1, config.a)
    block_map = trajectory_map(block, config.L, config.n_max,
                               tol=config.quadrature_tol)
    interior = min(k + 4, config.n_max)
    residual = symplectic_residual(block_map, interior)
    if config.residual_gate is not None and residual[0] > config.residual_gate:
        raise TruncationError(
            f"block-map symplectic residual {residual[0]:.3e} exceeds gate "
            f"{config.residual_gate:.3e}; increase n_max")

    state0 = config.initial_state()
    params0 = extract_params(state0)
    qfi_before = phase_qfi(params0)
    theta_start, period = _read_phase(params0)

    omega_k = k * math.pi / config.L
    ratio = classical_cavity_ratio(config.h)
    tau_acc_block = 4.0 * config.t_a
    tau_coast_block = 2.0 * config.t_i
    anchor_block = omega_k * C * (tau_coast_block + ratio * tau_acc_block)
    _, tau_alice_block = elapsed_times(block)

    reps = config.repetitions
    series = np.empty(reps)
    cur = BogoliubovMap.identity(config.n_max)
    state_full = state0
    theta_full = theta_start
    for rep in range(1, reps + 1):
        cur = block_map.compose(cur)
        # gate once on the final composed map below; the per-rep residual is
        # monotone in rep for these maps
        state_full = apply_reduced(cur, k, state0, residual_gate=None)
        wrapped, _ = _read_phase(extract_params(state_full))
        anchor = theta_start + rep * anchor_block
        theta_full = _unwrap(wrapped, anchor, period)
        theta_alice = theta_start + omega_k * C * (rep * tau_alice_block)
        series[rep - 1] = theta_alice - theta_full

    final_residual = symplectic_residual(cur, interior)
    if config.residual_gate is not None and final_residual[0] > config.residual_gate:
        raise TruncationError(
            f"composed-map symplectic residual {final_residual[0]:.3e} exceeds "
            f"gate {config.residual_gate:.3e}; increase n_max")

    params_full = extract_params(state_full)
    qfi_after = phase_qfi(params_full)

    mm_map = cur.passive_part()
    state_mm = apply_reduced(mm_map, k, state0, residual_gate=None)
    params_mm = extract_params(state_mm)
    qfi_after_mm = phase_qfi(params_mm)
    wrapped_mm, _ = _read_phase(params_mm)
    theta_mm = _unwrap(wrapped_mm, theta_start + reps * anchor_block, period)

    tau_alice = reps * tau_alice_block
    tau_point = reps * (tau_acc_block + tau_coast_block)
    tau_classical = reps * (tau_coast_block + ratio * tau_acc_block)
    theta_alice = theta_start + omega_k * C * tau_alice

    pc_numerator = (theta_full - theta_mm) / (omega_k * C)
    denom = tau_alice - tau_point
    if denom == 0.0:
        pc_fraction = 0.0 if pc_numerator == 0.0 else math.inf
    else:
        pc_fraction = 100.0 * pc_numerator / denom

    return ScenarioResult(
        h=config.h,
        tau_alice=tau_alice,
        tau_rob_pointlike=tau_point,
        tau_rob_classical_extended=tau_classical,
        theta_alice=theta_alice,
        theta_full=theta_full,
        theta_mm_only=theta_mm,
        phase_difference_vs_alice=theta_alice - theta_full,
        pc_fraction=pc_fraction,
        qfi_before=qfi_before,
        qfi_after=qfi_after,
        qfi_after_mm_only=qfi_after_mm,
        qfi_change_pct_full=qfi_change_pct(qfi_before, qfi_after),
        qfi_change_pct_mm_only=qfi_change_pct(qfi_before, qfi_after_mm),
        residual=final_residual,
        phase_difference_series=series,
        config=config,
    )


_SWEEP_FIELDS = ("L", "h", "mean_n", "theta0")


@dataclass(frozen=True)
class SweepPoint:
    """One grid point of a sweep: the varied value and either a result or
    the error message that point produced."""

    value: float
    result: ScenarioResult | None
    error: str | None


def _config_at(base: ScenarioConfig, vary: str, value: float) -> ScenarioConfig:
    if vary == "L":
        return replace(base, L=float(value))
    if vary == "h":
        sign = -1.0 if base.a < 0 else 1.0
        return replace(base, a=sign * float(value) * C**2 / base.L)
    if vary == "mean_n":
        return replace(base, mean_n=float(value))
    if vary == "theta0":
        return replace(base, theta0=float(value))
    raise ValidationError(f"vary must be one of {_SWEEP_FIELDS}, got {vary!r}")


def sweep(base: ScenarioConfig, vary: str, grid, threads: int = 0) -> list[SweepPoint]:
    """Run the scenario across `grid` values of one parameter.

    Points run concurrently but results come back in grid order; per-point
    failures are collected as SweepPoint.error instead of aborting the sweep.
    """
    values = [float(v) for v in grid]
    if not values:
        raise ValidationError("sweep grid must be nonempty")
    if vary not in _SWEEP_FIELDS:
        raise ValidationError(f"vary must be one of {_SWEEP_FIELDS}, got {vary!r}")

    def point(value: float) -> SweepPoint:
        try:
            result = run_twin(_config_at(base, vary, value))
            return SweepPoint(value, result, None)
        except Exception as exc:  # collected, not fatal
            return SweepPoint(value, None, f"{type(exc).__name__}: {exc}")

    workers = threads if threads > 0 else min(32, len(values))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(point, values))


def schwarzschild_acceleration(mass: float, r: float) -> float:
    """Proper acceleration of a stationary observer at Schwarzschild radius r:
    a = (c^2 r_s / 2 r^2) / sqrt(1 - r_s/r), r_s = 2GM/c^2."""
    if mass <= 0:
        raise ValidationError(f"mass must be > 0, got {mass}")
    rs = 2.0 * G_NEWTON * mass / C**2
    if r <= rs:
        raise HorizonError(
            f"no stationary observer at r = {r} <= r_s = {rs} "
            "(proper acceleration diverges at the horizon)")
    f = 1.0 - rs / r
    return C**2 * rs / (2.0 * r * r) / math.sqrt(f)


def near_horizon_geometry(mass: float, r: float,
                          L: float) -> tuple[RindlerGeometry, float]:
    """Map a stationary cavity near a Schwarzschild horizon onto the Rindler
    wedge with matching center acceleration.

    Returns the geometry and validity = (r - r_s)/r_s; the Rindler
    approximation is good when validity is small.
    """
    a_s = schwarzschild_acceleration(mass, r)
    rs = 2.0 * G_NEWTON * mass / C**2
    return rindler_geometry(a_s, L), (r - rs) / rs
