"""Gaussian states in the covariance-matrix formalism, and their transport
under Bogoliubov maps.

Quadratures are X_{2n-1} = (a_n + a_n†)/2 and X_{2n} = -i(a_n - a_n†)/2, so
the vacuum covariance is I/4 and moments are ordered (q1, p1, q2, p2, ...).
The reduced single-mode update assumes every mode other than the tracked one
starts in vacuum and uncorrelated; that is what makes the environment noise
term (1/4) sum_{n != k} M_kn M_knᵀ exact.  Use `apply_full` + `partial_trace`
when that assumption does not hold.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError, ValidationError
from .modes import BogoliubovMap, symplectic_residual

logger = logging.getLogger(__name__)

_TWO_PI = 2.0 * math.pi


def _wrap_angle(x: float) -> float:
    """Wrap to the canonical branch (-pi, pi]."""
    y = math.remainder(x, _TWO_PI)
    if y <= -math.pi:
        y += _TWO_PI
    return y


@dataclass(frozen=True)
class GaussianState:
    """First moments (length 2N) and covariance matrix (2N x 2N) of N modes."""

    first_moments: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        f = np.array(self.first_moments, dtype=float)
        c = np.array(self.covariance, dtype=float)
        if f.ndim != 1 or f.size % 2 or c.shape != (f.size, f.size):
            raise ValidationError("moments must be length 2N, covariance 2N x 2N")
        if not np.allclose(c, c.T, atol=1e-12 * max(1.0, float(np.max(np.abs(c))))):
            raise ValidationError("covariance matrix must be symmetric")
        c = 0.5 * (c + c.T)
        f.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "first_moments", f)
        object.__setattr__(self, "covariance", c)

    @property
    def mode_count(self) -> int:
        return self.first_moments.size // 2


def vacuum(mode_count: int = 1) -> GaussianState:
    return GaussianState(np.zeros(2 * mode_count),
                         0.25 * np.eye(2 * mode_count))


def coherent(amplitude: float, phase: float = 0.0) -> GaussianState:
    """Single-mode coherent state: <a> = amplitude * exp(i phase)."""
    if amplitude < 0:
        raise ValidationError(f"amplitude must be >= 0, got {amplitude}")
    moments = np.array([amplitude * math.cos(phase), amplitude * math.sin(phase)])
    return GaussianState(moments, 0.25 * np.eye(2))


def squeezed_vacuum(mean_n: float, angle: float = 0.0) -> GaussianState:
    """Single-mode squeezed vacuum with <N> = sinh^2 r, r = arcsinh(sqrt N).

    `angle` is the extracted squeeze angle phi; the covariance principal axes
    sit at phi/2 with variances exp(±2r)/4.
    """
    if mean_n < 0:
        raise ValidationError(f"mean_n must be >= 0, got {mean_n}")
    r = math.asinh(math.sqrt(mean_n))
    half = 0.5 * angle
    rot = np.array([[math.cos(half), -math.sin(half)],
                    [math.sin(half), math.cos(half)]])
    cov = rot @ np.diag([0.25 * math.exp(2 * r), 0.25 * math.exp(-2 * r)]) @ rot.T
    return GaussianState(np.zeros(2), cov)


def embed(state: GaussianState, mode_count: int, k: int) -> GaussianState:
    """Place a single-mode state at mode k (1-based) of an otherwise vacuum
    `mode_count`-mode register."""
    if state.mode_count != 1:
        raise ValidationError("embed expects a single-mode state")
    if not 1 <= k <= mode_count:
        raise ValidationError(f"mode index {k} outside [1, {mode_count}]")
    base = vacuum(mode_count)
    f = np.array(base.first_moments)
    c = np.array(base.covariance)
    i = 2 * (k - 1)
    f[i:i + 2] = state.first_moments
    c[i:i + 2, i:i + 2] = state.covariance
    return GaussianState(f, c)


def _m_row(bmap: BogoliubovMap, k: int) -> np.ndarray:
    """2 x 2 x n_max stack of M_kn blocks for the (1-based) row k."""
    a = bmap.alpha[k - 1, :]
    b = bmap.beta[k - 1, :]
    amb, apb = a - b, a + b
    m = np.empty((2, 2, bmap.n_max))
    m[0, 0] = amb.real
    m[0, 1] = apb.imag
    m[1, 0] = -amb.imag
    m[1, 1] = apb.real
    return m


def apply_reduced(bmap: BogoliubovMap, k: int, state: GaussianState,
                  residual_gate: float | None = 1e-4) -> GaussianState:
    """Reduced evolution of mode k (1-based): all other modes in vacuum.

    moments' = M_kk moments, sigma' = M_kk sigma M_kkᵀ
    + (1/4) sum_{n != k} M_kn M_knᵀ.  When `residual_gate` is set, the
    symplectic residual on the interior block of size min(k+4, n_max) must
    not exceed it (truncation would silently corrupt the noise sum).
    """
    if state.mode_count != 1:
        raise ValidationError("apply_reduced expects a single-mode state")
    if not 1 <= k <= bmap.n_max:
        raise ValidationError(f"mode index {k} outside [1, {bmap.n_max}]")
    if residual_gate is not None:
        interior = min(k + 4, bmap.n_max)
        eps1, _ = symplectic_residual(bmap, interior)
        if eps1 > residual_gate:
            raise TruncationError(
                f"symplectic residual {eps1:.3e} exceeds gate {residual_gate:.3e} "
                f"on the leading {interior}x{interior} block; increase n_max")
    m = _m_row(bmap, k)
    mkk = m[:, :, k - 1]
    total = np.einsum("abn,cbn->ac", m, m)
    noise = 0.25 * (total - mkk @ mkk.T)
    cov = mkk @ state.covariance @ mkk.T + noise
    return GaussianState(mkk @ state.first_moments, 0.5 * (cov + cov.T))


def apply_full(bmap: BogoliubovMap, state: GaussianState) -> GaussianState:
    """Full multimode symplectic action on all 2N moments."""
    n = state.mode_count
    if bmap.n_max != n:
        raise ValidationError(
            f"map size {bmap.n_max} does not match state with {n} modes")
    amb = bmap.alpha - bmap.beta
    apb = bmap.alpha + bmap.beta
    s = np.empty((2 * n, 2 * n))
    s[0::2, 0::2] = amb.real
    s[0::2, 1::2] = apb.imag
    s[1::2, 0::2] = -amb.imag
    s[1::2, 1::2] = apb.real
    cov = s @ state.covariance @ s.T
    return GaussianState(s @ state.first_moments, 0.5 * (cov + cov.T))


def partial_trace(state: GaussianState, keep: int) -> GaussianState:
    """Discard all modes but `keep` (1-based): row/column deletion."""
    if not 1 <= keep <= state.mode_count:
        raise ValidationError(f"mode index {keep} outside [1, {state.mode_count}]")
    i = 2 * (keep - 1)
    idx = [i, i + 1]
    return GaussianState(state.first_moments[idx],
                         state.covariance[np.ix_(idx, idx)])


@dataclass(frozen=True)
class GaussianParams:
    """Single-mode parameters: displacement alpha >= 0, phase theta, squeezing
    xi = r exp(i phi), and purity P, all on canonical branches."""

    displacement: float
    phase: float
    squeeze_magnitude: float
    squeeze_angle: float
    purity: float


def extract_params(state: GaussianState) -> GaussianParams:
    """Parameters from the first and second moments of a single-mode state.

    r is evaluated as (1/4) ln((T+s)^2 / (4 det sigma)), the cancellation-free
    form of (1/2) artanh(s/T) with T = tr sigma and s the eigenvalue split;
    arguments at the artanh boundary are logged as clip events.
    """
    if state.mode_count != 1:
        raise ValidationError("extract_params expects a single-mode state")
    q, p = state.first_moments
    s11, s22 = state.covariance[0, 0], state.covariance[1, 1]
    s12 = state.covariance[0, 1]
    det = s11 * s22 - s12 * s12
    if s11 <= 0 or s22 <= 0 or det <= 0:
        raise ValidationError("covariance matrix is not positive definite")

    displacement = math.hypot(q, p)
    theta = math.atan2(p, q) if displacement > 0 else 0.0

    purity = 1.0 / (4.0 * math.sqrt(det))
    if purity > 1.0:
        if purity > 1.0 + 1e-9:
            raise ValidationError(
                f"covariance violates the uncertainty relation (purity {purity})")
        purity = 1.0

    trace = s11 + s22
    split = math.hypot(s11 - s22, 2.0 * s12)
    if split <= 1e-14 * trace:  # degenerate: angle undefined, report 0
        r, phi = 0.0, 0.0
    else:
        if split >= trace * (1.0 - 1e-15):
            logger.warning("squeeze extraction at artanh boundary clipped: "
                           "s/T = %.17g", split / trace)
        r = 0.25 * math.log((trace + split) ** 2 / (4.0 * det))
        phi = _wrap_angle(math.atan2(2.0 * s12, s11 - s22) - 2.0 * theta)
    return GaussianParams(displacement, theta, r, phi, purity)


def mean_photon_number(state: GaussianState) -> float:
    """<N> of a single-mode state: tr sigma + q^2 + p^2 - 1/2."""
    if state.mode_count != 1:
        raise ValidationError("mean_photon_number expects a single-mode state")
    q, p = state.first_moments
    return float(state.covariance[0, 0] + state.covariance[1, 1]
                 + q * q + p * p - 0.5)


def uncertainty_defect(state: GaussianState) -> float:
    """Smallest eigenvalue of sigma + (i/4) Omega; >= 0 for physical states
    up to rounding."""
    n = state.mode_count
    omega = np.zeros((2 * n, 2 * n))
    for m in range(n):
        omega[2 * m, 2 * m + 1] = 1.0
        omega[2 * m + 1, 2 * m] = -1.0
    eig = np.linalg.eigvalsh(state.covariance + 0.25j * omega)
    return float(eig.min())
