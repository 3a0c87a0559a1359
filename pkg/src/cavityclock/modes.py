"""Cavity mode bases, Klein-Gordon overlaps, and Bogoliubov maps.

Conventions (fixed here, used everywhere downstream):

* Natural units: c = 1, lengths in meters, times in meters (ct).  A
  Minkowski cavity [x1, x2] of length L has mode frequencies w_n = n pi / L
  per meter of ct; a Rindler cavity [chi1, chi2] has Omega_n = n pi / u_max
  per unit Rindler time eta, with u_max = ln(chi2/chi1).
* Mode functions carry exp(-i w t) and the normalization 1/sqrt(n pi), which
  makes them orthonormal under the Klein-Gordon inner product on the t = 0
  (equivalently eta = 0) slice.
* A map with coefficient matrices (alpha, beta) takes annihilation operators
  of the old basis to b_m = sum_n (conj(alpha_mn) a_n - conj(beta_mn) a_n†);
  rows index the new basis, columns the old.  Under this convention a free
  segment advances the extracted state phase by +w_n t.
* All maps are truncated at n_max modes; `symplectic_residual` quantifies the
  truncation error on a leading interior block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import IO, Iterable

import numpy as np

from .constants import C
from .errors import HorizonError, QuadratureError, ValidationError
from .trajectory import SegmentKind, Trajectory


class BasisKind(Enum):
    MINKOWSKI = "minkowski"
    RINDLER = "rindler"


@dataclass(frozen=True)
class ModeBasis:
    """Dirichlet mode basis of a cavity, truncated at n_max modes."""

    kind: BasisKind
    x1: float
    x2: float
    n_max: int

    def __post_init__(self):
        if self.x2 <= self.x1:
            raise ValidationError("basis needs x2 > x1")
        if self.kind is BasisKind.RINDLER and self.x1 <= 0:
            raise ValidationError("Rindler basis needs x1 > 0 (horizon at chi = 0)")
        if self.n_max < 1:
            raise ValidationError("n_max must be >= 1")

    @property
    def length(self) -> float:
        return self.x2 - self.x1

    @property
    def log_ratio(self) -> float:
        """u_max = ln(x2/x1); the Rindler conformal length."""
        return math.log(self.x2 / self.x1)

    def frequency(self, n: int) -> float:
        """w_n (per meter of ct) or Omega_n (per unit eta)."""
        if not 1 <= n <= self.n_max:
            raise ValidationError(f"mode index {n} outside [1, {self.n_max}]")
        if self.kind is BasisKind.MINKOWSKI:
            return n * math.pi / self.length
        return n * math.pi / self.log_ratio

    def frequencies(self) -> np.ndarray:
        n = np.arange(1, self.n_max + 1)
        if self.kind is BasisKind.MINKOWSKI:
            return n * (np.pi / self.length)
        return n * (np.pi / self.log_ratio)


@dataclass(frozen=True)
class Mode:
    """A single (possibly conjugated) mode of a basis, for overlap integrals."""

    basis: ModeBasis
    n: int
    conjugate: bool = False

    def __post_init__(self):
        if not 1 <= self.n <= self.basis.n_max:
            raise ValidationError(
                f"mode index {self.n} outside [1, {self.basis.n_max}]")


def mode_value(basis: ModeBasis, n: int, t: float, x: float) -> complex:
    """Mode function at (t, x): the basis' own chart coordinates.

    For Rindler bases `t` is the Rindler time eta and `x` the Rindler spatial
    coordinate chi.  Boundary points are legal and give 0.
    """
    if not 1 <= n <= basis.n_max:
        raise ValidationError(f"mode index {n} outside [1, {basis.n_max}]")
    if not basis.x1 <= x <= basis.x2:
        raise ValidationError(f"point x={x} outside cavity [{basis.x1}, {basis.x2}]")
    if basis.kind is BasisKind.MINKOWSKI:
        profile = math.sin(n * math.pi * (x - basis.x1) / basis.length)
    else:
        profile = math.sin(n * math.pi * math.log(x / basis.x1) / basis.log_ratio)
    return (profile / math.sqrt(n * math.pi)) * complex(
        math.cos(basis.frequency(n) * t), -math.sin(basis.frequency(n) * t))


def _slice_profile(mode: Mode, x: np.ndarray) -> np.ndarray:
    b = mode.basis
    if b.kind is BasisKind.MINKOWSKI:
        s = np.sin(mode.n * np.pi * (x - b.x1) / b.length)
    else:
        s = np.sin(mode.n * np.pi * np.log(x / b.x1) / b.log_ratio)
    return s / math.sqrt(mode.n * math.pi)


def _slice_frequency(mode: Mode, x: np.ndarray) -> np.ndarray:
    """Local frequency w(x) with d/dt mode = -i w(x) mode on the matching
    slice; Rindler time derivatives convert as d/dt = (1/chi) d/d(eta)."""
    b = mode.basis
    sign = -1.0 if mode.conjugate else 1.0
    if b.kind is BasisKind.MINKOWSKI:
        return np.full_like(x, sign * b.frequency(mode.n))
    return sign * b.frequency(mode.n) / x


@lru_cache(maxsize=8)
def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _composite_nodes(a: float, b: float, panels: int,
                     order: int = 32) -> tuple[np.ndarray, np.ndarray]:
    x, w = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def kg_inner_product(f: Mode, g: Mode, tol: float = 1e-10,
                     max_panels: int = 1024) -> complex:
    """Klein-Gordon inner product (f, g) = -i int dx (f dt g* - g* dt f)
    on the t = 0 / eta = 0 matching slice.

    Both cavities must occupy the same slice interval.  Quadrature is
    composite Gauss-Legendre with panel doubling until two successive levels
    agree to `tol`; raises QuadratureError with the achieved estimate if the
    panel budget runs out.
    """
    fb, gb = f.basis, g.basis
    scale = max(abs(fb.x1), abs(fb.x2), 1.0)
    if abs(fb.x1 - gb.x1) > 1e-12 * scale or abs(fb.x2 - gb.x2) > 1e-12 * scale:
        raise ValidationError("modes live on different slice intervals")

    def level(panels: int) -> float:
        x, w = _composite_nodes(fb.x1, fb.x2, panels)
        integrand = ((_slice_frequency(f, x) + _slice_frequency(g, x))
                     * _slice_profile(f, x) * _slice_profile(g, x))
        return float(np.dot(w, integrand))

    panels = max(2, (f.n + g.n) // 8)
    prev = level(panels)
    estimate = math.inf
    while panels <= max_panels:
        panels *= 2
        cur = level(panels)
        estimate = abs(cur - prev)
        if estimate <= tol * max(1.0, abs(cur)):
            return complex(cur)
        prev = cur
    raise QuadratureError("kg_inner_product did not converge", estimate)


@dataclass(frozen=True)
class BogoliubovMap:
    """Truncated Bogoliubov coefficient matrices (alpha, beta)."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        a = np.array(self.alpha, dtype=complex)
        b = np.array(self.beta, dtype=complex)
        if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError("alpha and beta must be equal square matrices")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def n_max(self) -> int:
        return self.alpha.shape[0]

    @classmethod
    def identity(cls, n_max: int) -> "BogoliubovMap":
        return cls(np.eye(n_max, dtype=complex), np.zeros((n_max, n_max), complex))

    def compose(self, first: "BogoliubovMap") -> "BogoliubovMap":
        """self ∘ first: apply `first`, then this map."""
        if first.n_max != self.n_max:
            raise ValidationError(
                f"cannot compose maps of size {self.n_max} and {first.n_max}")
        a2, b2 = self.alpha, self.beta
        a1, b1 = first.alpha, first.beta
        return BogoliubovMap(a2 @ a1 + b2 @ np.conj(b1),
                             a2 @ b1 + b2 @ np.conj(a1))

    def inverse(self) -> "BogoliubovMap":
        """Symplectic inverse: alpha -> alpha†, beta -> -betaᵀ."""
        return BogoliubovMap(self.alpha.conj().T, -self.beta.T)

    def passive_part(self) -> "BogoliubovMap":
        """Mode-mixing-only map: beta zeroed, alpha re-unitarized by polar
        decomposition (the particle-creation content is discarded)."""
        u, _, vh = np.linalg.svd(self.alpha)
        return BogoliubovMap(u @ vh, np.zeros_like(self.beta))


def compose(second: BogoliubovMap, first: BogoliubovMap) -> BogoliubovMap:
    return second.compose(first)


def inverse(bmap: BogoliubovMap) -> BogoliubovMap:
    return bmap.inverse()


def identity_map(n_max: int) -> BogoliubovMap:
    return BogoliubovMap.identity(n_max)


def _diag_phase_map(frequencies: np.ndarray, duration: float) -> BogoliubovMap:
    phases = np.exp(-1j * frequencies * duration)
    n = frequencies.size
    return BogoliubovMap(np.diag(phases), np.zeros((n, n), complex))


def free_phase_map(basis: ModeBasis, duration: float) -> BogoliubovMap:
    """Free evolution for `duration` of the basis' own time coordinate
    (meters of ct for Minkowski, Rindler time eta for Rindler)."""
    if duration < 0:
        raise ValidationError(f"duration must be >= 0, got {duration}")
    return _diag_phase_map(basis.frequencies(), duration)


def _atanh_minus_z(z: float) -> float:
    """artanh(z) - z without cancellation for small z."""
    if z < 0.1:
        z2 = z * z
        acc = 0.0
        term = z * z2
        for k in (3, 5, 7, 9, 11, 13):
            acc += term / k
            term *= z2
        return acc
    return math.atanh(z) - z


def junction_map(h: float, n_max: int, tol: float = 1e-12,
                 max_panels: int = 1024) -> BogoliubovMap:
    """Instantaneous Minkowski -> Rindler basis change on the matching slice.

    Depends on the geometry only through h = aL/c^2; computed in rescaled
    units L = 1, chi1 = 1/h - 1/2.  Rows index Rindler modes, columns
    Minkowski modes.  The integrals run over u = ln(chi/chi1), where the
    Rindler profile is a pure sine; large 1/h terms are regrouped so every
    entry stays accurate down to h ~ 1e-12.
    """
    if not 0 < h:
        raise ValidationError(f"junction needs h > 0, got {h}")
    if h >= 2:
        raise HorizonError(f"cavity intersects the Rindler horizon: h = {h} >= 2")
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")

    u_max = 2.0 * math.atanh(h / 2.0)
    chi1 = 1.0 / h - 0.5
    # d = chi1 - 1/u_max, the O(1) remainder of two ~1/h terms
    d = 2.0 * _atanh_minus_z(h / 2.0) / (h * u_max) - 0.5
    n = np.arange(1.0, n_max + 1.0)
    inv_s = 1.0 / np.sqrt(np.outer(n, n))
    sum_nm = (n[:, None] + n[None, :]) / u_max
    dif_nm = (n[None, :] - n[:, None]) / u_max

    def level(panels: int) -> tuple[np.ndarray, np.ndarray]:
        u, w = _composite_nodes(0.0, u_max, panels)
        xi = chi1 * np.expm1(u)
        rind = np.sin(np.pi * np.outer(n, u) / u_max)
        mink = np.sin(np.pi * np.outer(n, xi))
        a0 = (rind * w) @ mink.T
        a1 = (rind * (w * (d + xi))) @ mink.T
        base = n[None, :] * a1
        return inv_s * (base + sum_nm * a0), inv_s * (base + dif_nm * a0)

    panels = max(2, n_max // 8)
    alpha, beta = level(panels)
    estimate = math.inf
    while panels <= max_panels:
        panels *= 2
        alpha2, beta2 = level(panels)
        estimate = max(float(np.max(np.abs(alpha2 - alpha))),
                       float(np.max(np.abs(beta2 - beta))))
        if estimate <= tol:
            return BogoliubovMap(alpha2, beta2)
        alpha, beta = alpha2, beta2
    raise QuadratureError("junction_map quadrature did not converge", estimate)


def _parity_conjugate(bmap: BogoliubovMap) -> BogoliubovMap:
    """Spatial reflection x -> x1 + x2 - x: conjugation by diag((-1)^(n+1)).

    Maps the Bogoliubov content of a +x-accelerated segment onto that of a
    -x-accelerated one (the Rindler wedge sits on the opposite side).
    """
    s = np.where(np.arange(1, bmap.n_max + 1) % 2 == 1, 1.0, -1.0)
    sign = np.outer(s, s)
    return BogoliubovMap(bmap.alpha * sign, bmap.beta * sign)


def _map_power(block: BogoliubovMap, exponent: int) -> BogoliubovMap:
    result = BogoliubovMap.identity(block.n_max)
    base = block
    e = exponent
    while e > 0:
        if e & 1:
            result = base.compose(result)
        base = base.compose(base)
        e >>= 1
    return result


def trajectory_map(traj: Trajectory, L: float, n_max: int,
                   tol: float = 1e-12) -> BogoliubovMap:
    """Whole-trajectory Bogoliubov map in the co-moving Minkowski basis.

    Each accelerated segment contributes inverse(junction) ∘ rindler_free ∘
    junction evaluated in the segment's instantaneous rest frame; inertial
    segments contribute Minkowski free evolution for their proper duration.
    Repetitions are expanded by squaring the single-block map, so 500
    repetitions cost ~9 compositions.
    """
    if L <= 0:
        raise ValidationError(f"cavity length must be > 0, got {L}")
    mink = ModeBasis(BasisKind.MINKOWSKI, 0.0, L, n_max)
    jcache: dict[float, BogoliubovMap] = {}
    block = BogoliubovMap.identity(n_max)
    for seg in traj.segments:
        block = _segment_map(seg, mink, L, n_max, tol, jcache).compose(block)
    return _map_power(block, traj.repetitions)


def _segment_map(seg, mink: ModeBasis, L: float, n_max: int, tol: float,
                 jcache: dict[float, BogoliubovMap]) -> BogoliubovMap:
    a = seg.proper_acceleration
    if seg.kind is SegmentKind.INERTIAL or a == 0.0:
        return free_phase_map(mink, C * seg.proper_duration)
    h = abs(a) * L / C**2
    if h >= 2:
        raise HorizonError(
            f"cavity intersects the Rindler horizon: h = {h:.6g} >= 2")
    junction = jcache.get(h)
    if junction is None:
        junction = junction_map(h, n_max, tol)
        jcache[h] = junction
    # Omega_n from u_max = 2 artanh(h/2) directly: the boundary-ratio route
    # log(chi2/chi1) loses ~1e-9 relative precision once h ~ 1e-7
    u_max = 2.0 * math.atanh(h / 2.0)
    omegas = np.arange(1, n_max + 1) * (math.pi / u_max)
    eta = abs(a) * seg.proper_duration / C
    segment = junction.inverse().compose(
        _diag_phase_map(omegas, eta).compose(junction))
    if a < 0:
        segment = _parity_conjugate(segment)
    return segment


def symplectic_residual(bmap: BogoliubovMap, interior: int) -> tuple[float, float]:
    """(eps1, eps2) = max-norm defects of the symplectic identities
    alpha alpha† - beta beta† = I and alpha betaᵀ - beta alphaᵀ = 0,
    restricted to the leading interior x interior block."""
    if not 1 <= interior <= bmap.n_max:
        raise ValidationError(
            f"interior block size {interior} outside [1, {bmap.n_max}]")
    a = bmap.alpha[:interior, :]
    b = bmap.beta[:interior, :]
    g1 = a @ a.conj().T - b @ b.conj().T - np.eye(interior)
    g2 = a @ b.T - b @ a.T
    return float(np.max(np.abs(g1))), float(np.max(np.abs(g2)))


_DUMP_HEADER = "# cavityclock bogoliubov map v1"
_CONVENTION = "modes exp(-iwt); b_m = conj(alpha) a - conj(beta) a_dag; row=new, col=old"


def dump_map(bmap: BogoliubovMap, fh: IO[str],
             meta: dict[str, object] | None = None) -> None:
    """Textual dump: header with n_max and convention tag, then one row per
    (m, n) pair in row-major order with shortest round-trip float fields."""
    fh.write(_DUMP_HEADER + "\n")
    fh.write(f"# n_max={bmap.n_max}\n")
    fh.write(f"# convention={_CONVENTION}\n")
    for key in sorted(meta or {}):
        fh.write(f"# {key}={meta[key]!r}\n")
    fh.write("# m n alpha_re alpha_im beta_re beta_im\n")
    for m in range(bmap.n_max):
        for n in range(bmap.n_max):
            al, be = bmap.alpha[m, n], bmap.beta[m, n]
            fh.write(f"{m + 1} {n + 1} {float(al.real)!r} {float(al.imag)!r} "
                     f"{float(be.real)!r} {float(be.imag)!r}\n")


def load_map(lines: Iterable[str]) -> BogoliubovMap:
    n_max = None
    entries = []
    for line in lines:
        line = line.strip()
        if line.startswith("# n_max="):
            n_max = int(line.split("=", 1)[1])
        elif line and not line.startswith("#"):
            entries.append(line.split())
    if n_max is None or len(entries) != n_max * n_max:
        raise ValidationError("malformed bogoliubov map dump")
    alpha = np.zeros((n_max, n_max), complex)
    beta = np.zeros((n_max, n_max), complex)
    for m, n, ar, ai, br, bi in entries:
        i, j = int(m) - 1, int(n) - 1
        alpha[i, j] = complex(float(ar), float(ai))
        beta[i, j] = complex(float(br), float(bi))
    return BogoliubovMap(alpha, beta)
