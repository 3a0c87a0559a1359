"""Quantum Fisher information for phase estimation and the Cramér-Rao bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnboundedVarianceError, ValidationError
from .gauss import GaussianParams


def phase_qfi(params: GaussianParams) -> float:
    """QFI for the phase of a single-mode Gaussian state:

    H = 4 alpha^2 P [cosh 2r + sinh 2r cos phi] + 4 sinh^2(2r) / (1 + P^2).

    Anchors: coherent state H = 4 <N>; pure squeezed vacuum H = 8 <N>(<N>+1).
    """
    a = params.displacement
    r = params.squeeze_magnitude
    p = params.purity
    term_disp = 4.0 * a * a * p * (math.cosh(2 * r)
                                   + math.sinh(2 * r) * math.cos(params.squeeze_angle))
    term_sq = 4.0 * math.sinh(2 * r) ** 2 / (1.0 + p * p)
    return term_disp + term_sq


def cramer_rao(qfi: float, measurements: int) -> float:
    """Best attainable standard deviation over `measurements` repetitions:
    1 / sqrt(M * H)."""
    if qfi < 0:
        raise ValidationError(f"qfi must be >= 0, got {qfi}")
    if measurements < 1:
        raise ValidationError(f"measurements must be >= 1, got {measurements}")
    if qfi == 0:
        raise UnboundedVarianceError(
            "zero Fisher information: estimator variance is unbounded")
    return 1.0 / math.sqrt(measurements * qfi)


def qfi_change_pct(before: float, after: float) -> float:
    """Change of the QFI as a percentage of its pre-motion value."""
    if before <= 0:
        raise ValidationError(f"reference qfi must be > 0, got {before}")
    return 100.0 * (after - before) / before


@dataclass(frozen=True)
class PrecisionReport:
    """QFI, the matching Cramér-Rao bound, and the change vs a reference."""

    qfi: float
    bound: float
    measurements: int
    qfi_change_pct: float | None = None


def precision_report(qfi: float, measurements: int,
                     reference: float | None = None) -> PrecisionReport:
    change = qfi_change_pct(reference, qfi) if reference is not None else None
    return PrecisionReport(qfi, cramer_rao(qfi, measurements), measurements, change)
