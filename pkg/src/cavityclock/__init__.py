"""cavityclock: a cavity-confined field mode as a relativistic quantum clock.

Piecewise inertial/accelerated trajectories induce Bogoliubov transformations
on the cavity field; Gaussian states transported through them give the clock
time (single-mode phase) and clock precision (phase QFI), compared against
the pointlike proper-time prediction.
"""

from .clock import (ScenarioConfig, ScenarioResult, SweepPoint,
                    classical_cavity_ratio, near_horizon_geometry, run_twin,
                    schwarzschild_acceleration, sweep)
from .constants import C, G_NEWTON
from .errors import (CavityClockError, HorizonError, QuadratureError,
                     TruncationError, UnboundedVarianceError, ValidationError)
from .gauss import (GaussianParams, GaussianState, apply_full, apply_reduced,
                    coherent, embed, extract_params, mean_photon_number,
                    partial_trace, squeezed_vacuum, uncertainty_defect, vacuum)
from .metrology import (PrecisionReport, cramer_rao, phase_qfi,
                        precision_report, qfi_change_pct)
from .modes import (BasisKind, BogoliubovMap, Mode, ModeBasis, compose,
                    dump_map, free_phase_map, identity_map, inverse,
                    junction_map, kg_inner_product, load_map, mode_value,
                    symplectic_residual, trajectory_map)
from .trajectory import (RindlerGeometry, Segment, SegmentKind, Trajectory,
                         build_twin_trajectory, concat, elapsed_times,
                         final_kinematics, is_closed, make_segment,
                         rindler_geometry)

__version__ = "0.1.0"

__all__ = [
    "C", "G_NEWTON", "__version__",
    # errors
    "CavityClockError", "ValidationError", "HorizonError", "QuadratureError",
    "TruncationError", "UnboundedVarianceError",
    # trajectory
    "Segment", "SegmentKind", "Trajectory", "RindlerGeometry", "make_segment",
    "build_twin_trajectory", "rindler_geometry", "elapsed_times",
    "final_kinematics", "is_closed", "concat",
    # modes
    "BasisKind", "ModeBasis", "Mode", "BogoliubovMap", "mode_value",
    "kg_inner_product", "junction_map", "free_phase_map", "compose",
    "inverse", "identity_map", "trajectory_map", "symplectic_residual",
    "dump_map", "load_map",
    # gauss
    "GaussianState", "GaussianParams", "vacuum", "coherent",
    "squeezed_vacuum", "embed", "apply_reduced", "apply_full",
    "partial_trace", "extract_params", "mean_photon_number",
    "uncertainty_defect",
    # metrology
    "phase_qfi", "cramer_rao", "qfi_change_pct", "PrecisionReport",
    "precision_report",
    # clock
    "ScenarioConfig", "ScenarioResult", "SweepPoint", "classical_cavity_ratio",
    "run_twin", "sweep", "schwarzschild_acceleration", "near_horizon_geometry",
]
