"""Loss-factor analysis for hexagonal photodetector arrays under square-law detection."""
from __future__ import annotations

from .allocation import (
    AllocationProblem,
    brute_force_allocation_search,
    majorizes,
    mrc_objective,
    optimal_allocation,
)
from .beams import (
    DEGENERATE,
    GAUSSIAN,
    LG10,
    UNIFORM,
    BeamKind,
    BeamPattern,
    CaptureProfile,
    Normalization,
    capture_profile,
    captured_fraction_closed,
    centered_capture,
    intensity,
    offset_capture,
    radial_intensity,
    reference_capture,
)
from .errors import (
    CapacityError,
    CsvParseError,
    DomainError,
    NumericalError,
    PdArrayError,
    ShapeError,
    UnsupportedModelError,
)
from .hexgeom import ArrayLayout, DistanceModel, Pd, PdRole, RoleKind, array_size, layout, layout_csv, rings_for
from .quadrature import CaptureEstimate, MonteCarlo, PolarAdaptive, QuadratureSpec, disk_capture, disk_capture_estimate
from .scaling import (
    LinkBudget,
    PdPhysical,
    PdRegime,
    ScalingReport,
    achievable_rate,
    beta_central_only,
    beta_gauss,
    beta_lg10,
    beta_min,
    beta_min_floor,
    compare_to_reference,
    db_to_linear,
    loss_factor,
    mrc_snr,
    pd_bandwidth_physical,
    power_scaling,
    snr_per_pd,
)
from .specfun import SpecFunConfig, bessel_i0, bessel_i0e, bessel_i1e, marcum_p, marcum_q, phi
from .sweeps import SweepKind, SweepSpec, run_sweep

__version__ = "0.1.0"
