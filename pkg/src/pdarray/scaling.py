"""SNR, bandwidth, loss-factor and achievable-rate scaling laws.

Rates are in Hz*nats (natural logarithm). SNRs are linear electrical power
ratios; ``db_to_linear(20) == 100``. Beware that an *optical* power ratio in
dB maps to twice that many electrical dB under square-law detection.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .beams import GAUSSIAN, LG10, BeamKind, BeamPattern, CaptureProfile, centered_capture, offset_capture, reference_capture
from .errors import DomainError
from .hexgeom import SQRT3, array_size

__all__ = [
    "LinkBudget",
    "PdRegime",
    "PdPhysical",
    "ScalingReport",
    "db_to_linear",
    "linear_to_db",
    "nats_to_bits",
    "pd_bandwidth_physical",
    "snr_per_pd",
    "mrc_snr",
    "loss_factor",
    "beta_gauss",
    "beta_lg10",
    "beta_central_only",
    "beta_min",
    "beta_min_floor",
    "achievable_rate",
    "power_scaling",
    "compare_to_reference",
]


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(gamma):
    return 10.0 * math.log10(gamma)


def nats_to_bits(value):
    return value / math.log(2.0)


def _positive(name, value):
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and > 0, got {value}")
    return value


@dataclass(frozen=True)
class LinkBudget:
    responsivity: float  # A/W
    p_tot_optical: float  # W
    noise_density: float  # W/Hz
    ref_bandwidth: float  # Hz

    def __post_init__(self):
        for name in ("responsivity", "p_tot_optical", "noise_density", "ref_bandwidth"):
            _positive(name, getattr(self, name))

    @property
    def gamma_star(self):
        """SNR with all power on one PD of bandwidth ``ref_bandwidth``."""
        return (self.responsivity * self.p_tot_optical) ** 2 / (self.ref_bandwidth * self.noise_density)


class PdRegime(float, enum.Enum):
    """Exponent ``xi`` in ``B = M**xi * B0``."""

    CAPACITANCE_LIMITED = 1.0
    THICKNESS_OPTIMIZED = 0.5
    TRANSIT_TIME_LIMITED = 0.0


def _xi(xi):
    return float(PdRegime(float(xi)).value)


@dataclass(frozen=True)
class PdPhysical:
    permittivity: float  # F/m
    area: float  # m^2
    thickness: float  # m
    load_resistance: float  # ohm
    transit_time: float  # s

    def __post_init__(self):
        for name in ("permittivity", "load_resistance", "transit_time"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(f"{name} must be finite and >= 0, got {value}")
        _positive("area", self.area)
        _positive("thickness", self.thickness)

    @property
    def junction_capacitance(self):
        return self.permittivity * self.area / self.thickness


def pd_bandwidth_physical(phys: PdPhysical) -> float:
    """3-dB bandwidth ``1 / sqrt((2 pi R_L C_j)^2 + (2 pi t_tau)^2)`` in Hz."""
    rc = 2.0 * math.pi * phys.load_resistance * phys.junction_capacitance
    transit = 2.0 * math.pi * phys.transit_time
    if rc == 0.0 and transit == 0.0:
        raise DomainError("bandwidth is unbounded: both R_L*C_j and the transit time are zero")
    return 1.0 / math.hypot(rc, transit)


@dataclass(frozen=True)
class ScalingReport:
    m: int
    xi: float
    gamma_star: float
    beta_sq: float
    beta_min_sq: float
    rate_array: float
    rate_ref: float
    meets_reference: bool
    alpha: float


def snr_per_pd(budget: LinkBudget, p_m, bandwidth) -> float:
    """Electrical SNR of one PD receiving optical power ``p_m``: ``(R p_m)^2 / (B N0)``."""
    p_m = float(p_m)
    if not (math.isfinite(p_m) and p_m >= 0):
        raise DomainError(f"optical power must be finite and >= 0, got {p_m}")
    bandwidth = _positive("bandwidth", bandwidth)
    return (budget.responsivity * p_m) ** 2 / (bandwidth * budget.noise_density)


def mrc_snr(profile: CaptureProfile, budget: LinkBudget, bandwidth) -> float:
    """Maximal-ratio-combined SNR: the sum of the per-PD SNRs."""
    return math.fsum(snr_per_pd(budget, f * budget.p_tot_optical, bandwidth) for f in profile.fractions)


def loss_factor(profile) -> float:
    """Loss factor ``beta^2 = sum_m f_m^2`` of a capture profile or a fraction vector."""
    if isinstance(profile, CaptureProfile):
        if profile.beam.kind is BeamKind.UNIFORM:
            # closed form; summing M copies of (1/M)^2 is off by an ulp
            return 1.0 / profile.M
        fractions = profile.fractions
    else:
        fractions = np.asarray(profile, dtype=float)
    return math.fsum(f * f for f in fractions)


def _check_rings(G, rho):
    array_size(G)
    return int(G), _positive("rho", rho)


def beta_gauss(G, rho) -> float:
    """Gaussian-beam loss factor written out ring by ring (reference-disk normalization)."""
    G, rho = _check_rings(G, rho)
    numerator = [centered_capture(GAUSSIAN, rho) ** 2]
    for g in range(1, G + 1):
        numerator.append(6.0 * offset_capture(GAUSSIAN, 2.0 * g * rho, rho) ** 2)
        if g > 1:
            numerator.append((6 * g - 6) * offset_capture(GAUSSIAN, SQRT3 * g * rho, rho) ** 2)
    return math.fsum(numerator) / reference_capture(GAUSSIAN, G, rho) ** 2


def beta_lg10(G, rho) -> float:
    """LG10 loss factor written out ring by ring (reference-disk normalization)."""
    G, rho = _check_rings(G, rho)
    numerator = [centered_capture(LG10, rho) ** 2]
    for g in range(1, G + 1):
        numerator.append(6.0 * offset_capture(LG10, 2.0 * g * rho, rho) ** 2)
        if g > 1:
            numerator.append((6 * g - 6) * offset_capture(LG10, SQRT3 * g * rho, rho) ** 2)
    return math.fsum(numerator) / reference_capture(LG10, G, rho) ** 2


def beta_central_only(beam, G, rho) -> float:
    """Loss factor when only the central PD is read out: ``f_central^2``."""
    G, rho = _check_rings(G, rho)
    beam = beam if isinstance(beam, BeamPattern) else BeamPattern(BeamKind(beam))
    if not beam.has_geometry:
        raise DomainError(f"central-only loss factor needs a Gaussian or LG10 beam, got {beam.kind.value}")
    return (centered_capture(beam, rho) / reference_capture(beam, G, rho)) ** 2


def beta_min(m, xi, gamma_star) -> float:
    """Smallest loss factor at which ``m`` PDs match the single reference PD.

    ``(M^xi / g) * ((1 + g)^(1/M^xi) - 1)`` evaluated as
    ``expm1(log1p(g) / M^xi) * M^xi / g``.
    """
    if m < 1:
        raise DomainError(f"PD count must be >= 1, got {m}")
    xi = _xi(xi)
    gamma_star = _positive("gamma_star", gamma_star)
    scale = float(m) ** xi
    if scale == 1.0:
        return 1.0
    return math.expm1(math.log1p(gamma_star) / scale) * scale / gamma_star


def beta_min_floor(gamma_star) -> float:
    """Large-``M`` limit of :func:`beta_min` for ``xi > 0``: ``ln(1 + g) / g``."""
    gamma_star = _positive("gamma_star", gamma_star)
    return math.log1p(gamma_star) / gamma_star


def achievable_rate(m, xi, beta_sq, gamma_star, b0) -> float:
    """Shannon rate ``M^xi B0 ln(1 + beta^2 g / M^xi)`` of the array, in Hz*nats."""
    if m < 1:
        raise DomainError(f"PD count must be >= 1, got {m}")
    if not (0.0 <= beta_sq and math.isfinite(beta_sq)):
        raise DomainError(f"beta_sq must be finite and >= 0, got {beta_sq}")
    xi = _xi(xi)
    gamma_star = _positive("gamma_star", gamma_star)
    b0 = _positive("b0", b0)
    scale = float(m) ** xi
    return scale * b0 * math.log1p(beta_sq * gamma_star / scale)


def power_scaling(beta_sq, beta_min_sq) -> float:
    """Optical power factor ``alpha = sqrt(beta_min^2 / beta^2)``; ``inf`` when ``beta^2 == 0``."""
    if beta_sq == 0.0:
        return math.inf
    return math.sqrt(beta_min_sq / beta_sq)


def compare_to_reference(m, xi, beta_sq, gamma_star, b0) -> ScalingReport:
    """Compare an ``m``-PD array with loss factor ``beta_sq`` to the single reference PD."""
    xi = _xi(xi)
    bmin = beta_min(m, xi, gamma_star)
    rate_array = achievable_rate(m, xi, beta_sq, gamma_star, b0)
    rate_ref = _positive("b0", b0) * math.log1p(gamma_star)
    return ScalingReport(
        m=int(m),
        xi=xi,
        gamma_star=float(gamma_star),
        beta_sq=float(beta_sq),
        beta_min_sq=bmin,
        rate_array=rate_array,
        rate_ref=rate_ref,
        meets_reference=beta_sq >= bmin,
        alpha=power_scaling(beta_sq, bmin),
    )
