"""Parameter sweeps of the minimum and achieved loss factors, emitted as CSV tables.

Every row can be regenerated from the library call named in its header:
``betamin`` rows from :func:`beta_min`, the ``beta-*`` rows from
:func:`loss_factor` of :func:`capture_profile`.

Default grids:
  betamin      M = 1 .. 1e6 on a log grid, xi in {1, 0.5, 0}, SNR in {20, 40} dB
  beta-fixed   G = 0 .. 10, rho in {0.1, 0.5, 2}, Gaussian / LG10 / uniform
  beta-scaled  G = 0 .. 10, rho = rho0 / (G + 1) with rho0 = 1, Gaussian / LG10
The verdict column compares against beta_min at xi = 1 and 20 dB.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .beams import BeamKind, BeamPattern, Normalization, capture_profile
from .hexgeom import DistanceModel, array_size, layout
from .scaling import beta_min, beta_min_floor, db_to_linear, loss_factor

__all__ = [
    "SweepKind",
    "SweepSpec",
    "HEADERS",
    "default_m_grid",
    "sweep_betamin",
    "sweep_beta_fixed_rho",
    "sweep_beta_scaled_rho",
    "run_sweep",
    "rows_to_csv",
]


class SweepKind(str, enum.Enum):
    BETA_MIN = "betamin"
    BETA_FIXED_RHO = "beta-fixed"
    BETA_SCALED_RHO = "beta-scaled"


HEADERS = {
    SweepKind.BETA_MIN: ["M", "xi", "gamma_star_db", "gamma_star", "beta_min_sq", "floor"],
    SweepKind.BETA_FIXED_RHO: [
        "G", "M", "beam", "rho", "normalization", "distance_model",
        "beta_sq", "beta_min_sq", "meets_reference",
    ],
    SweepKind.BETA_SCALED_RHO: [
        "G", "M", "beam", "rho0", "rho", "normalization", "distance_model",
        "beta_sq", "beta_min_sq", "meets_reference", "log_gap_gauss_lg10",
    ],
}


def default_m_grid(m_max=10**6, points_per_decade=10):
    decades = math.log10(m_max)
    grid = np.unique(np.rint(np.logspace(0, decades, int(round(decades * points_per_decade)) + 1)))
    return tuple(int(m) for m in grid)


@dataclass(frozen=True)
class SweepSpec:
    kind: SweepKind
    G_max: int = 10
    M_values: tuple = field(default_factory=default_m_grid)
    rho: tuple = (0.1, 0.5, 2.0)
    rho0: float = 1.0
    xi: tuple = (1.0, 0.5, 0.0)
    snr_db: tuple = (20.0, 40.0)
    beams: tuple = None
    normalization: Normalization = Normalization.ARRAY_SUM
    distance_model: DistanceModel = DistanceModel.LUMPED_RING
    verdict_xi: float = 1.0
    verdict_snr_db: float = 20.0

    def __post_init__(self):
        object.__setattr__(self, "kind", SweepKind(self.kind))
        if self.beams is None:
            default = ("gaussian", "lg10") if self.kind is SweepKind.BETA_SCALED_RHO else ("gaussian", "lg10", "uniform")
            object.__setattr__(self, "beams", default)
        object.__setattr__(self, "normalization", Normalization(self.normalization))
        object.__setattr__(self, "distance_model", DistanceModel(self.distance_model))
        if self.kind is SweepKind.BETA_MIN:
            if not self.M_values or not self.xi or not self.snr_db:
                raise ValueError("betamin sweep needs non-empty M, xi and SNR lists")
            if min(self.M_values) < 1:
                raise ValueError("M values must be >= 1")
        else:
            if self.G_max < 0:
                raise ValueError("G_max must be >= 0")
            if not self.beams:
                raise ValueError("beam list is empty")
            for b in self.beams:
                BeamKind(b)
        if self.kind is SweepKind.BETA_FIXED_RHO:
            if not self.rho or min(self.rho) <= 0:
                raise ValueError("rho values must be non-empty and > 0")
        if self.kind is SweepKind.BETA_SCALED_RHO and not self.rho0 > 0:
            raise ValueError("rho0 must be > 0")


def _fmt(value):
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, enum.Enum):
        return value.value
    return str(value)


def rows_to_csv(kind, rows) -> str:
    header = HEADERS[SweepKind(kind)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row[col]) for col in header])
    return buf.getvalue()


def sweep_betamin(spec: SweepSpec) -> list:
    rows = []
    for snr_db in spec.snr_db:
        gamma = db_to_linear(snr_db)
        floor = beta_min_floor(gamma)
        for xi in spec.xi:
            for m in spec.M_values:
                rows.append({
                    "M": int(m),
                    "xi": float(xi),
                    "gamma_star_db": float(snr_db),
                    "gamma_star": gamma,
                    "beta_min_sq": beta_min(int(m), xi, gamma),
                    "floor": floor,
                })
    return rows


def _beta_row(beam_name, G, rho, spec, verdict_gamma):
    lay = layout(G, rho, spec.distance_model)
    beta_sq = loss_factor(capture_profile(BeamPattern(BeamKind(beam_name)), lay, spec.normalization))
    M = array_size(G)
    bmin = beta_min(M, spec.verdict_xi, verdict_gamma)
    return {
        "G": G,
        "M": M,
        "beam": beam_name,
        "rho": float(rho),
        "normalization": spec.normalization,
        "distance_model": spec.distance_model,
        "beta_sq": beta_sq,
        "beta_min_sq": bmin,
        "meets_reference": beta_sq >= bmin,
    }


def sweep_beta_fixed_rho(spec: SweepSpec) -> list:
    gamma = db_to_linear(spec.verdict_snr_db)
    rows = []
    for rho in spec.rho:
        for beam in spec.beams:
            for G in range(spec.G_max + 1):
                rows.append(_beta_row(beam, G, rho, spec, gamma))
    return rows


def sweep_beta_scaled_rho(spec: SweepSpec) -> list:
    gamma = db_to_linear(spec.verdict_snr_db)
    rows = []
    by_g = {}
    for beam in spec.beams:
        for G in range(spec.G_max + 1):
            row = _beta_row(beam, G, spec.rho0 / (G + 1), spec, gamma)
            row["rho0"] = float(spec.rho0)
            rows.append(row)
            by_g.setdefault(G, {})[beam] = row["beta_sq"]
    for row in rows:
        per_beam = by_g[row["G"]]
        if "gaussian" in per_beam and "lg10" in per_beam:
            row["log_gap_gauss_lg10"] = math.log(per_beam["gaussian"] / per_beam["lg10"])
        else:
            row["log_gap_gauss_lg10"] = ""
    return rows


_RUNNERS = {
    SweepKind.BETA_MIN: sweep_betamin,
    SweepKind.BETA_FIXED_RHO: sweep_beta_fixed_rho,
    SweepKind.BETA_SCALED_RHO: sweep_beta_scaled_rho,
}


def run_sweep(spec: SweepSpec) -> str:
    """Run the sweep described by ``spec`` and return its CSV text."""
    return rows_to_csv(spec.kind, _RUNNERS[spec.kind](spec))
