"""Beam patterns and the optical power each PD of a hexagonal array captures.

Gaussian and LG10 captures are closed forms in Marcum's Q and ``phi``;
degenerate and uniform patterns are pure power distributions with no
geometry attached.

Two normalizations of the per-PD fractions are supported:

``reference-disk``
    divide by the power a single beam-centered disk of radius ``(G+1) rho``
    would capture. This is the normalization of the closed-form loss
    factors; note that the array extends to radius ``(2G+1) rho``, so the
    fractions can sum to more than one when ``rho`` is small.
``array-sum``
    divide by the total power captured by the array, so fractions sum to one.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, NumericalError, UnsupportedModelError
from .hexgeom import ArrayLayout, Pd, PdRole, RoleKind
from .specfun import marcum_p, phi

__all__ = [
    "BeamKind",
    "BeamPattern",
    "Normalization",
    "CaptureProfile",
    "GAUSSIAN",
    "LG10",
    "UNIFORM",
    "DEGENERATE",
    "intensity",
    "radial_intensity",
    "centered_capture",
    "offset_capture",
    "reference_capture",
    "captured_fraction_closed",
    "capture_profile",
]

# below this the reference-disk normalizer has lost all precision
_TINY_DENOMINATOR = 1e-280


class BeamKind(str, enum.Enum):
    DEGENERATE = "degenerate"
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"
    LG10 = "lg10"


@dataclass(frozen=True)
class BeamPattern:
    kind: BeamKind
    # only used by the point-intensity model; layout-based captures are
    # already expressed through rho = PD radius / waist
    waist: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", BeamKind(self.kind))
        if not (math.isfinite(self.waist) and self.waist > 0):
            raise DomainError(f"waist must be finite and > 0, got {self.waist}")

    @property
    def has_geometry(self):
        return self.kind in (BeamKind.GAUSSIAN, BeamKind.LG10)


GAUSSIAN = BeamPattern(BeamKind.GAUSSIAN)
LG10 = BeamPattern(BeamKind.LG10)
UNIFORM = BeamPattern(BeamKind.UNIFORM)
DEGENERATE = BeamPattern(BeamKind.DEGENERATE)


class Normalization(str, enum.Enum):
    REFERENCE_DISK = "reference-disk"
    ARRAY_SUM = "array-sum"


def _as_beam(beam):
    if isinstance(beam, BeamPattern):
        return beam
    return BeamPattern(BeamKind(beam))


def _require_geometry(beam):
    if not beam.has_geometry:
        raise UnsupportedModelError(
            f"{beam.kind.value} beam has no spatial intensity model; "
            "use capture_profile for its power distribution"
        )


def intensity(beam, r) -> float:
    """Radial intensity of a unit-power beam at distance ``r`` from its axis.

    Gaussian ``2/(pi w^2) exp(-2 r^2/w^2)``; LG10 donut
    ``4 r^2/(pi w^4) exp(-2 r^2/w^2)``.
    """
    beam = _as_beam(beam)
    _require_geometry(beam)
    r = float(r)
    if not math.isfinite(r) or r < 0:
        raise DomainError(f"r must be finite and >= 0, got {r}")
    w2 = beam.waist * beam.waist
    u = r * r / w2
    if beam.kind is BeamKind.GAUSSIAN:
        return 2.0 / (math.pi * w2) * math.exp(-2.0 * u)
    return 4.0 * u / (math.pi * w2) * math.exp(-2.0 * u)


def radial_intensity(beam):
    """Return ``r -> intensity(beam, r)`` as a plain callable (for the quadrature oracle)."""
    beam = _as_beam(beam)
    _require_geometry(beam)
    w2 = beam.waist * beam.waist
    if beam.kind is BeamKind.GAUSSIAN:
        c = 2.0 / (math.pi * w2)
        return lambda r: c * math.exp(-2.0 * r * r / w2)
    c = 4.0 / (math.pi * w2)
    return lambda r: c * (r * r / w2) * math.exp(-2.0 * r * r / w2)


def centered_capture(beam, radius) -> float:
    """Power inside a beam-centered disk: ``1 - e^{-2R^2}`` or ``1 - e^{-2R^2}(1 + 2R^2)``.

    Evaluated as the regularized lower incomplete gamma ``P(1, 2R^2)`` resp.
    ``P(2, 2R^2)``, which avoids cancellation for small ``R``.
    """
    beam = _as_beam(beam)
    _require_geometry(beam)
    order = 1 if beam.kind is BeamKind.GAUSSIAN else 2
    return float(special.gammainc(order, 2.0 * radius * radius))


def offset_capture(beam, offset, radius) -> float:
    """Power captured by a disk of ``radius`` whose center is ``offset`` from the beam axis."""
    beam = _as_beam(beam)
    _require_geometry(beam)
    if offset == 0.0:
        return centered_capture(beam, radius)
    if beam.kind is BeamKind.GAUSSIAN:
        return marcum_p(1, 2.0 * offset, 2.0 * radius)
    return phi(offset, radius)


def reference_capture(beam, G, rho) -> float:
    """Power captured by the reference PD of radius ``(G+1) rho``."""
    value = centered_capture(beam, (G + 1) * rho)
    if value < _TINY_DENOMINATOR:
        raise NumericalError(
            f"reference-disk capture underflows for G={G}, rho={rho}; increase rho"
        )
    return value


def _lookup(layout: ArrayLayout, pd):
    if isinstance(pd, Pd):
        return pd
    if not isinstance(pd, PdRole):
        raise DomainError(f"expected a Pd or PdRole, got {pd!r}")
    matches = [p for p in layout.pds if p.role == pd]
    if not matches:
        raise DomainError(f"layout with G={layout.G} has no PD with role {pd}")
    distances = {p.distance for p in matches}
    if len(distances) > 1:
        raise DomainError(
            f"role {pd} is ambiguous in a {layout.distance_model.value} layout; pass the Pd entry"
        )
    return matches[0]


def captured_fraction_closed(beam, layout: ArrayLayout, pd) -> float:
    """Fraction of the reference-disk power collected by one PD, in closed form.

    ``pd`` is a layout entry or a role. Gaussian central PDs give
    ``(1 - e^{-2 rho^2}) / (1 - e^{-2 (G+1)^2 rho^2})``, off-axis PDs at
    distance ``d`` give ``(1 - Q_1(2d, 2 rho))`` over the same denominator.
    LG10 uses the donut analogues with ``phi(d, rho)``.
    """
    beam = _as_beam(beam)
    _require_geometry(beam)
    entry = _lookup(layout, pd)
    denominator = reference_capture(beam, layout.G, layout.rho)
    if entry.role.kind is RoleKind.CENTRAL:
        numerator = centered_capture(beam, layout.rho)
    else:
        numerator = offset_capture(beam, entry.distance, layout.rho)
    return numerator / denominator


@dataclass(frozen=True)
class CaptureProfile:
    beam: BeamPattern
    layout: ArrayLayout
    fractions: np.ndarray
    roles: tuple
    normalization: Normalization

    @property
    def total_fraction(self) -> float:
        return math.fsum(self.fractions)

    @property
    def M(self):
        return len(self.fractions)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "ring", "role", "fraction"])
        for index, (role, f) in enumerate(zip(self.roles, self.fractions)):
            writer.writerow([index, role.ring, role.kind.value, repr(float(f))])
        return buf.getvalue()


def capture_profile(beam, layout: ArrayLayout, normalization=Normalization.REFERENCE_DISK) -> CaptureProfile:
    """Per-PD captured power fractions, one entry per physical PD (central first)."""
    beam = _as_beam(beam)
    normalization = Normalization(normalization)
    roles = tuple(pd.role for pd in layout.expanded())
    M = layout.M

    if beam.kind is BeamKind.DEGENERATE:
        fractions = np.zeros(M)
        fractions[0] = 1.0
    elif beam.kind is BeamKind.UNIFORM:
        fractions = np.full(M, 1.0 / M)
    else:
        per_entry = [captured_fraction_closed(beam, layout, pd) for pd in layout.pds]
        fractions = np.repeat(
            np.array(per_entry, dtype=float), [pd.multiplicity for pd in layout.pds]
        )
        if normalization is Normalization.ARRAY_SUM:
            fractions = fractions / math.fsum(fractions)
    fractions.setflags(write=False)
    return CaptureProfile(beam, layout, fractions, roles, normalization)
