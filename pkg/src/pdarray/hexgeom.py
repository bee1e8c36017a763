"""Hexagonally packed photodetector arrays.

A central PD is surrounded by ``G`` hexagonal rings; ring ``g`` holds ``6g``
PDs, six of them on the hexagon vertices ("corners") and ``6g - 6`` on its
sides ("edges"). Adjacent PD centers are ``2 * rho`` apart, where ``rho`` is
the PD radius in beam-waist units, so every distance here is in waist units.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, ShapeError

__all__ = [
    "RoleKind",
    "PdRole",
    "Pd",
    "DistanceModel",
    "ArrayLayout",
    "array_size",
    "rings_for",
    "nearest_valid_m",
    "layout",
    "layout_csv",
]

SQRT3 = math.sqrt(3.0)


class RoleKind(str, enum.Enum):
    CENTRAL = "central"
    CORNER = "corner"
    EDGE = "edge"


@dataclass(frozen=True)
class PdRole:
    kind: RoleKind
    ring: int = 0

    def __post_init__(self):
        if self.kind is RoleKind.CENTRAL:
            if self.ring != 0:
                raise DomainError("central PD sits on ring 0")
        elif self.ring < 1:
            raise DomainError(f"{self.kind.value} PDs need ring >= 1, got {self.ring}")

    @classmethod
    def central(cls):
        return cls(RoleKind.CENTRAL, 0)

    @classmethod
    def corner(cls, ring):
        return cls(RoleKind.CORNER, ring)

    @classmethod
    def edge(cls, ring):
        return cls(RoleKind.EDGE, ring)

    def __str__(self):
        if self.kind is RoleKind.CENTRAL:
            return "central"
        return f"{self.kind.value}[{self.ring}]"


@dataclass(frozen=True)
class Pd:
    """One layout entry. ``multiplicity`` > 1 stands for that many identical PDs."""

    distance: float
    role: PdRole
    multiplicity: int = 1
    x: Optional[float] = None
    y: Optional[float] = None

    @property
    def ring(self):
        return self.role.ring


class DistanceModel(str, enum.Enum):
    LUMPED_RING = "lumped-ring"
    EXACT_LATTICE = "exact-lattice"


@dataclass(frozen=True)
class ArrayLayout:
    G: int
    rho: float
    pds: tuple
    distance_model: DistanceModel = DistanceModel.LUMPED_RING

    @property
    def M(self):
        return array_size(self.G)

    @property
    def reference_radius(self):
        """Radius of the reference PD used in every normalization, ``(G+1) rho``."""
        return (self.G + 1) * self.rho

    @property
    def enclosing_radius(self):
        """Radius of the smallest beam-centered disk containing every PD, ``(2G+1) rho``."""
        return (2 * self.G + 1) * self.rho

    def expanded(self):
        """Yield one ``Pd`` per physical detector (multiplicities unrolled)."""
        for pd in self.pds:
            for _ in range(pd.multiplicity):
                yield pd


def array_size(G) -> int:
    """Number of PDs in an array with ``G`` rings: ``1 + 3G(G+1)``."""
    if isinstance(G, bool) or int(G) != G or G < 0:
        raise DomainError(f"ring count must be a non-negative integer, got {G}")
    G = int(G)
    return 1 + 3 * G * (G + 1)


def _rings_floor(M):
    # largest G with 1 + 3G(G+1) <= M
    G = int((math.isqrt(12 * M - 3) - 3) // 6) if M >= 1 else 0
    while array_size(G + 1) <= M:
        G += 1
    while G > 0 and array_size(G) > M:
        G -= 1
    return G


def rings_for(M) -> int:
    """Inverse of :func:`array_size`; raises ``ShapeError`` for non-hexagonal ``M``."""
    if isinstance(M, bool) or int(M) != M or M < 1:
        raise DomainError(f"PD count must be a positive integer, got {M}")
    M = int(M)
    G = _rings_floor(M)
    if array_size(G) != M:
        raise ShapeError(
            f"M={M} is not of the form 1+3G(G+1); nearest valid is {nearest_valid_m(M)}"
        )
    return G


def nearest_valid_m(M) -> int:
    """Closest hexagonal PD count to ``M`` (ties go to the smaller one)."""
    if M < 1:
        raise DomainError(f"PD count must be >= 1, got {M}")
    G = _rings_floor(int(M))
    lo, hi = array_size(G), array_size(G + 1)
    return lo if M - lo <= hi - M else hi


# Axial directions walked around a hexagonal ring, starting from the vertex
# at axial (g, 0).
_AXIAL_STEPS = ((-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0), (0, 1))


def _ring_axial(g):
    """Axial coordinates of ring ``g`` with a corner flag; corners first on each side."""
    q, r = g, 0
    cells = []
    for dq, dr in _AXIAL_STEPS:
        for step in range(g):
            cells.append((q, r, step == 0))
            q += dq
            r += dr
    return cells


def _axial_to_xy(q, r, spacing):
    return spacing * (q + 0.5 * r), spacing * (SQRT3 / 2.0) * r


def layout(G, rho, distance_model=DistanceModel.LUMPED_RING) -> ArrayLayout:
    """Build the hexagonal array with ``G`` rings and PD radius ``rho`` (waist units).

    ``LUMPED_RING`` puts ring-``g`` corners at ``2 g rho`` and lumps all
    ``6g - 6`` side PDs at the hexagon inradius ``sqrt(3) g rho``.
    ``EXACT_LATTICE`` lists every PD at its true lattice position.
    """
    array_size(G)
    G = int(G)
    rho = float(rho)
    if not (math.isfinite(rho) and rho > 0):
        raise DomainError(f"rho must be finite and > 0, got {rho}")
    distance_model = DistanceModel(distance_model)

    if distance_model is DistanceModel.LUMPED_RING:
        pds = [Pd(0.0, PdRole.central(), 1, 0.0, 0.0)]
        for g in range(1, G + 1):
            pds.append(Pd(2.0 * g * rho, PdRole.corner(g), 6))
            if g > 1:
                pds.append(Pd(SQRT3 * g * rho, PdRole.edge(g), 6 * g - 6))
    else:
        spacing = 2.0 * rho
        pds = [Pd(0.0, PdRole.central(), 1, 0.0, 0.0)]
        for g in range(1, G + 1):
            for q, r, is_corner in _ring_axial(g):
                x, y = _axial_to_xy(q, r, spacing)
                dist = spacing * math.sqrt(q * q + q * r + r * r)
                role = PdRole.corner(g) if is_corner else PdRole.edge(g)
                pds.append(Pd(dist, role, 1, x, y))
    return ArrayLayout(G, rho, tuple(pds), distance_model)


def layout_csv(lay: ArrayLayout) -> str:
    """CSV dump, one row per physical PD: index, x, y, distance, role, ring."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "x", "y", "distance", "role", "ring"])
    for index, pd in enumerate(lay.expanded()):
        x = "" if pd.x is None else repr(pd.x)
        y = "" if pd.y is None else repr(pd.y)
        writer.writerow([index, x, y, repr(pd.distance), pd.role.kind.value, pd.ring])
    return buf.getvalue()
