"""Numerical ground truth: beam power collected by an offset circular aperture.

Nothing here knows about Marcum Q or the closed forms; the intensity is a
plain callable ``r -> I(r)`` of the distance to the beam axis.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Union

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericalError

__all__ = [
    "PolarAdaptive",
    "MonteCarlo",
    "QuadratureSpec",
    "CaptureEstimate",
    "disk_capture",
    "disk_capture_estimate",
]


@dataclass(frozen=True)
class PolarAdaptive:
    """Nested adaptive Gauss-Kronrod: angle outside, radius inside, disk-centered polar frame."""


@dataclass(frozen=True)
class MonteCarlo:
    seed: int = 20250101
    n_samples: int = 400_000

    def __post_init__(self):
        if self.n_samples < 2:
            raise DomainError("Monte Carlo needs at least two samples")


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tolerance: float = 1e-9
    max_subdivisions: int = 200
    scheme: Union[PolarAdaptive, MonteCarlo] = field(default_factory=PolarAdaptive)
    # absolute floor so vanishing captures far from the beam still terminate
    abs_floor: float = 1e-15

    def __post_init__(self):
        if not self.rel_tolerance > 0:
            raise DomainError(f"rel_tolerance must be > 0, got {self.rel_tolerance}")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


class CaptureEstimate(NamedTuple):
    value: float
    error: float


def _polar(intensity, offset, radius, spec):
    d2 = offset * offset

    def inner(theta):
        two_d_cos = 2.0 * offset * math.cos(theta)

        def integrand(u):
            return intensity(math.sqrt(max(d2 + u * u + two_d_cos * u, 0.0))) * u

        return integrate.quad(
            integrand,
            0.0,
            radius,
            epsabs=0.1 * spec.abs_floor,
            epsrel=0.1 * spec.rel_tolerance,
            limit=spec.max_subdivisions,
        )[0]

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            # the integrand is even in theta, so integrate over [0, pi] and double
            value, err = integrate.quad(
                inner,
                0.0,
                math.pi,
                epsabs=0.5 * spec.abs_floor,
                epsrel=spec.rel_tolerance,
                limit=spec.max_subdivisions,
            )
        except integrate.IntegrationWarning as exc:
            raise NumericalError(
                f"polar quadrature did not reach rel_tolerance={spec.rel_tolerance:g} "
                f"(offset={offset}, radius={radius}): {exc}"
            ) from None
    return CaptureEstimate(2.0 * value, 2.0 * err)


def _evaluate_many(intensity, r):
    try:
        values = np.asarray(intensity(r), dtype=float)
        if values.shape == r.shape:
            return values
    except TypeError:
        pass
    return np.fromiter((intensity(float(x)) for x in r), dtype=float, count=r.size)


def _monte_carlo(intensity, offset, radius, scheme):
    rng = np.random.default_rng(scheme.seed)
    u = rng.random(scheme.n_samples)
    t = rng.random(scheme.n_samples)
    rr = radius * np.sqrt(u)
    theta = 2.0 * math.pi * t
    x = offset + rr * np.cos(theta)
    y = rr * np.sin(theta)
    values = _evaluate_many(intensity, np.hypot(x, y))
    area = math.pi * radius * radius
    mean = float(values.mean())
    stderr = float(values.std(ddof=1)) / math.sqrt(scheme.n_samples)
    return CaptureEstimate(area * mean, area * stderr)


def disk_capture_estimate(
    radial_intensity: Callable[[float], float],
    disk_center_offset: float,
    disk_radius: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> CaptureEstimate:
    """Integrate ``radial_intensity`` over a disk; return the value and its error estimate.

    For ``PolarAdaptive`` the error is the quadrature estimate, for
    ``MonteCarlo`` it is one standard error.
    """
    offset = float(disk_center_offset)
    radius = float(disk_radius)
    if not (math.isfinite(offset) and offset >= 0):
        raise DomainError(f"disk offset must be finite and >= 0, got {offset}")
    if not (math.isfinite(radius) and radius > 0):
        raise DomainError(f"disk radius must be finite and > 0, got {radius}")
    if isinstance(spec.scheme, MonteCarlo):
        return _monte_carlo(radial_intensity, offset, radius, spec.scheme)
    return _polar(radial_intensity, offset, radius, spec)


def disk_capture(radial_intensity, disk_center_offset, disk_radius, spec=QuadratureSpec()) -> float:
    """Power a disk collects from a unit-power radially symmetric beam."""
    return disk_capture_estimate(radial_intensity, disk_center_offset, disk_radius, spec).value
