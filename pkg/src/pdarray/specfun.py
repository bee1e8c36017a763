"""Special functions behind the capture formulas.

Marcum's Q of integer order is evaluated from its Poisson-mixture series

    Q_m(a, b) = sum_k  e^{-a^2/2} (a^2/2)^k / k!  *  Gamma(m + k, b^2/2) / Gamma(m + k)

with the regularized incomplete gamma functions taken from ``scipy.special``.
The complement ``1 - Q_m`` is summed as its own positive series (lower
incomplete gamma) so that small captured fractions keep relative accuracy
instead of being formed by cancellation against 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, NumericalError

__all__ = [
    "SpecFunConfig",
    "DEFAULT_CONFIG",
    "marcum_q",
    "marcum_p",
    "bessel_i0",
    "bessel_i0e",
    "bessel_i1e",
    "phi",
]

# log(DBL_MAX); exp() of anything larger overflows
_LOG_DBL_MAX = 709.782712893384


@dataclass(frozen=True)
class SpecFunConfig:
    abs_tolerance: float = 1e-13
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not self.abs_tolerance > 0:
            raise DomainError(f"abs_tolerance must be > 0, got {self.abs_tolerance}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms}")


DEFAULT_CONFIG = SpecFunConfig()


def _check_nonneg(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    if value < 0:
        raise DomainError(f"{name} must be >= 0, got {value}")
    return value


def _check_order(m):
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"Marcum Q order must be a positive integer, got {m}")
    return int(m)


def _marcum_pair(m, a, b, config):
    """Return ``(Q_m(a, b), 1 - Q_m(a, b))``, each from its own series."""
    m = _check_order(m)
    a = _check_nonneg("a", a)
    b = _check_nonneg("b", b)
    if b == 0.0:
        return 1.0, 0.0

    lam = 0.5 * a * a
    x = 0.5 * b * b
    if lam == 0.0:
        return float(special.gammaincc(m, x)), float(special.gammainc(m, x))

    tol = config.abs_tolerance
    half_width = 12.0 + 12.0 * math.sqrt(lam)
    while True:
        kmin = max(0, int(math.floor(lam - half_width)))
        kmax = int(math.ceil(lam + half_width))
        n_terms = kmax - kmin + 1
        if n_terms > config.max_terms:
            raise NumericalError(
                f"Marcum Q_{m}({a}, {b}) series needs {n_terms} terms "
                f"(max_terms={config.max_terms}); residual bound not reached"
            )
        # Poisson mass left outside [kmin, kmax]
        mass_below = float(special.gammaincc(kmin, lam)) if kmin > 0 else 0.0
        mass_above = float(special.gammainc(kmax + 1, lam))
        # lower gamma decreases and upper gamma increases with the order
        resid_q = mass_below * float(special.gammaincc(m + max(kmin - 1, 0), x)) + mass_above
        resid_p = mass_below * float(special.gammainc(m, x)) + mass_above * float(
            special.gammainc(m + kmax + 1, x)
        )
        if max(resid_q, resid_p) <= tol:
            break
        half_width *= 2.0

    k = np.arange(kmin, kmax + 1, dtype=float)
    # log Poisson weights up to a constant, built from the ratios lam/k; the
    # direct k*log(lam) - lam - gammaln(k+1) cancels catastrophically for large lam
    log_w = np.concatenate(([0.0], np.cumsum(np.log(lam / k[1:]))))
    w = np.exp(log_w - log_w.max())
    # the window holds all but <= tol of the Poisson mass
    w /= math.fsum(w)
    q = math.fsum(w * special.gammaincc(m + k, x))
    p = math.fsum(w * special.gammainc(m + k, x))
    return min(max(q, 0.0), 1.0), min(max(p, 0.0), 1.0)


def marcum_q(m, a, b, config: SpecFunConfig = DEFAULT_CONFIG) -> float:
    """Generalized Marcum Q function ``Q_m(a, b)`` for integer order ``m >= 1``.

    Equals the probability that a noncentral chi variable with ``2m`` degrees
    of freedom and noncentrality ``a`` exceeds ``b``. Absolute error is bounded
    by ``config.abs_tolerance``.
    """
    return _marcum_pair(m, a, b, config)[0]


def marcum_p(m, a, b, config: SpecFunConfig = DEFAULT_CONFIG) -> float:
    """Complement ``1 - Q_m(a, b)``, summed directly (no cancellation)."""
    return _marcum_pair(m, a, b, config)[1]


def bessel_i0e(x) -> float:
    """Exponentially scaled ``e^{-x} I_0(x)``; finite for every finite ``x >= 0``."""
    x = _check_nonneg("x", x)
    return float(special.i0e(x))


def bessel_i1e(x) -> float:
    """Exponentially scaled ``e^{-x} I_1(x)``."""
    x = _check_nonneg("x", x)
    return float(special.i1e(x))


def bessel_i0(x) -> float:
    """Modified Bessel function of the first kind, order zero."""
    x = _check_nonneg("x", x)
    scaled = float(special.i0e(x))
    if x < _LOG_DBL_MAX:
        return scaled * math.exp(x)
    log_value = x + math.log(scaled)
    if log_value >= _LOG_DBL_MAX:
        raise NumericalError(f"I0({x}) overflows double precision; use bessel_i0e")
    return math.exp(log_value)


def phi(a, b, config: SpecFunConfig = DEFAULT_CONFIG) -> float:
    """Unit-power LG10 donut power captured by a disk of radius ``b`` at offset ``a``.

    Both arguments are in beam-waist units. With ``P_m = 1 - Q_m(2a, 2b)``::

        phi(a, b) = (1 + 2a^2) P_1 - 2a^2 P_2 - 2b^2 e^{-2(a^2+b^2)} I_0(4ab)

    The Bessel term is formed as ``e^{-2(a-b)^2} * i0e(4ab)`` so it stays
    finite for arbitrarily large offsets.
    """
    a = _check_nonneg("a", a)
    b = _check_nonneg("b", b)
    if b == 0.0:
        return 0.0
    p1 = marcum_p(1, 2.0 * a, 2.0 * b, config)
    p2 = marcum_p(2, 2.0 * a, 2.0 * b, config)
    bessel_term = 2.0 * b * b * math.exp(-2.0 * (a - b) ** 2) * float(special.i0e(4.0 * a * b))
    value = (1.0 + 2.0 * a * a) * p1 - 2.0 * a * a * p2 - bessel_term
    return min(max(value, 0.0), 1.0)
