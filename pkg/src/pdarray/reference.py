"""Slow, dependency-free reference evaluations used as cross-check oracles.

These deliberately share no code with :mod:`pdarray.specfun`: plain Python
floats, explicit recurrences, no scipy.
"""
from __future__ import annotations

import math

__all__ = ["marcum_q_series", "bessel_i0_series", "gaussian_offset_capture_series"]


def marcum_q_series(m, a, b, tol=1e-15, max_terms=100_000):
    """Marcum Q by direct Poisson-mixture summation with incomplete-gamma recurrences.

    Upper regularized gamma of integer order is a Poisson CDF,
    ``Gamma(n, x)/Gamma(n) = e^{-x} sum_{j<n} x^j / j!``, built up one term per
    step. Valid while ``e^{-a^2/2}`` and ``e^{-b^2/2}`` stay representable.
    """
    lam = 0.5 * a * a
    x = 0.5 * b * b
    if b == 0:
        return 1.0
    if lam > 700 or x > 700:
        raise ValueError("reference series limited to a, b below ~37")

    # upper gamma Q(n, x) for n = m: sum_{j<m} e^{-x} x^j / j!
    term_x = math.exp(-x)
    upper = 0.0
    for j in range(m):
        upper += term_x
        term_x *= x / (j + 1)
    # term_x now holds e^{-x} x^m / m!, the increment for Q(m+1, x)

    weight = math.exp(-lam)
    seen = 0.0
    total = 0.0
    for k in range(max_terms):
        total += weight * upper
        seen += weight
        if 1.0 - seen < tol and k > lam:
            return total
        upper += term_x
        term_x *= x / (m + k + 1)
        weight *= lam / (k + 1)
    raise ArithmeticError("reference Marcum series did not converge")


def bessel_i0_series(x, tol=1e-17):
    """``sum_k (x/2)^{2k} / (k!)^2``."""
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        total += term
        if term < tol * total:
            return total


def gaussian_offset_capture_series(offset, radius, tol=1e-15):
    """Gaussian-beam power in an offset disk, ``1 - Q_1(2 offset, 2 radius)``, via the series."""
    return 1.0 - marcum_q_series(1, 2.0 * offset, 2.0 * radius, tol=tol)
