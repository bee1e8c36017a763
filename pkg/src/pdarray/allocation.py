"""Optimal split of received optical power across PDs under MRC.

The MRC objective ``sum_m (R_m p_m)^2 / (B N0_m)`` is convex and Schur-convex
in the power vector, so over the simplex ``sum p_m = P_tot`` it peaks at a
vertex: all power on the PD with the largest ``R_m^2 / N0_m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityError, DomainError

__all__ = [
    "AllocationProblem",
    "mrc_objective",
    "optimal_allocation",
    "brute_force_allocation_search",
    "compositions",
    "majorizes",
]

MAX_BRUTE_FORCE_PDS = 4
MAX_GRID_STEPS = 200


@dataclass(frozen=True)
class AllocationProblem:
    m: int
    p_tot: float
    bandwidth: float
    per_pd_responsivity: Optional[Sequence[float]] = None
    per_pd_noise: Optional[Sequence[float]] = None

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m}")
        for name in ("p_tot", "bandwidth"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and > 0, got {value}")
        resp = np.ones(self.m) if self.per_pd_responsivity is None else np.asarray(self.per_pd_responsivity, dtype=float)
        noise = np.ones(self.m) if self.per_pd_noise is None else np.asarray(self.per_pd_noise, dtype=float)
        for name, arr in (("per_pd_responsivity", resp), ("per_pd_noise", noise)):
            if arr.shape != (self.m,):
                raise DomainError(f"{name} must have length {self.m}, got shape {arr.shape}")
            if not np.all(np.isfinite(arr) & (arr > 0)):
                raise DomainError(f"{name} entries must be finite and > 0")
        object.__setattr__(self, "per_pd_responsivity", tuple(resp.tolist()))
        object.__setattr__(self, "per_pd_noise", tuple(noise.tolist()))

    @property
    def gains(self):
        """Per-PD SNR per squared watt, ``R_m^2 / (B N0_m)``."""
        r = np.asarray(self.per_pd_responsivity)
        n = np.asarray(self.per_pd_noise)
        return r * r / (self.bandwidth * n)


def mrc_objective(problem: AllocationProblem, powers) -> np.ndarray:
    """MRC SNR for one power vector, or for each row of a 2-D array of them."""
    powers = np.asarray(powers, dtype=float)
    return (powers * powers) @ problem.gains


def optimal_allocation(problem: AllocationProblem) -> np.ndarray:
    """Degenerate allocation: everything on the best PD, lowest index on ties."""
    out = np.zeros(problem.m)
    out[int(np.argmax(problem.gains))] = problem.p_tot
    return out


def compositions(n, k) -> np.ndarray:
    """All ways to write ``n`` as an ordered sum of ``k`` non-negative integers.

    Returned as an ``(C(n+k-1, k-1), k)`` integer array in lexicographic order.
    """
    if k == 1:
        return np.array([[n]], dtype=np.int64)
    rows = []
    for first in range(n, -1, -1):
        rest = compositions(n - first, k - 1)
        rows.append(np.column_stack([np.full(len(rest), first, dtype=np.int64), rest]))
    return np.vstack(rows)


def brute_force_allocation_search(problem: AllocationProblem, grid_steps: int):
    """Exhaustively search the simplex on a grid of ``grid_steps`` power quanta.

    Returns ``(best_vector, best_snr)``; ties keep the first composition found.
    """
    if problem.m > MAX_BRUTE_FORCE_PDS:
        raise CapacityError(f"brute force supports m <= {MAX_BRUTE_FORCE_PDS}, got {problem.m}")
    if int(grid_steps) != grid_steps or not 1 <= grid_steps <= MAX_GRID_STEPS:
        raise CapacityError(f"grid_steps must be an integer in [1, {MAX_GRID_STEPS}], got {grid_steps}")
    grid = compositions(int(grid_steps), problem.m) * (problem.p_tot / grid_steps)
    snr = mrc_objective(problem, grid)
    best = int(np.argmax(snr))
    return grid[best], float(snr[best])


def majorizes(p, q, atol=1e-12) -> bool:
    """True when ``p`` majorizes ``q``: equal totals, sorted partial sums of ``p`` dominate."""
    p = np.sort(np.asarray(p, dtype=float))[::-1]
    q = np.sort(np.asarray(q, dtype=float))[::-1]
    if p.shape != q.shape:
        return False
    if abs(p.sum() - q.sum()) > atol:
        return False
    return bool(np.all(np.cumsum(p) >= np.cumsum(q) - atol))
