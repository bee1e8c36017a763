"""Cross-check suite: closed forms against independent oracles.

Each check yields a :class:`CheckResult`; the report is a deterministic CSV
(no timings, no timestamps) so repeated runs are byte-identical.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import allocation, reference
from .beams import GAUSSIAN, LG10, captured_fraction_closed, capture_profile, radial_intensity, reference_capture
from .errors import NumericalError, PdArrayError
from .hexgeom import ArrayLayout, RoleKind, array_size, layout
from .quadrature import MonteCarlo, QuadratureSpec, disk_capture, disk_capture_estimate
from .scaling import (
    achievable_rate,
    beta_central_only,
    beta_gauss,
    beta_lg10,
    beta_min,
    compare_to_reference,
    loss_factor,
)
from .specfun import bessel_i0, marcum_q, phi

__all__ = [
    "CheckResult",
    "TOLERANCE_PROFILES",
    "CHECK_GROUPS",
    "CAPTURE_GRID_G",
    "CAPTURE_GRID_RHO",
    "SLOPE_RHO",
    "SLOPE_G",
    "SLOPE_TARGETS",
    "loglog_slope",
    "small_rho_beta_limits",
    "run_checks",
    "report_csv",
]

CAPTURE_GRID_G = (1, 2, 3, 5)
CAPTURE_GRID_RHO = (0.1, 0.25, 0.5, 1.0, 2.0)
PHI_GRID_A = tuple(0.25 * i for i in range(17))
PHI_GRID_B = (0.05, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0)

SLOPE_RHO = 0.01
SLOPE_G = tuple(range(10, 101))
# (target slope of ln(beta^2) against ln(G), half-width)
SLOPE_TARGETS = {
    "gaussian": (-1.0, 0.15),
    "lg10": (-3.0, 0.3),
    "gaussian-central": (-2.0, 0.2),
    "lg10-central": (-4.0, 0.4),
    "gaussian/lg10": (2.0, 0.3),
}

RANDOM_SEED = 20250611


@dataclass(frozen=True)
class TolerancesProfile:
    quadrature_rel: float = 1e-9
    capture_abs: float = 1e-6
    phi_abs: float = 1e-6
    denominator_abs: float = 1e-9
    identity_rel: float = 1e-12
    marcum_abs: float = 1e-13
    alpha_rel: float = 1e-12
    small_rho_rel: float = 1e-3


TOLERANCE_PROFILES = {
    "default": TolerancesProfile(),
    # demonstrates tolerance semantics: adaptive quadrature cannot certify 1e-14
    "strict": TolerancesProfile(quadrature_rel=1e-14, capture_abs=1e-14, phi_abs=1e-14, denominator_abs=1e-14),
}


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    passed: bool
    observed: object
    expected: object
    tolerance: object
    detail: str = ""


def _result(group, name, observed, expected, tol, passed, detail=""):
    return CheckResult(group, name, bool(passed), observed, expected, tol, detail)


def _abs_check(group, name, observed, expected, tol):
    return _result(group, name, observed, expected, tol, abs(observed - expected) <= tol)


def _perturb_corners(lay: ArrayLayout, scale: float) -> ArrayLayout:
    if scale == 1.0:
        return lay
    pds = tuple(
        dataclasses.replace(pd, distance=pd.distance * scale) if pd.role.kind is RoleKind.CORNER else pd
        for pd in lay.pds
    )
    return dataclasses.replace(lay, pds=pds)


def _oracle_offset(pd, rho):
    # hexagon of circumradius 2 g rho: vertices at the circumradius, side
    # PDs lumped at the inradius
    circumradius = 2.0 * pd.ring * rho
    if pd.role.kind is RoleKind.CORNER:
        return circumradius
    return circumradius * math.cos(math.pi / 6.0)


def check_marcum(tol: TolerancesProfile):
    group = "specfun"
    worst = 0.0
    where = None
    for m in (1, 2):
        for a in np.linspace(0.0, 6.0, 13):
            for b in np.linspace(0.0, 6.0, 13):
                err = abs(marcum_q(m, a, b) - reference.marcum_q_series(m, a, b))
                if err > worst:
                    worst, where = err, (m, float(a), float(b))
    yield _result(group, "marcum_q vs direct series", worst, 0.0, tol.marcum_abs, worst <= tol.marcum_abs, f"worst at {where}")
    rel = max(abs(bessel_i0(x) / reference.bessel_i0_series(x) - 1.0) for x in np.linspace(0.0, 30.0, 61))
    yield _result(group, "bessel_i0 vs power series", rel, 0.0, 1e-12, rel <= 1e-12)


def check_phi(tol: TolerancesProfile):
    group = "specfun"
    spec = QuadratureSpec(rel_tolerance=tol.quadrature_rel)
    donut = radial_intensity(LG10)
    worst = 0.0
    where = None
    try:
        for a in PHI_GRID_A:
            for b in PHI_GRID_B:
                err = abs(phi(a, b) - disk_capture(donut, a, b, spec))
                if err > worst:
                    worst, where = err, (a, b)
    except NumericalError as exc:
        yield _result(group, "phi vs quadrature", math.nan, 0.0, tol.phi_abs, False, str(exc).splitlines()[0])
        return
    yield _result(group, "phi vs quadrature", worst, 0.0, tol.phi_abs, worst <= tol.phi_abs, f"worst at {where}")


def check_capture_closed_forms(tol: TolerancesProfile, corner_scale=1.0):
    group = "capture"
    spec = QuadratureSpec(rel_tolerance=tol.quadrature_rel)
    for beam in (GAUSSIAN, LG10):
        intensity = radial_intensity(beam)
        worst = 0.0
        where = None
        try:
            for G in CAPTURE_GRID_G:
                for rho in CAPTURE_GRID_RHO:
                    lay = _perturb_corners(layout(G, rho), corner_scale)
                    denominator = disk_capture(intensity, 0.0, (G + 1) * rho, spec)
                    for pd in lay.pds:
                        offset = 0.0 if pd.role.kind is RoleKind.CENTRAL else _oracle_offset(pd, rho)
                        oracle = disk_capture(intensity, offset, rho, spec) / denominator
                        err = abs(captured_fraction_closed(beam, lay, pd) - oracle)
                        if err > worst:
                            worst, where = err, (G, rho, str(pd.role))
        except NumericalError as exc:
            yield _result(group, f"{beam.kind.value} closed form vs quadrature", math.nan, 0.0, tol.capture_abs, False, str(exc).splitlines()[0])
            continue
        yield _result(
            group, f"{beam.kind.value} closed form vs quadrature", worst, 0.0, tol.capture_abs,
            worst <= tol.capture_abs, f"worst at G,rho,role={where}",
        )


def check_denominators(tol: TolerancesProfile):
    group = "capture"
    spec = QuadratureSpec(rel_tolerance=tol.quadrature_rel)
    for beam in (GAUSSIAN, LG10):
        intensity = radial_intensity(beam)
        worst = 0.0
        try:
            for G in CAPTURE_GRID_G:
                for rho in CAPTURE_GRID_RHO:
                    err = abs(reference_capture(beam, G, rho) - disk_capture(intensity, 0.0, (G + 1) * rho, spec))
                    worst = max(worst, err)
        except NumericalError as exc:
            yield _result(group, f"{beam.kind.value} reference-disk capture", math.nan, 0.0, tol.denominator_abs, False, str(exc).splitlines()[0])
            continue
        yield _result(group, f"{beam.kind.value} reference-disk capture", worst, 0.0, tol.denominator_abs, worst <= tol.denominator_abs)


def check_monte_carlo(tol: TolerancesProfile):
    group = "quadrature"
    polar = QuadratureSpec(rel_tolerance=1e-9)
    mc = QuadratureSpec(scheme=MonteCarlo(seed=RANDOM_SEED, n_samples=200_000))
    rng = np.random.default_rng(RANDOM_SEED)
    worst = 0.0
    for beam in (GAUSSIAN, LG10):
        intensity = radial_intensity(beam)
        for _ in range(4):
            offset, radius = rng.uniform(0.0, 2.0), rng.uniform(0.1, 1.5)
            exact = disk_capture(intensity, offset, radius, polar)
            est = disk_capture_estimate(intensity, offset, radius, mc)
            worst = max(worst, abs(est.value - exact) / est.error)
    yield _result(group, "polar vs Monte Carlo (in standard errors)", worst, 0.0, 4.0, worst <= 4.0)


def check_beta_identity(tol: TolerancesProfile):
    group = "loss-factor"
    for beam, closed in ((GAUSSIAN, beta_gauss), (LG10, beta_lg10)):
        worst = 0.0
        for G in CAPTURE_GRID_G:
            for rho in CAPTURE_GRID_RHO:
                direct = loss_factor(capture_profile(beam, layout(G, rho)))
                worst = max(worst, abs(closed(G, rho) / direct - 1.0))
        yield _result(group, f"{beam.kind.value} ring-sum vs sum of squared fractions", worst, 0.0, tol.identity_rel, worst <= tol.identity_rel)


def check_beta_min_anchors(tol: TolerancesProfile):
    group = "beta-min"
    yield _abs_check(group, "beta_min(M=1)", beta_min(1, 1.0, 100.0), 1.0, 1e-12)
    worst = max(abs(beta_min(m, 0.0, g) - 1.0) for m in (1, 7, 37, 10**6) for g in (0.1, 100.0, 1e4))
    yield _result(group, "beta_min(xi=0) == 1", worst, 0.0, 1e-12, worst <= 1e-12)
    yield _abs_check(group, "beta_min(M=1e6, xi=1, 20 dB) vs ln(101)/100", beta_min(10**6, 1.0, 100.0), math.log(101.0) / 100.0, 1e-4)


def loglog_slope(xs, ys):
    """Least-squares slope of ``ln y`` against ``ln x``."""
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])


def slope_series(rho=SLOPE_RHO, Gs=SLOPE_G):
    gauss = [beta_gauss(G, rho) for G in Gs]
    lg = [beta_lg10(G, rho) for G in Gs]
    return {
        "gaussian": gauss,
        "lg10": lg,
        "gaussian-central": [beta_central_only(GAUSSIAN, G, rho) for G in Gs],
        "lg10-central": [beta_central_only(LG10, G, rho) for G in Gs],
        "gaussian/lg10": [g / l for g, l in zip(gauss, lg)],
    }


def check_slopes(tol: TolerancesProfile):
    group = "asymptotic-slopes"
    series = slope_series()
    for name, (target, width) in SLOPE_TARGETS.items():
        slope = loglog_slope(SLOPE_G, series[name])
        yield _result(group, f"slope ln(beta^2) vs ln(G): {name}", slope, target, width, abs(slope - target) <= width, f"rho={SLOPE_RHO}, G=10..100")


def small_rho_beta_limits(G):
    """Limits of the closed-form loss factors as ``rho -> 0`` with ``G`` fixed.

    Every capture becomes (local intensity) x (disk area); relative to the
    reference disk, Gaussian fractions tend to ``1/(G+1)^2`` and LG10 fractions
    to ``(4 d^2/rho^2 + 2)/(2 (G+1)^4)`` for a PD at distance ``d``.
    """
    n4 = float(G + 1) ** 4
    gauss = array_size(G) / n4
    lg = 1.0 + sum(6.0 * (8.0 * g * g + 1.0) ** 2 + (6 * g - 6) * (6.0 * g * g + 1.0) ** 2 for g in range(1, G + 1))
    return {
        "gaussian": gauss,
        "lg10": lg / n4**2,
        "gaussian-central": 1.0 / n4,
        "lg10-central": 1.0 / n4**2,
    }


def check_small_rho_limits(tol: TolerancesProfile):
    group = "small-rho-limit"
    rho = 1e-4
    worst = 0.0
    for G in (1, 5, 10, 20):
        lim = small_rho_beta_limits(G)
        got = {
            "gaussian": beta_gauss(G, rho),
            "lg10": beta_lg10(G, rho),
            "gaussian-central": beta_central_only(GAUSSIAN, G, rho),
            "lg10-central": beta_central_only(LG10, G, rho),
        }
        worst = max(worst, max(abs(got[k] / lim[k] - 1.0) for k in lim))
    yield _result(group, "loss factors vs area-fraction limits at rho=1e-4", worst, 0.0, tol.small_rho_rel, worst <= tol.small_rho_rel)


def random_scaling_tuples(n=1000, seed=RANDOM_SEED):
    rng = np.random.default_rng(seed)
    m = np.rint(10.0 ** rng.uniform(0.0, 6.0, n)).astype(int)
    xi = rng.choice([0.0, 0.5, 1.0], n)
    gamma = 10.0 ** rng.uniform(-2.0, 6.0, n)
    beta_sq = rng.uniform(1e-6, 1.0, n)
    return list(zip(m.tolist(), xi.tolist(), gamma.tolist(), beta_sq.tolist()))


def check_crossover(tol: TolerancesProfile):
    group = "rate"
    disagreements = 0
    worst_alpha = 0.0
    for m, xi, gamma, beta_sq in random_scaling_tuples():
        rep = compare_to_reference(m, xi, beta_sq, gamma, 1.0)
        if (rep.rate_array >= rep.rate_ref) != (beta_sq >= rep.beta_min_sq):
            disagreements += 1
        scaled = achievable_rate(m, xi, beta_sq * rep.alpha**2, gamma, 1.0)
        worst_alpha = max(worst_alpha, abs(scaled / rep.rate_ref - 1.0))
    yield _result(group, "rate crossover <=> beta^2 >= beta_min^2", disagreements, 0, 0, disagreements == 0, "1000 random tuples")
    yield _result(group, "alpha-scaled rate equals reference rate", worst_alpha, 0.0, tol.alpha_rel, worst_alpha <= tol.alpha_rel)


def check_allocation(tol: TolerancesProfile):
    group = "allocation"
    rng = np.random.default_rng(RANDOM_SEED)
    violations = 0
    cases = 0
    for m in (1, 2, 3, 4):
        for equal in (True, False):
            resp = None if equal else rng.uniform(0.5, 1.5, m)
            noise = None if equal else rng.uniform(0.5, 2.0, m)
            prob = allocation.AllocationProblem(m, 1e-3, 1e9, resp, noise)
            vertex = float(allocation.mrc_objective(prob, allocation.optimal_allocation(prob)))
            _, best = allocation.brute_force_allocation_search(prob, 100)
            cases += 1
            if best > vertex * (1.0 + 1e-12):
                violations += 1
    yield _result(group, "grid search never beats vertex allocation", violations, 0, 0, violations == 0, f"{cases} problems, 100 steps")


def random_majorizing_pairs(n=1000, seed=RANDOM_SEED):
    """Pairs ``(p, q)`` with ``q`` an average of ``p`` under random T-transforms."""
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(n):
        size = int(rng.integers(2, 12))
        p = rng.dirichlet(np.full(size, 0.5))
        q = p.copy()
        for _ in range(int(rng.integers(1, 6))):
            i, j = rng.choice(size, 2, replace=False)
            lam = rng.uniform()
            qi, qj = q[i], q[j]
            q[i] = lam * qi + (1.0 - lam) * qj
            q[j] = lam * qj + (1.0 - lam) * qi
        pairs.append((p, q))
    return pairs


def check_majorization(tol: TolerancesProfile):
    group = "allocation"
    bad_order = 0
    not_majorized = 0
    for p, q in random_majorizing_pairs():
        if not allocation.majorizes(p, q):
            not_majorized += 1
        if loss_factor(p) < loss_factor(q) - 1e-15:
            bad_order += 1
    yield _result(group, "sum f^2 is Schur-monotone on majorizing pairs", bad_order, 0, 0, bad_order == 0 and not_majorized == 0, f"{not_majorized} generated pairs failed the majorization test")


CHECK_GROUPS = {
    "specfun": (check_marcum, check_phi),
    "capture": (check_capture_closed_forms, check_denominators),
    "quadrature": (check_monte_carlo,),
    "loss-factor": (check_beta_identity,),
    "beta-min": (check_beta_min_anchors,),
    "asymptotic-slopes": (check_slopes,),
    "small-rho-limit": (check_small_rho_limits,),
    "rate": (check_crossover,),
    "allocation": (check_allocation, check_majorization),
}


def run_checks(profile="default", skip: Iterable[str] = (), only: Optional[Iterable[str]] = None, corner_perturbation=0.0):
    """Run the check groups and return the list of results.

    ``corner_perturbation`` scales every corner distance in the closed-form
    layouts by ``1 + corner_perturbation`` (fault injection).
    """
    tol = TOLERANCE_PROFILES[profile]
    skip = set(skip)
    only = None if only is None else set(only)
    unknown = (skip | (only or set())) - set(CHECK_GROUPS)
    if unknown:
        raise KeyError(f"unknown check group(s): {sorted(unknown)}")
    results = []
    for group, checks in CHECK_GROUPS.items():
        if group in skip or (only is not None and group not in only):
            continue
        for check in checks:
            try:
                if check is check_capture_closed_forms:
                    results.extend(check(tol, corner_scale=1.0 + corner_perturbation))
                else:
                    results.extend(check(tol))
            except PdArrayError as exc:
                results.append(_result(group, check.__name__, math.nan, math.nan, math.nan, False, f"raised {exc!r}"))
    return results


def _fmt(value):
    if isinstance(value, bool):
        return "pass" if value else "FAIL"
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def report_csv(results) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["group", "name", "status", "observed", "expected", "tolerance", "detail"])
    for r in results:
        writer.writerow([r.group, r.name, _fmt(r.passed), _fmt(r.observed), _fmt(r.expected), _fmt(r.tolerance), r.detail])
    return buf.getvalue()
