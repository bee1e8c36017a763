from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdarray.beams import DEGENERATE, GAUSSIAN, LG10, UNIFORM, capture_profile
from pdarray.errors import DomainError
from pdarray.hexgeom import array_size, layout
from pdarray.scaling import (
    LinkBudget,
    PdPhysical,
    PdRegime,
    achievable_rate,
    beta_central_only,
    beta_gauss,
    beta_lg10,
    beta_min,
    beta_min_floor,
    compare_to_reference,
    db_to_linear,
    linear_to_db,
    loss_factor,
    mrc_snr,
    nats_to_bits,
    pd_bandwidth_physical,
    power_scaling,
    snr_per_pd,
)
from pdarray.verify import small_rho_beta_limits

BUDGET = LinkBudget(responsivity=1.0, p_tot_optical=1e-3, noise_density=1e-21, ref_bandwidth=1e9)


def test_db_conversions():
    assert db_to_linear(20.0) == pytest.approx(100.0)
    assert linear_to_db(1e6) == pytest.approx(60.0)
    assert nats_to_bits(math.log(2.0)) == pytest.approx(1.0)


def test_pd_bandwidth_limits():
    base = PdPhysical(permittivity=1e-10, area=1e-8, thickness=1e-6, load_resistance=50.0, transit_time=0.0)
    cj = 1e-10 * 1e-8 / 1e-6
    assert pd_bandwidth_physical(base) == pytest.approx(1 / (2 * math.pi * 50.0 * cj))
    doubled = PdPhysical(1e-10, 2e-8, 1e-6, 50.0, 0.0)
    assert pd_bandwidth_physical(doubled) == pytest.approx(pd_bandwidth_physical(base) / 2)
    transit = PdPhysical(0.0, 1e-8, 1e-6, 50.0, 1e-11)
    assert pd_bandwidth_physical(transit) == pytest.approx(1 / (2 * math.pi * 1e-11))
    with pytest.raises(DomainError):
        pd_bandwidth_physical(PdPhysical(0.0, 1e-8, 1e-6, 50.0, 0.0))


def test_snr_per_pd():
    assert snr_per_pd(BUDGET, 0.0, 1e9) == 0.0
    assert snr_per_pd(BUDGET, 1e-3, 1e9) == pytest.approx(1e6)
    assert snr_per_pd(BUDGET, 2e-4, 1e9) == pytest.approx(4 * snr_per_pd(BUDGET, 1e-4, 1e9))
    assert BUDGET.gamma_star == pytest.approx(1e6)
    with pytest.raises(DomainError):
        LinkBudget(0.0, 1.0, 1.0, 1.0)


def test_mrc_snr_examples():
    g = BUDGET.gamma_star
    assert mrc_snr(capture_profile(DEGENERATE, layout(2, 0.5)), BUDGET, 1e9) == pytest.approx(g)
    assert mrc_snr(capture_profile(UNIFORM, layout(2, 0.5)), BUDGET, 1e9) == pytest.approx(g / 19)
    gauss = capture_profile(GAUSSIAN, layout(3, 0.5))
    assert mrc_snr(gauss, BUDGET, 1e9) == pytest.approx(g * beta_gauss(3, 0.5), rel=1e-12)


def test_loss_factor_examples():
    assert loss_factor(capture_profile(DEGENERATE, layout(3, 1.0))) == 1.0
    assert loss_factor(capture_profile(UNIFORM, layout(1, 1.0))) == pytest.approx(1 / 7, rel=1e-15)
    rng = np.random.default_rng(5)
    v = rng.random(13)
    assert loss_factor(v) == pytest.approx(sum(x * x for x in v), rel=1e-15)


@pytest.mark.parametrize("G", [0, 1, 2, 3, 5, 8])
@pytest.mark.parametrize("rho", [0.05, 0.1, 0.5, 1.0, 2.0])
def test_closed_loss_factors_equal_profile_sums(G, rho):
    assert beta_gauss(G, rho) == pytest.approx(loss_factor(capture_profile(GAUSSIAN, layout(G, rho))), rel=1e-12)
    assert beta_lg10(G, rho) == pytest.approx(loss_factor(capture_profile(LG10, layout(G, rho))), rel=1e-12)


def test_loss_factor_anchors():
    assert beta_gauss(0, 0.3) == pytest.approx(1.0, rel=1e-15)
    assert beta_lg10(0, 0.3) == pytest.approx(1.0, rel=1e-15)
    assert beta_gauss(1, 2.0) >= 0.999
    assert beta_central_only(GAUSSIAN, 0, 0.4) == pytest.approx(1.0, rel=1e-15)


def test_reference_disk_loss_factor_exceeds_one_for_small_rho():
    # packing reaches past the reference disk, so fractions are not a sub-partition
    assert beta_lg10(1, 0.1) > 1.0


@pytest.mark.parametrize("G", [1, 4, 10, 25])
def test_small_rho_limits(G):
    # area-fraction limits: Gaussian f -> 1/(G+1)^2, LG10 f -> (4 d^2/rho^2 + 2) / (2 (G+1)^4)
    lim = small_rho_beta_limits(G)
    rho = 1e-4
    assert beta_gauss(G, rho) == pytest.approx(lim["gaussian"], rel=1e-3)
    assert beta_lg10(G, rho) == pytest.approx(lim["lg10"], rel=1e-3)
    assert beta_central_only(GAUSSIAN, G, rho) == pytest.approx(lim["gaussian-central"], rel=1e-3)
    assert beta_central_only(LG10, G, rho) == pytest.approx(lim["lg10-central"], rel=1e-3)
    assert lim["gaussian"] == pytest.approx(array_size(G) / (G + 1) ** 4)


def test_small_rho_lg10_limit_by_brute_force_area_fractions():
    # independent route: sum squared area fractions directly over the lumped positions
    G = 6
    total = 0.0
    for pd in layout(G, 1.0).expanded():
        total += ((4 * pd.distance**2 + 2) / (2 * (G + 1) ** 4)) ** 2
    assert small_rho_beta_limits(G)["lg10"] == pytest.approx(total, rel=1e-14)


def test_beta_min_anchors():
    for xi in (0.0, 0.5, 1.0):
        assert beta_min(1, xi, 123.0) == 1.0
    for m in (1, 7, 37, 10**6):
        assert beta_min(m, 0.0, 100.0) == pytest.approx(1.0, abs=1e-12)
    assert abs(beta_min(10**6, 1.0, 100.0) - math.log(101) / 100) < 1e-4


def test_beta_min_large_m_is_stable():
    # naive (1+g)^(1/M) - 1 loses every digit here
    assert beta_min(10**12, 1.0, 100.0) == pytest.approx(beta_min_floor(100.0), rel=1e-9)


def test_beta_min_floor():
    assert beta_min_floor(100.0) == pytest.approx(0.0461512051684126, rel=1e-12)
    assert beta_min_floor(1e-12) == pytest.approx(1.0, rel=1e-9)
    values = [beta_min_floor(g) for g in (0.1, 1.0, 10.0, 1e3)]
    assert values == sorted(values, reverse=True)


@given(
    m=st.integers(2, 10**6),
    xi=st.sampled_from([0.5, 1.0]),
    g1=st.floats(1e-3, 1e6),
    g2=st.floats(1e-3, 1e6),
)
@settings(max_examples=200, deadline=None)
def test_beta_min_monotone(m, xi, g1, g2):
    lo, hi = sorted((g1, g2))
    if hi > lo * (1 + 1e-9):
        assert beta_min(m, xi, lo) > beta_min(m, xi, hi)
    assert beta_min(m + 1, xi, lo) < beta_min(m, xi, lo)
    assert 0.0 < beta_min(m, xi, lo) <= 1.0


def test_regime_validation():
    assert PdRegime(0.5) is PdRegime.THICKNESS_OPTIMIZED
    with pytest.raises(ValueError):
        beta_min(7, 0.25, 10.0)
    with pytest.raises(DomainError):
        beta_min(0, 1.0, 10.0)


def test_achievable_rate():
    assert achievable_rate(1, 1.0, 1.0, 100.0, 2.0) == pytest.approx(2.0 * math.log(101.0))
    assert achievable_rate(37, 0.5, 0.0, 100.0, 2.0) == 0.0
    for m, xi in ((7, 1.0), (37, 0.5), (1000, 1.0)):
        bmin = beta_min(m, xi, 100.0)
        assert achievable_rate(m, xi, bmin, 100.0, 1.0) == pytest.approx(math.log(101.0), rel=1e-12)


def test_compare_to_reference():
    rep = compare_to_reference(1, 1.0, 1.0, 100.0, 1.0)
    assert rep.meets_reference and rep.alpha == 1.0
    bmin = beta_min(37, 1.0, 100.0)
    assert compare_to_reference(37, 1.0, bmin / 4, 100.0, 1.0).alpha == pytest.approx(2.0)
    rep = compare_to_reference(7, 1.0, 1 / 7, 100.0, 1.0)
    assert rep.meets_reference == (rep.rate_array >= rep.rate_ref) == (1 / 7 >= rep.beta_min_sq)
    assert compare_to_reference(7, 1.0, 0.0, 100.0, 1.0).alpha == math.inf
    assert power_scaling(0.0, 0.5) == math.inf
