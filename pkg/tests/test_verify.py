from __future__ import annotations

import pytest

from pdarray import verify


def by_name(results):
    return {r.name: r for r in results}


def test_capture_group_passes_by_default():
    results = verify.run_checks(only=["capture"])
    assert results and all(r.passed for r in results)


def test_corner_fault_injection_is_detected():
    results = by_name(verify.run_checks(only=["capture"], corner_perturbation=0.01))
    assert not results["gaussian closed form vs quadrature"].passed
    assert not results["lg10 closed form vs quadrature"].passed
    # the reference-disk check does not touch PD positions
    assert results["gaussian reference-disk capture"].passed


def test_strict_profile_fails_on_quadrature():
    results = verify.run_checks(profile="strict", only=["capture"])
    assert not any(r.passed for r in results)
    assert all("rel_tolerance=1e-14" in r.detail for r in results)


def test_groups_other_than_slopes_pass():
    results = verify.run_checks(skip=["capture", "asymptotic-slopes"])
    failed = [r for r in results if not r.passed]
    assert not failed, failed


def test_unknown_group():
    with pytest.raises(KeyError):
        verify.run_checks(skip=["bogus"])


def test_report_is_deterministic():
    a = verify.report_csv(verify.run_checks(only=["rate", "allocation", "quadrature"]))
    b = verify.report_csv(verify.run_checks(only=["rate", "allocation", "quadrature"]))
    assert a == b
    assert "np.float64" not in a
