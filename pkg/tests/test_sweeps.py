from __future__ import annotations

import csv
import io
import math

import pytest

from pdarray.beams import BeamPattern, capture_profile
from pdarray.hexgeom import layout
from pdarray.scaling import beta_min, loss_factor
from pdarray.sweeps import HEADERS, SweepKind, SweepSpec, default_m_grid, run_sweep


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_default_m_grid():
    grid = default_m_grid()
    assert grid[0] == 1 and grid[-1] == 10**6
    assert list(grid) == sorted(set(grid))


def test_betamin_rows():
    out = rows(run_sweep(SweepSpec("betamin", M_values=(1, 7, 100, 10**6))))
    assert list(out[0]) == HEADERS[SweepKind.BETA_MIN]
    assert len(out) == 4 * 3 * 2
    for r in out:
        if r["M"] == "1" or r["xi"] == "0.0":
            assert float(r["beta_min_sq"]) == pytest.approx(1.0, abs=1e-12)
        assert float(r["beta_min_sq"]) == beta_min(int(r["M"]), float(r["xi"]), float(r["gamma_star"]))
    tail = [r for r in out if r["M"] == "1000000" and r["xi"] == "1.0" and r["gamma_star_db"] == "20.0"]
    assert float(tail[0]["beta_min_sq"]) == pytest.approx(0.04615, abs=1e-4)
    assert float(tail[0]["floor"]) == pytest.approx(math.log(101) / 100, rel=1e-15)


def test_beta_fixed_rows_are_reproducible_from_library_calls():
    spec = SweepSpec("beta-fixed", G_max=4, rho=(0.1, 2.0))
    for r in rows(run_sweep(spec)):
        lay = layout(int(r["G"]), float(r["rho"]), r["distance_model"])
        prof = capture_profile(BeamPattern(r["beam"]), lay, r["normalization"])
        assert float(r["beta_sq"]) == loss_factor(prof)
        assert r["meets_reference"] == ("1" if float(r["beta_sq"]) >= float(r["beta_min_sq"]) else "0")
        if r["beam"] == "uniform":
            assert float(r["beta_sq"]) == 1.0 / int(r["M"])
        if r["beam"] == "gaussian" and r["rho"] == "2.0":
            assert float(r["beta_sq"]) >= 0.999


def test_beta_scaled_rows():
    out = rows(run_sweep(SweepSpec("beta-scaled", G_max=8)))
    assert list(out[0]) == HEADERS[SweepKind.BETA_SCALED_RHO]
    for r in out:
        assert float(r["rho"]) == pytest.approx(1.0 / (int(r["G"]) + 1))
        if r["G"] == "0":
            assert float(r["beta_sq"]) == 1.0
    gaps = [float(r["log_gap_gauss_lg10"]) for r in out if r["beam"] == "gaussian"]
    assert all(b > a for a, b in zip(gaps[1:], gaps[2:]))


def test_normalization_and_distance_model_flags_propagate():
    text = run_sweep(SweepSpec("beta-fixed", G_max=2, rho=(0.5,), normalization="reference-disk", distance_model="exact-lattice"))
    r = rows(text)[-1]
    assert (r["normalization"], r["distance_model"]) == ("reference-disk", "exact-lattice")


def test_sweeps_are_deterministic():
    for kind in SweepKind:
        spec = SweepSpec(kind, G_max=5)
        assert run_sweep(spec) == run_sweep(spec)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="beta-fixed", rho=()),
        dict(kind="beta-fixed", rho=(0.0,)),
        dict(kind="beta-scaled", rho0=-1.0),
        dict(kind="betamin", M_values=()),
        dict(kind="betamin", M_values=(0,)),
        dict(kind="beta-fixed", beams=("bessel",)),
        dict(kind="beta-fixed", G_max=-1),
    ],
)
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        SweepSpec(**kwargs)
