import csv
import dataclasses
import json

import numpy as np
import pytest
from conftest import G, P0

from wavedrift import VorticitySpec, WaveParameters, derive_frame
from wavedrift.errors import OutsideFluidError
from wavedrift.kinematics import (drift_profile, integrate_trajectory, mass_flux, streamline,
                                  traversal_and_drift, write_drift_json, write_streamline_csv,
                                  write_trajectory_csv)
from wavedrift.solver import discrete_laminar
from wavedrift.verify import check_identity_suite


def laminar(coeffs, lam, np_=64):
    params = WaveParameters(g=G, p0=P0, nq=32, np_=np_)
    sol = discrete_laminar(VorticitySpec(coeffs, -P0), params, lam)
    return sol, derive_frame(sol)


def test_streamline_bottom_and_surface(irrot):
    sol, fr = irrot
    bed = streamline(sol, fr, P0)
    assert np.all(bed.sigma == -fr.d) and bed.max_steepness == 0.0
    top = streamline(sol, fr, 0.0)
    np.testing.assert_allclose(top.sigma, fr.eta, atol=1e-14)


def test_laminar_streamlines_are_flat():
    sol, fr = laminar((-0.3,), 1.0)
    line = streamline(sol, fr, -0.375)  # a grid level for np = 64
    assert np.ptp(line.sigma) < 1e-14
    j = np.argmin(np.abs(sol.params.grid.p + 0.375))
    assert line.sigma[0] == pytest.approx(sol.h.values[0, j] - fr.d, abs=1e-14)


def test_streamlines_steepen_upwards(irrot):
    sol, fr = irrot
    s = [streamline(sol, fr, p).max_steepness for p in np.linspace(P0, 0, 9)]
    assert np.all(np.diff(s) > 0)


def test_still_current_has_no_drift():
    sol, fr = laminar((), 0.47)
    for p in (P0, -0.5, 0.0):
        tau, D = traversal_and_drift(sol, fr, p)
        assert tau == pytest.approx(2 * np.pi / fr.c, abs=1e-12)
        assert abs(D) < 1e-12


def test_shear_current_drift_closed_form():
    sol, fr = laminar((-0.3,), 1.0, np_=128)
    tau, D = traversal_and_drift(sol, fr, 0.0)
    assert tau == pytest.approx(2 * np.pi * 0.4**-0.5, abs=1e-3)
    assert D == pytest.approx(2 * np.pi * (0.4**-0.5 - 1), abs=1e-3)
    p, _, Dp = drift_profile(sol, fr)
    w = 1 + 2 * -0.3 * (p + 1)
    np.testing.assert_allclose(Dp, 2 * np.pi * (w**-0.5 - 1), atol=1e-3)


def test_wave_drift_profile(irrot):
    sol, fr = irrot
    p, tau, D = drift_profile(sol, fr)
    assert np.all(D[1:] > 0)
    assert abs(D[0]) < 1e-3  # small and positive at the bed, see drift checks
    # the quadrature at a grid level agrees with the interpolant-based routine
    assert traversal_and_drift(sol, fr, p[20])[1] == pytest.approx(D[20], abs=1e-13)


def test_trajectory_in_still_current():
    sol, fr = laminar((), 0.47)
    period = 2 * np.pi / fr.c
    tr = integrate_trajectory(sol, fr, 0.5, -0.2, duration=0.2 * period)
    np.testing.assert_allclose(tr.X, 0.5, atol=1e-12)
    np.testing.assert_allclose(tr.x, 0.5 - fr.c * tr.t, atol=1e-12)
    np.testing.assert_allclose(tr.Y, -0.2, atol=1e-12)


def test_bed_trajectory_stays_on_bed(irrot):
    sol, fr = irrot
    period = 2 * np.pi / fr.c
    tr = integrate_trajectory(sol, fr, 0.0, -fr.d, duration=0.5 * period, dt=period / 500)
    np.testing.assert_allclose(tr.Y, -fr.d, atol=1e-14)


def test_mid_depth_orbit(irrot):
    sol, fr = irrot
    y0 = fr.interp.evaluate(0.0, -0.5)[0] - fr.d
    tr = integrate_trajectory(sol, fr, 0.0, y0)
    assert tr.drift > 0
    assert tr.drift == pytest.approx(traversal_and_drift(sol, fr, -0.5)[1], abs=1e-9)
    assert np.ptp(tr.psi) < 1e-12
    line = streamline(sol, fr, -0.5, np.linspace(-np.pi, np.pi, 513))
    assert tr.vertical_extent == pytest.approx(np.ptp(line.sigma), rel=1e-3)
    # after one traversal time the particle is back at the same height, shifted by D
    i = int(round(tr.tau / tr.dt))
    assert tr.Y[i] == pytest.approx(tr.Y[0], abs=1e-6)
    assert tr.X[i] - tr.X[0] == pytest.approx(tr.drift, abs=2e-3)


def test_trajectory_outside_fluid(irrot):
    sol, fr = irrot
    with pytest.raises(OutsideFluidError, match="outside fluid domain"):
        integrate_trajectory(sol, fr, 0.0, 0.5)


def test_mass_flux_laminar_exact():
    sol, fr = laminar((), 1.0)
    assert mass_flux(sol, fr, 0.0) == pytest.approx(-1.0, abs=1e-12)


@pytest.mark.parametrize("x", [0.0, np.pi / 2, np.pi])
def test_mass_flux_on_waves(irrot, shear, x):
    for sol, fr in (irrot, shear):
        assert abs(mass_flux(sol, fr, x) - P0) < 1e-4


def test_wrong_wave_speed_is_caught(irrot):
    sol, fr = irrot
    broken = dataclasses.replace(fr, c=fr.c + 0.1)
    # the relative flux does not see c; the bed Stokes condition does
    assert abs(mass_flux(sol, broken, 0.0) - P0) < 1e-4
    checks = {c.id: c for c in check_identity_suite(sol, broken)}
    assert checks["stokes_condition"].verdict == "fail"
    assert checks["stokes_condition"].margin == pytest.approx(0.1 * 2 * np.pi, rel=1e-10)


def test_writers(tmp_path, irrot):
    sol, fr = irrot
    period = 2 * np.pi / fr.c
    tr = integrate_trajectory(sol, fr, 0.0, -0.2, duration=0.01 * period)
    write_trajectory_csv(tmp_path / "t.csv", tr)
    write_streamline_csv(tmp_path / "s.csv", streamline(sol, fr, -0.5))
    write_drift_json(tmp_path / "d.json", sol, fr)
    with open(tmp_path / "t.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "X", "Y"] and len(rows) == tr.t.size + 1
    with open(tmp_path / "s.csv") as fh:
        assert next(csv.reader(fh)) == ["x", "sigma"]
    data = json.loads((tmp_path / "d.json").read_text())
    assert len(data) == sol.params.np_ + 1 and set(data[0]) == {"p", "tau", "drift"}
