import csv
import dataclasses

import numpy as np
import pytest
from conftest import G, P0

from wavedrift import VorticitySpec, WaveParameters, derive_frame
from wavedrift.core import diff_p, integrate_q
from wavedrift.errors import OutsideFluidError, StagnationError
from wavedrift.fields import (locate_hodograph, sample_fields, surface_formulas, velocity_at_hodograph,
                              write_fields_csv)
from wavedrift.solver import discrete_laminar


def laminar(coeffs, lam, nq=32, np_=64):
    params = WaveParameters(g=G, p0=P0, nq=nq, np_=np_)
    sol = discrete_laminar(VorticitySpec(coeffs, -P0), params, lam)
    return sol, derive_frame(sol)


def test_laminar_irrotational_frame():
    sol, fr = laminar((), 1.0)
    assert fr.d == pytest.approx(1.0, abs=1e-13)
    assert fr.c == pytest.approx(1.0, abs=1e-13)
    assert fr.C == pytest.approx(1.0, abs=1e-11)
    assert np.all(fr.eta == 0.0)


def test_laminar_shear_frame():
    sol, fr = laminar((-0.3,), 1.0)
    assert fr.c == pytest.approx(1.0, abs=1e-12)
    assert fr.d == pytest.approx(1.22514, abs=1e-4)


def test_wave_frame_invariants(irrot):
    sol, fr = irrot
    grid = sol.params.grid
    assert abs(integrate_q(fr.eta, grid.dq)) < 1e-14
    u_bed = fr.c - 1 / diff_p(sol.h.values, grid.dp)[:, 0]
    assert abs(integrate_q(u_bed, grid.dq)) < 1e-12
    assert np.all(fr.C - 2 * G * fr.eta > 0)
    assert abs(fr.c * sol.lam - 1) < 0.01
    assert fr.c == pytest.approx(2.089, rel=0.01)
    # crest at x = 0 and trough at x = pi
    assert np.argmax(fr.eta) == grid.crest_index and np.argmin(fr.eta) == 0


def test_interpolant_reproduces_nodes(irrot):
    sol, fr = irrot
    grid = sol.params.grid
    hp = diff_p(sol.h.values, grid.dp)
    for i in (0, 5, 64, 100):
        for j in (0, 7, 32, 64):
            h, _, hpi = fr.interp.evaluate(grid.q[i], grid.p[j])
            assert h == pytest.approx(sol.h.values[i, j], abs=1e-13)
            assert hpi == pytest.approx(hp[i, j], abs=1e-12)


def test_velocity_examples():
    sol, fr = laminar((), 1.0)
    assert velocity_at_hodograph(sol, fr, 0.3, P0) == pytest.approx((0.0, 0.0), abs=1e-13)
    sol, fr = laminar((-0.3,), 1.0, np_=128)
    u, v = velocity_at_hodograph(sol, fr, 1.0, 0.0)
    assert u == pytest.approx(1 - np.sqrt(0.4), abs=1e-4)
    assert v == 0.0


def test_crest_line_has_no_vertical_velocity(shear):
    sol, fr = shear
    for p in (P0, -0.6, -0.1, 0.0):
        assert abs(velocity_at_hodograph(sol, fr, 0.0, p)[1]) < 1e-14


def test_velocity_outside_range(irrot):
    sol, fr = irrot
    with pytest.raises(OutsideFluidError):
        velocity_at_hodograph(sol, fr, 0.0, 0.1)


def test_locate_boundaries(irrot):
    sol, fr = irrot
    for x in (0.0, 1.0, np.pi):
        assert locate_hodograph(sol, fr, x, -fr.d)[1] == P0
        eta = fr.surface_at(x)[0][0]
        assert locate_hodograph(sol, fr, x, eta)[1] == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(OutsideFluidError, match="outside fluid domain"):
        locate_hodograph(sol, fr, 0.0, fr.eta_crest + 1e-3)
    with pytest.raises(OutsideFluidError):
        locate_hodograph(sol, fr, 0.0, -fr.d - 1e-3)


def test_locate_is_inverse_of_h(irrot):
    sol, fr = irrot
    for q, p in ((0.3, -0.7), (2.0, -0.2), (-1.0, -0.95)):
        y = fr.interp.evaluate(q, p)[0] - fr.d
        assert locate_hodograph(sol, fr, q, y)[1] == pytest.approx(p, abs=1e-12)


def test_locate_laminar_linear():
    sol, fr = laminar((), 1.0)
    for y in (-0.9, -0.5, -0.1):
        assert locate_hodograph(sol, fr, 0.4, y)[1] == pytest.approx(y, abs=1e-12)


def test_surface_formulas_on_laminar_flow():
    sol, fr = laminar((-0.3,), 1.0)
    x = np.linspace(0, np.pi, 5)
    out = surface_formulas(fr, -0.3, x, G)
    np.testing.assert_allclose(out["psi_y2"], fr.C, rtol=1e-14)
    np.testing.assert_allclose(out["Dx_psi_y2"], 0.0, atol=1e-14)
    np.testing.assert_allclose(out["psi_xy"], 0.0, atol=1e-14)
    np.testing.assert_allclose(out["psi_yy"], 0.3, rtol=1e-12)


def test_surface_formulas_vanish_at_crest_and_trough(irrot):
    sol, fr = irrot
    out = surface_formulas(fr, 0.0, np.array([0.0, np.pi]), G)
    assert np.all(np.abs(out["psi_xy"]) < 1e-12)
    assert np.all(np.abs(out["Dx_psi_y2"]) < 1e-12)


def test_surface_psi_y2_matches_hodograph(irrot):
    sol, fr = irrot
    grid = sol.params.grid
    out = surface_formulas(fr, 0.0, fr.x, G)
    hp = diff_p(sol.h.values, grid.dp)[:, -1]
    np.testing.assert_allclose(out["psi_y2"], 1 / hp**2, rtol=1e-10)


def test_surface_stagnation_error(irrot):
    sol, fr = irrot
    broken = dataclasses.replace(fr, C=2 * G * fr.eta_crest)
    with pytest.raises(StagnationError, match="stagnation at surface"):
        surface_formulas(broken, 0.0, np.array([0.0]), G)


def test_sample_fields_csv(tmp_path, irrot):
    sol, fr = irrot
    rows = sample_fields(sol, fr, nx=9, ny=5)
    path = tmp_path / "fields.csv"
    write_fields_csv(path, rows)
    with open(path) as fh:
        data = list(csv.reader(fh))
    assert data[0] == ["x", "y", "u", "v", "psi"]
    assert len(data) == len(rows) + 1
    psi = np.array([float(r[4]) for r in data[1:]])
    assert np.all((psi >= 0) & (psi <= -P0))
    assert path.read_text().endswith("\n")
