import math

import numpy as np
import pytest

from mtrap import construct as C
from mtrap import verify as V
from mtrap.errors import BoundaryMargin, DegenerateSample, NothingVerifiable, NotLorentzianPlane
from mtrap.jets import grid_points
from mtrap.pseudolin import AmbientSpace, gram_signature

R22 = AmbientSpace(4, 2, 2)
TORUS = C.corollary1_surface("0.5")


def _torus_shape(x):
    jet = V.immersion_jet(TORUS, x)
    return jet, V.analyse(jet, TORUS.target, provenance=TORUS.normal(x))


def test_flat_torus_jet_at_origin():
    jet = V.immersion_jet(TORUS, np.array([0.0, 0.0]))
    assert np.allclose(jet.point, [0.5, 0, -0.5, 0])
    assert np.allclose(jet.first, [[0, 0], [0.5, 0], [0, 0], [0, -0.5]])
    assert np.array_equal(jet.second, np.swapaxes(jet.second, -1, -2))


def test_fd_matches_analytic():
    x = grid_points(TORUS.domain, [5, 5])
    a = V.immersion_jet(TORUS, x, "analytic")
    f = V.immersion_jet(TORUS, x, "fd", 1e-3)
    assert np.abs(a.first - f.first).max() < 1e-8
    assert np.abs(a.second - f.second).max() < 1e-8


def test_fd_linear_map_has_zero_second_derivatives():
    jet = V.fd_jet(lambda x: np.concatenate([x, np.zeros_like(x)], axis=-1), np.array([[0.3, -0.2]]))
    assert np.abs(jet.second).max() < 1e-9
    form = V.first_fundamental_form(jet.at(0), R22)
    assert np.allclose(form.metric, np.eye(2)) and (form.plus, form.minus) == (2, 0)
    with pytest.raises(NotLorentzianPlane):
        V.normal_frame(jet.at(0), R22)


def test_flat_torus_first_form_and_frame():
    x = np.array([0.7, -1.2])
    jet, shape = _torus_shape(x)
    form = V.first_fundamental_form(jet, R22)
    assert np.allclose(form.metric, np.diag([0.25, -0.25]))
    assert gram_signature(form.metric) == (1, 1, 0)
    u, v = x
    nu = np.array([math.cos(u), math.sin(u), math.cos(v), math.sin(v)])
    assert np.allclose(shape.normal_frame.nu, nu)
    assert np.allclose(shape.normal_frame.xi, nu * R22.eta)


def test_flat_torus_mean_curvature():
    jet, shape = _torus_shape(np.array([0.7, -1.2]))
    nu = shape.normal_frame.nu
    # H is a multiple of nu: every component ratio agrees
    assert np.allclose(np.cross(shape.H[:3], nu[:3]), 0, atol=1e-14)
    assert shape.residual_mt < 1e-10
    assert shape.decomposition_residual < 1e-12
    assert V.null_sff_check(shape).max_pairing > 0.1


def test_zero_candidate_is_degenerate():
    cand = C.corollary1_surface("0")
    jet = V.immersion_jet(cand, np.array([0.3, 0.4]))
    assert V.first_fundamental_form(jet, R22).degenerate
    with pytest.raises(DegenerateSample):
        V.analyse(jet, R22)
    with pytest.raises(NothingVerifiable):
        V.sweep(cand, [4, 4])


def test_boundary_margin():
    cand = C.from_hypersurface_flat(C.cylinder(1.0), polynomial="literal")
    hi = cand.domain[1].hi
    with pytest.raises(BoundaryMargin):
        V.immersion_jet(cand, np.array([0.1, hi - 1e-3]), "fd", 1e-3)


def test_cylinder_lemma_oracle():
    cand = C.from_hypersurface_flat(C.cylinder(1.0), polynomial="literal")
    x = np.array([0.4, 0.1])
    jet = V.immersion_jet(cand, x)
    res = V.lemma_geozero_oracle(cand, x, jet)
    assert res["metric"] < 1e-12 and res["sff"] < 1e-12
    g = jet.first.T @ (cand.target.eta[:, None] * jet.first)
    assert np.allclose(g, np.eye(2))


def test_latitude_lemma_oracle_and_frame():
    cand = C.from_gauss_sphere(C.latitude_product(0.5))
    x = np.array([0.4, 2.0])
    jet = V.immersion_jet(cand, x)
    res = V.lemma_geo_oracle(cand, x, jet)
    assert res["metric"] < 1e-12 and res["sff"] < 1e-12
    frame = V.normal_frame(jet, cand.target, True, cand.normal(x))
    for w in (frame.nu, frame.xi):
        assert abs(np.sum(w * cand.target.eta * jet.point)) < 1e-10


def test_null_hyperplane_checks():
    cand = C.null_hyperplane_graph([1, 0, 1, 0], ["sin(u)*cos(v)", "u", "sin(u)*cos(v)", "v"], R22)
    x = np.array([0.3, -0.5])
    shape = V.analyse(V.immersion_jet(cand, x), R22, provenance=cand.normal(x))
    res = V.null_sff_check(shape)
    assert res.max_pairing < 1e-8 and res.collinear_with == "nu"
    assert V.ricci_flat_normal_check(shape) < 1e-8
    rank, _ = V.mean_gauss_rank(cand, x)
    assert rank <= 1


def test_mean_gauss_rank_of_flat_torus():
    rank, sv = V.mean_gauss_rank(TORUS, np.array([0.2, 0.9]))
    assert rank == 2


def test_surface_checks_constant():
    c = 0.5
    x = np.array([0.4, 1.1])
    sc = V.surface_checks(TORUS, x)
    assert sc["E"] == pytest.approx(c * c) and sc["G"] == pytest.approx(-c * c) and abs(sc["F"]) < 1e-15
    assert abs(sc["omega"]) < 1e-15 and abs(sc["lagrangian_factor"]) < 1e-15
    assert sc["omega_prime"] == pytest.approx(c * c * math.cos(x[0] - x[1]))
    assert sc["flatness"] == 0 and sc["flatness_log"] == 0
    assert not sc["null_point"]


def test_omega_prime_vanishes_only_with_E():
    cand = C.corollary1_surface("1 + 0.3*sin(u)*cos(2*v)")
    for x in grid_points(cand.domain, [6, 6]):
        sc = V.surface_checks(cand, x)
        if abs(sc["omega_prime"]) < 1e-10:
            assert abs(sc["E"]) < 1e-8 or abs(math.cos(x[0] - x[1])) < 1e-8


def test_sweep_aggregates_recomputable():
    rep = V.sweep(TORUS, [6, 6])
    agg = rep.aggregates()
    res = [r.residual_mt for r in rep.records if not r.degenerate]
    assert agg["residual_mt_max"] == max(res)
    assert agg["samples"] == 36 and agg["degenerate"] == 0
    assert agg["identities"]["E_residual"] == max(r.identities["E_residual"] for r in rep.records)


def test_sweep_is_deterministic():
    a = V.sweep(TORUS, [5, 5], mode="fd")
    b = V.sweep(TORUS, [5, 5], mode="fd")
    assert [r.residual_mt for r in a.records] == [r.residual_mt for r in b.records]


def test_corrected_omega_prime_closed_form():
    cand = C.corollary1_surface("1 + 0.2*sin(u)*cos(2*v) - 0.1*cos(u + v)")
    for x in grid_points(cand.domain, [5, 5]):
        assert V.surface_checks(cand, x)["omega_prime_corrected_residual"] < 1e-12
