import math

import numpy as np
import pytest

from mtrap import construct as C
from mtrap import taylor as tl
from mtrap.errors import NoAdmissibleTau, NormalizationFailure, NotInNullHyperplane, RootBranchLost, UsageError
from mtrap.jets import grid_points, stack_partials
from mtrap.pseudolin import AmbientSpace, Signature

R22 = AmbientSpace(4, 2, 2)
PTS = np.array([[0.1, 0.2], [1.3, -0.4], [2.9, 2.2]])


def test_flat_torus_from_support_function():
    cand = C.from_support_function("0.5", Signature(1, 1))
    s = cand.sample(PTS, 0)
    assert np.allclose(s.tau, 0)
    u, v = PTS.T
    expected = 0.5 * np.stack([np.cos(u), np.sin(u), -np.cos(v), -np.sin(v)], axis=-1)
    assert np.allclose(s.phi.value, expected, atol=1e-15)


def test_corollary1_constant_closed_form():
    cand = C.corollary1_surface("0.5")
    u, v = PTS.T
    expected = 0.5 * np.stack([np.cos(u), np.sin(u), -np.cos(v), -np.sin(v)], axis=-1)
    assert np.allclose(cand.evaluate(PTS), expected, atol=1e-15)
    with pytest.raises(UsageError):
        C.corollary1_surface("0.5", root="minus")


def test_zero_support_function_has_no_admissible_root():
    with pytest.raises(NoAdmissibleTau):
        C.from_support_function("0", Signature(1, 1))


def test_support_function_tau_is_root_pointwise():
    cand = C.from_support_function("1 + 0.2*sin(2*u)*cos(v)", Signature(1, 1))
    for r, tau in zip(C.tau_roots_at(cand, PTS), cand.tau(PTS)):
        assert tau in r.roots


def test_taylor_of_lifted_tau_matches_closed_form():
    # on (1,1) the root is sigma_vv - sigma_uu; compare its derivatives through phi
    sigma = "1 + 0.2*sin(2*u)*cos(v)"
    a = C.from_support_function(sigma, Signature(1, 1)).taylor(PTS, 2)
    b = C.corollary1_surface(sigma).taylor(PTS, 2)
    assert np.abs(a.coef - b.coef).max() < 1e-12


def test_seed_invariants():
    for seed in (C.cylinder(1.5), C.ellipsoid(), C.graph("0.3*u^2 - 0.2*u*v + 0.1*v^3"), C.latitude_product(0.4)):
        x = grid_points(seed.domain, [3, 3])
        sig, nu = seed.data(tl.Taylor.variables(x, 1))
        eta = seed.ambient.eta
        ds = stack_partials(sig).value
        nv = nu.value
        assert np.abs(np.einsum("sia,si->sa", ds, nv * eta)).max() < 1e-9
        assert np.allclose(np.sum(nv * eta * nv, axis=-1), 1.0)
        for xi in x:
            g, A = seed.metric(xi), seed.shape_operator(xi)
            assert np.abs(g @ A - (g @ A).T).max() < 1e-8


def test_cylinder_shape_operator_inward():
    seed = C.cylinder(2.0)
    A = seed.shape_operator(np.array([0.3, 0.1]))
    assert np.allclose(A, np.diag([0.5, 0.0]))


def test_theorem_zero_cylinder_literal_and_corrected():
    r = 1.5
    lit = C.from_hypersurface_flat(C.cylinder(r), polynomial="literal")
    assert np.allclose(lit.tau(PTS), 2 * r)
    with pytest.raises(NoAdmissibleTau):
        C.from_hypersurface_flat(C.cylinder(r))


def test_round_sphere_umbilic():
    with pytest.raises(NoAdmissibleTau, match="metric-degenerate"):
        C.from_hypersurface_flat(C.round_sphere())
    cand = C.from_hypersurface_flat(C.round_sphere(), keep_degenerate=True)
    r = C.tau_roots_at(cand, PTS[:1])[0]
    assert r.roots == () and r.rejected[0][1] == "metric-degenerate"


def test_branch_out_of_range():
    with pytest.raises(RootBranchLost):
        C.from_hypersurface_flat(C.ellipsoid(), root_index=3)


def test_latitude_tau_and_unit_norm():
    for theta in (0.2, 0.5, 1.0):
        cand = C.from_gauss_sphere(C.latitude_product(theta))
        assert np.allclose(cand.tau(PTS), math.tan(theta) / 2, atol=1e-12)
        phi = cand.evaluate(PTS)
        assert np.allclose(np.sum(phi * cand.target.eta * phi, axis=-1), 1.0, atol=1e-12)


def test_decompose_flat_round_trip():
    cand = C.from_hypersurface_flat(C.ellipsoid())
    x = grid_points(cand.domain, [5, 5])
    s = cand.sample(x, 1)
    dphi = s.phi.grad()
    nt = s.normal
    _, nu = cand.seed.data(tl.Taylor.variables(x, 2))  # the normal costs one order
    dnu = stack_partials(nu).value
    dnt = np.concatenate([dnu, np.zeros(dnu.shape[:-2] + (1, 2))], axis=-2)
    dec = C.decompose_flat(s.phi.value, nt, cand.target, dphi, dnt)
    assert np.abs(dec.recompose() - s.phi.value).max() < 1e-12
    assert np.abs(dec.sigma - s.extras["seed_sigma"]).max() < 1e-12
    assert dec.legendrian.max() < 1e-9
    with pytest.raises(NormalizationFailure):
        C.decompose_flat(s.phi.value, np.concatenate([nt[..., :-1], np.zeros(nt.shape[:-1] + (1,))], -1), cand.target)


def test_decompose_sphere_round_trip():
    cand = C.from_gauss_sphere(C.latitude_product(0.5))
    x = grid_points(cand.domain, [4, 4])
    s = cand.sample(x, 1)
    sig, _ = cand.seed.data(tl.Taylor.variables(x, 1))
    dec = C.decompose_sphere(s.phi.value, s.normal, cand.target, cand.target.plus, s.phi.grad(), stack_partials(sig).value)
    assert np.abs(dec.tau - math.tan(0.5) / 2).max() < 1e-12
    assert dec.orthogonality.max() < 1e-12
    assert dec.gauss.max() < 1e-9 and dec.legendrian.max() < 1e-9


def test_null_hyperplane_membership():
    comps = ["sin(u)*cos(v)", "u", "sin(u)*cos(v)", "v"]
    cand = C.null_hyperplane_graph([1, 0, 1, 0], comps, R22)
    phi = cand.evaluate(PTS[:1] * 0.3)
    assert abs(phi[0] @ (R22.eta * np.array([1, 0, 1, 0]))) < 1e-15
    with pytest.raises(NotInNullHyperplane):
        C.null_hyperplane_graph([1, 0, 1, 0], ["sin(u)*cos(v)", "u", "sin(u)*cos(v) + 0.001", "v"], R22)
    with pytest.raises(UsageError):
        C.null_hyperplane_graph([1, 0, 0, 0], comps, R22)


def test_correspondence_constant_is_round_sphere():
    c = 0.7
    corr = C.lorentzian_correspondence(str(c))
    x = grid_points(corr.seed.domain, [4, 4])
    s2 = corr.seed.point(x)
    assert np.allclose(np.linalg.norm(s2, axis=-1), 2 * c)
    assert corr.support_residual(x).max() < 1e-12
    assert corr.non_immersed(x) == []
