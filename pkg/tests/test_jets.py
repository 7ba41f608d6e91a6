import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtrap import taylor as tl
from mtrap.errors import DegenerateChartPoint
from mtrap.jets import (
    covariant_hessian,
    grid_points,
    intrinsic_gradient,
    make_chart,
    orthonormal_frame,
)
from mtrap.pseudolin import Signature, conjugate, inner
from mtrap.scalarlang import jet, parse

T11 = make_chart(Signature(1, 1))
S2 = make_chart(Signature(2, 0))


# Taylor arithmetic ------------------------------------------------------------------

def test_taylor_product_and_chain_rule():
    x0 = np.array([0.3, -0.7])
    u, v = tl.Taylor.variables(x0, 3)
    f = tl.sin(u * v) * tl.exp(v)
    a, b = x0
    # d/du and d2/dudv by hand
    assert f.partial((1, 0)) == pytest.approx(b * math.cos(a * b) * math.exp(b), abs=1e-14)
    d_uv = (math.cos(a * b) - a * b * math.sin(a * b)) * math.exp(b) + b * math.cos(a * b) * math.exp(b)
    assert f.partial((1, 1)) == pytest.approx(d_uv, abs=1e-14)


def test_taylor_inverse_and_det():
    x0 = np.array([0.2])
    (t,) = tl.Taylor.variables(x0, 2)
    M = tl.stack([tl.stack([t * 0 + 2.0, t], -1), tl.stack([t, t * 0 + 3.0], -1)], -2)
    inv = tl.inv(M)
    prod = tl.matmul(M, inv)
    assert np.allclose(prod.value, np.eye(2)) and np.allclose(prod.grad(), 0, atol=1e-14)
    assert tl.det(M).partial((1,)) == pytest.approx(-2 * 0.2, abs=1e-14)


def test_taylor_diff_lowers_order():
    (t,) = tl.Taylor.variables(np.array([0.0]), 4)
    c = tl.cos(t)
    d = c.diff(0)
    assert d.order == 3
    assert d.partial((3,)) == pytest.approx(1.0)  # d4 cos at 0


# charts ------------------------------------------------------------------------------

def test_chart_examples():
    u, v = 0.4, -1.1
    assert np.allclose(T11.point(np.array([u, v])), [math.cos(u), math.sin(u), math.cos(v), math.sin(v)])
    th_lon, th_lat = 0.5, 0.3
    p = S2.point(np.array([th_lon, th_lat]))
    assert p.shape == (4,) and p[3] == 1.0
    assert np.sum(p[:3] ** 2) == pytest.approx(1.0, abs=1e-15)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_product_torus_unit_blocks(u, v):
    p = T11.point(np.array([u, v]))
    assert np.sum(p[:2] ** 2) == pytest.approx(1.0, abs=1e-12)
    assert np.sum(p[2:] ** 2) == pytest.approx(1.0, abs=1e-12)


def test_orthonormal_frame_examples():
    x = np.array([0.4, 1.3])
    f = orthonormal_frame(T11, x)
    assert np.allclose(f.vectors, T11.tangent(x)) and list(f.signs) == [1, -1]
    lat = 0.6
    f = orthonormal_frame(S2, np.array([0.2, lat]))
    assert np.allclose(f.coeffs[0, 0], 1 / math.cos(lat))
    G = f.vectors.T @ (S2.ambient.eta[:, None] * f.vectors)
    assert np.allclose(G, np.eye(2), atol=1e-12)
    with pytest.raises(DegenerateChartPoint):
        orthonormal_frame(S2, np.array([0.2, math.pi / 2 - 1e-9]))


def test_gradient_examples():
    x = np.array([0.0, 0.8])
    g = intrinsic_gradient(jet(parse("cos(u)", ("u", "v")), x), T11, x)
    assert np.allclose(g, 0)
    x = np.array([math.pi / 2, 0.0])
    g = intrinsic_gradient(jet(parse("u", ("u", "v")), x), T11, x)
    assert np.allclose(g, [-1, 0, 0, 0])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_gradient_defining_property_and_legendrian(seed):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.2, 1.2, size=2)
    a, b, c = rng.normal(size=3)
    sigma = parse(f"{a:.4f}*sin(u)*cos(v) + {b:.4f}*z + {c:.4f}*x*y", S2.field_names())
    j = jet(sigma, x, 2, S2.field_env)
    grad = intrinsic_gradient(j, S2, x)
    nu = S2.point(x)
    amb = S2.ambient
    assert abs(inner(grad, nu, amb)) < 1e-10
    assert abs(inner(grad, conjugate(nu, amb), amb)) < 1e-10
    d = S2.tangent(x)
    for _ in range(20):
        w = rng.normal(size=2)
        assert inner(grad, d @ w, amb) == pytest.approx(j.grad @ w, abs=1e-9)


def test_covariant_hessian_torus_equals_chart_hessian():
    x = np.array([0.3, -0.9])
    sigma = parse("sin(u)*cos(v) + u*v", ("u", "v"))
    j = jet(sigma, x, 2)
    H = covariant_hessian(j, T11, x, orthonormal_frame(T11, x))
    # grad = s_u d_u - s_v d_v and <d_v, d_v> = -1, so the signs cancel
    assert np.allclose(H, j.hess, atol=1e-12)


def test_covariant_hessian_height_on_sphere():
    lat = 0.7
    x = np.array([1.1, lat])
    j = jet(parse("z", S2.field_names()), x, 2, S2.field_env)
    H = covariant_hessian(j, S2, x, orthonormal_frame(S2, x))
    assert np.allclose(H, -math.sin(lat) * np.eye(2), atol=1e-12)


def test_grid_points_layout():
    pts = grid_points(T11.domain, [4, 3])
    assert pts.shape == (12, 2)
    assert np.allclose(pts[:3, 0], 0) and np.allclose(pts[:3, 1], [0, 2 * math.pi / 3, 4 * math.pi / 3])
    pts = grid_points(S2.domain, [2, 2])
    assert np.all(np.abs(pts[:, 1]) < math.pi / 2 - 0.2)
