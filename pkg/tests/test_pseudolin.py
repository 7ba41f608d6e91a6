import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mtrap.errors import NotLorentzianPlane, UsageError
from mtrap.pseudolin import (
    AmbientSpace,
    Signature,
    conjugate,
    gram_signature,
    inner,
    null_frame_from_plane,
    signed_complement,
    signed_gram_schmidt,
)

R22 = AmbientSpace(4, 2, 2)
finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
vec4 = arrays(np.float64, 4, elements=finite)


def test_signature_ambients():
    sig = Signature(2, 1)
    assert sig.n == 3
    assert list(sig.signs) == [1, 1, -1]
    flat, sphere = sig.flat(), sig.sphere()
    assert (flat.dim, flat.plus, flat.minus) == (5, 3, 2)
    assert (sphere.dim, sphere.plus, sphere.minus) == (6, 4, 2)
    assert sphere.is_sphere and not flat.is_sphere


def test_inner_examples():
    assert inner([1, 0, 0, 0], [1, 0, 0, 0], R22) == 1
    assert inner([1, 0, 1, 0], [1, 0, 1, 0], R22) == 0
    assert inner([1, 0, 1, 0], [1, 0, -1, 0], R22) == 2


def test_inner_dimension_mismatch():
    with pytest.raises(UsageError):
        inner([1, 0, 0], [1, 0, 0, 0], R22)


def test_conjugate_example_and_norm_on_product_sphere():
    assert list(conjugate(np.array([1.0, 2, 3, 4]), R22)) == [1, 2, -3, -4]
    u, v = 0.3, 1.7
    nu = np.array([np.cos(u), np.sin(u), np.cos(v), np.sin(v)])
    assert inner(nu, conjugate(nu, R22), R22) == pytest.approx(2.0, abs=1e-15)
    assert inner(nu, nu, R22) == pytest.approx(0.0, abs=1e-15)


@given(vec4, vec4, vec4, finite)
def test_inner_symmetric_bilinear(x, y, z, a):
    assert inner(x, y, R22) == pytest.approx(inner(y, x, R22), abs=1e-9)
    lhs = inner(a * x + z, y, R22)
    assert lhs == pytest.approx(a * inner(x, y, R22) + inner(z, y, R22), abs=1e-9 * (1 + abs(lhs)))


@given(vec4, vec4)
def test_conjugate_involution_and_isometry(x, y):
    assert np.array_equal(conjugate(conjugate(x, R22), R22), x)
    assert inner(conjugate(x, R22), conjugate(y, R22), R22) == pytest.approx(inner(x, y, R22), abs=1e-9)


def test_gram_signature_examples():
    assert gram_signature(np.diag([1.0, -1.0]), 1e-9) == (1, 1, 0)
    assert gram_signature(np.diag([1.0, 1e-12]), 1e-9) == (1, 0, 1)
    assert gram_signature(np.diag([0.25, -0.25]), 1e-9) == (1, 1, 0)


@settings(max_examples=60)
@given(st.integers(0, 10_000), st.integers(1, 5))
def test_sylvester_congruence_invariance(seed, n):
    rng = np.random.default_rng(seed)
    d = rng.choice([-1.0, 1.0], size=n) * rng.uniform(0.5, 2.0, size=n)
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    G = Q @ np.diag(d) @ Q.T
    P = rng.normal(size=(n, n)) + 3 * np.eye(n)
    assert gram_signature(P @ G @ P.T, 1e-9) == gram_signature(G, 1e-9)


def test_null_frame_examples():
    f = null_frame_from_plane(np.array([1.0, 0, 1, 0]), np.array([1.0, 0, -1, 0]), R22)
    assert np.allclose(f.nu, [1, 0, 1, 0]) and np.allclose(f.xi, [1, 0, -1, 0])
    f = null_frame_from_plane(np.array([1.0, 0, 0, 0]), np.array([0.0, 0, 1, 0]), R22)
    assert np.allclose(f.nu, [1, 0, 1, 0]) and np.allclose(f.xi, [1, 0, -1, 0])
    with pytest.raises(NotLorentzianPlane):
        null_frame_from_plane(np.array([1.0, 0, 0, 0]), np.array([0.0, 1, 0, 0]), R22)


@settings(max_examples=80)
@given(st.integers(0, 10_000))
def test_null_frame_equations(seed):
    rng = np.random.default_rng(seed)
    # a random Lorentzian plane: span of a spacelike and a timelike direction, mixed
    a = np.concatenate([rng.normal(size=2), np.zeros(2)])
    b = np.concatenate([np.zeros(2), rng.normal(size=2)])
    M = rng.normal(size=(2, 2)) + 2 * np.eye(2)
    b1, b2 = M[0, 0] * a + M[0, 1] * b, M[1, 0] * a + M[1, 1] * b
    G = np.array([[inner(b1, b1, R22), inner(b1, b2, R22)], [inner(b1, b2, R22), inner(b2, b2, R22)]])
    if abs(np.linalg.det(G)) < 1e-6 * max(1.0, np.abs(G).max()) ** 2:
        return
    f = null_frame_from_plane(b1, b2, R22)
    n_nu, n_xi = np.sum(f.nu**2), np.sum(f.xi**2)
    assert abs(inner(f.nu, f.nu, R22)) <= 1e-10 * n_nu
    assert abs(inner(f.xi, f.xi, R22)) <= 1e-10 * n_xi
    assert inner(f.nu, f.xi, R22) == pytest.approx(2.0, abs=1e-10 * np.sqrt(n_nu * n_xi))
    first = f.nu[np.flatnonzero(np.abs(f.nu) > 1e-12)[0]]
    assert first > 0


def test_signed_complement_is_orthogonal():
    rng = np.random.default_rng(1)
    vecs = rng.normal(size=(4, 2))
    comp = signed_complement(vecs, R22)
    assert comp.shape == (4, 2)
    assert np.abs(vecs.T @ (R22.eta[:, None] * comp)).max() < 1e-12


def test_signed_gram_schmidt_product_torus():
    u, v = 0.4, 2.2
    d = np.array([[-np.sin(u), 0], [np.cos(u), 0], [0, -np.sin(v)], [0, np.cos(v)]])
    frame, signs = signed_gram_schmidt(d, R22)
    assert list(signs) == [1, -1]
    G = frame.T @ (R22.eta[:, None] * frame)
    assert np.allclose(G, np.diag([1.0, -1.0]), atol=1e-12)
