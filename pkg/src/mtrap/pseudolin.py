"""Signed linear algebra on R^N with an indefinite diagonal metric."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import taylor as tl
from .errors import NotLorentzianPlane, UsageError


@dataclass(frozen=True)
class Signature:
    """Tangent signature (p, q) of an n-dimensional submanifold, n = p + q."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise UsageError(f"invalid signature ({self.p}, {self.q})")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def signs(self) -> np.ndarray:
        """The +1/-1 pattern of an orthonormal tangent frame, plus directions first."""
        return np.array([1.0] * self.p + [-1.0] * self.q)

    def flat(self) -> "AmbientSpace":
        """R^{n+2} with p+1 plus and q+1 minus directions."""
        return AmbientSpace(self.n + 2, self.p + 1, self.q + 1, "flat")

    def sphere(self) -> "AmbientSpace":
        """The quadric S^{n+2}_{p+1} inside R^{n+3} with (p+2, q+1) signs."""
        return AmbientSpace(self.n + 3, self.p + 2, self.q + 1, "sphere")


@dataclass(frozen=True)
class AmbientSpace:
    dim: int
    plus: int
    minus: int
    curvature: str = "flat"

    def __post_init__(self):
        if self.plus + self.minus != self.dim or self.plus < 0 or self.minus < 0:
            raise UsageError(f"bad ambient split {self.plus}+{self.minus} != {self.dim}")
        if self.curvature not in ("flat", "sphere"):
            raise UsageError(f"unknown curvature flag {self.curvature!r}")

    @property
    def eta(self) -> np.ndarray:
        """Diagonal of the metric."""
        return np.array([1.0] * self.plus + [-1.0] * self.minus)

    @property
    def is_sphere(self) -> bool:
        return self.curvature == "sphere"


def _check(x, amb: AmbientSpace):
    if tl.value(x).shape[-1] != amb.dim:
        raise UsageError(f"vector of length {tl.value(x).shape[-1]} in ambient of dimension {amb.dim}")


def inner(x, y, amb: AmbientSpace):
    """Signed inner product over the last axis; works on arrays and Taylor objects."""
    _check(x, amb)
    _check(y, amb)
    eta = amb.eta
    if isinstance(x, tl.Taylor) or isinstance(y, tl.Taylor):
        return (x * eta * y).sum(-1)
    return np.sum(np.asarray(x) * eta * np.asarray(y), axis=-1)


def conjugate(x, amb: AmbientSpace):
    """(x', x'') -> (x', -x'') with the split given by the ambient signs."""
    _check(x, amb)
    return x * amb.eta


def gram(vectors, amb: AmbientSpace):
    """Gram matrix of the columns of ``vectors`` (shape ..., N, k)."""
    eta = amb.eta
    if isinstance(vectors, tl.Taylor):
        return tl.einsum("...ia,...ib->...ab", vectors * eta[:, None], vectors)
    v = np.asarray(vectors)
    return np.einsum("...ia,i,...ib->...ab", v, eta, v)


def gram_signature(G, tol: float = 1e-9) -> tuple[int, int, int]:
    """Counts of eigenvalues above ``tol``, below ``-tol`` and in between."""
    w = np.linalg.eigvalsh(np.asarray(G, dtype=float))
    plus = int(np.sum(w > tol))
    minus = int(np.sum(w < -tol))
    return plus, minus, len(w) - plus - minus


@dataclass(frozen=True)
class NullNormalFrame:
    nu: np.ndarray
    xi: np.ndarray


def _sign_normalize(v: np.ndarray, tol: float) -> np.ndarray:
    scale = np.max(np.abs(v))
    for c in v:
        if abs(c) > tol * scale:
            return v if c > 0 else -v
    return v


def _lex_greater(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)))
    for x, y in zip(a, b):
        if abs(x - y) > tol * scale:
            return x > y
    return True


def null_frame_from_plane(b1, b2, amb: AmbientSpace, tol: float = 1e-9) -> NullNormalFrame:
    """Null frame (nu, xi) with <nu, xi> = 2 spanning the Lorentzian plane span(b1, b2).

    The 2x2 Gram matrix is diagonalised into a unit spacelike f+ and a unit
    timelike f-; the null lines are f+ +- f-.  Each is signed so that its
    first nonzero coordinate is positive, nu is the lexicographically larger
    one, and xi is rescaled to <nu, xi> = 2.
    """
    b1 = np.asarray(b1, dtype=float)
    b2 = np.asarray(b2, dtype=float)
    B = np.stack([b1, b2], axis=-1)
    G = gram(B, amb)
    scale = max(np.max(np.abs(G)), 1e-300)
    disc = (G[0, 1] ** 2 - G[0, 0] * G[1, 1]) / scale**2
    if disc <= tol:
        raise NotLorentzianPlane(f"plane is not Lorentzian (normalized discriminant {disc:.3e})")
    w, V = np.linalg.eigh(G)
    f_minus = B @ V[:, 0] / np.sqrt(-w[0])
    f_plus = B @ V[:, 1] / np.sqrt(w[1])
    n1 = _sign_normalize(f_plus + f_minus, tol)
    n2 = _sign_normalize(f_plus - f_minus, tol)
    if not _lex_greater(n1, n2, tol):
        n1, n2 = n2, n1
    return NullNormalFrame(n1, 2.0 * n2 / inner(n1, n2, amb))


def signed_complement(vectors, amb: AmbientSpace) -> np.ndarray:
    """Euclidean-orthonormal basis (columns) of the signed orthogonal complement."""
    v = np.asarray(vectors, dtype=float)
    A = (v * amb.eta[:, None]).T
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > 1e-12 * max(s.max(), 1e-300)))
    return vt[rank:].T


def signed_gram_schmidt(vectors, amb: AmbientSpace, tol: float = 1e-10):
    """Orthonormalize columns with the signed product; returns (frame, signs).

    Raises ``ValueError`` when a pivot <e, e> falls below ``tol``; callers map
    that onto their own domain-specific error.
    """
    v = np.asarray(vectors, dtype=float)
    out = []
    signs = []
    for k in range(v.shape[-1]):
        w = v[:, k].copy()
        for e, s in zip(out, signs):
            w = w - s * inner(w, e, amb) * e
        nrm = inner(w, w, amb)
        if abs(nrm) < tol:
            raise ValueError(f"Gram-Schmidt pivot {nrm:.3e} below tolerance")
        sgn = 1.0 if nrm > 0 else -1.0
        out.append(w / np.sqrt(abs(nrm)))
        signs.append(sgn)
    return np.stack(out, axis=-1), np.array(signs)
