"""Adjugate-trace polynomials of matrix pencils and their admissible real roots.

For a pencil M(tau) = M0 + tau*M1 and a weight W, the rational function
tr(M(tau)^{-1} W) has numerator t(tau) = tr(adj(M(tau)) W), a polynomial of
degree at most n-1.  Its roots are candidate values of tau; a root where
det M(tau) also vanishes is rejected as metric-degenerate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P

from . import taylor as tl
from .errors import IdenticallyZero, NoAdmissibleTau, UsageError

COMPLEX_TOL = 1e-7
MERGE_TOL = 1e-8


@dataclass(frozen=True)
class TauPolynomial:
    coeffs: np.ndarray  # ascending powers of tau
    provenance: str = "support-function"
    leading_vanished: bool = False

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, tau):
        return P.polyval(tau, self.coeffs)


@dataclass(frozen=True)
class TauRoots:
    roots: tuple[float, ...]
    rejected: tuple[tuple[complex | float, str], ...] = field(default_factory=tuple)

    @property
    def metric_degenerate(self) -> tuple[float, ...]:
        return tuple(float(np.real(r)) for r, why in self.rejected if why == "metric-degenerate")

    @property
    def real(self) -> tuple[float, ...]:
        """Accepted and metric-degenerate real roots, sorted."""
        return tuple(sorted(self.roots + self.metric_degenerate))


# polynomial matrices ---------------------------------------------------------
# A polynomial matrix is an array (..., n, n, d) of ascending coefficients.

def _pmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (a.shape[-1] + b.shape[-1] - 1,))
    for i in range(a.shape[-1]):
        out[..., i : i + b.shape[-1]] += a[..., i : i + 1] * b
    return out


def _padd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = max(a.shape[-1], b.shape[-1])
    pa = np.concatenate([a, np.zeros(a.shape[:-1] + (d - a.shape[-1],))], axis=-1)
    pb = np.concatenate([b, np.zeros(b.shape[:-1] + (d - b.shape[-1],))], axis=-1)
    return pa + pb


def _pdet(Mp: np.ndarray, rows: tuple[int, ...], cols: tuple[int, ...], memo: dict) -> np.ndarray:
    key = (rows, cols)
    if key in memo:
        return memo[key]
    if len(rows) == 1:
        out = Mp[..., rows[0], cols[0], :]
    else:
        out = None
        r0, rest = rows[0], rows[1:]
        for k, c in enumerate(cols):
            minor = _pdet(Mp, rest, cols[:k] + cols[k + 1 :], memo)
            term = _pmul(Mp[..., r0, c, :], minor)
            if k % 2:
                term = -term
            out = term if out is None else _padd(out, term)
    memo[key] = out
    return out


def _adjugate_poly(Mp: np.ndarray) -> np.ndarray:
    n = Mp.shape[-2]
    memo: dict = {}
    full = tuple(range(n))
    entries = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            # adj[i, j] = (-1)^{i+j} det(M without row j and column i)
            minor = _pdet(Mp, full[:j] + full[j + 1 :], full[:i] + full[i + 1 :], memo)
            entries[i][j] = minor if (i + j) % 2 == 0 else -minor
    d = max(e.shape[-1] for row in entries for e in row)
    pad = lambda e: np.concatenate([e, np.zeros(e.shape[:-1] + (d - e.shape[-1],))], axis=-1)
    return np.stack([np.stack([pad(e) for e in row], axis=-2) for row in entries], axis=-3)


def _faddeev_leverrier_adj(C: np.ndarray) -> np.ndarray:
    """Coefficients of adj(tau*I + C) in ascending powers, shape (..., n, n, n)."""
    n = C.shape[-1]
    A = -C  # adj(tau I - A)
    eye = np.broadcast_to(np.eye(n), C.shape)
    Bs = [eye.copy()]  # B_0 = I, coefficient of tau^{n-1}
    c = 1.0
    for k in range(1, n):
        AB = A @ Bs[-1]
        c = -np.trace(AB, axis1=-2, axis2=-1) / k
        Bs.append(AB + c[..., None, None] * eye)
    # adj(tau I - A) = sum_k B_k tau^{n-1-k}
    return np.stack(Bs[::-1], axis=-1)


def adjugate_trace_coeffs(M0, M1, weight=None) -> np.ndarray:
    """Ascending coefficients of tr(adj(M0 + tau*M1) W); batched over leading axes."""
    M0 = np.asarray(M0, dtype=float)
    M1 = np.asarray(M1, dtype=float)
    n = M0.shape[-1]
    if M0.shape[-2] != n or M1.shape[-2:] != (n, n):
        raise UsageError("M0 and M1 must be square matrices of equal size")
    W = np.eye(n) if weight is None else np.asarray(weight, dtype=float)
    M0, M1, W = np.broadcast_arrays(M0, M1, W)
    is_identity = np.array_equal(M1, np.broadcast_to(np.eye(n), M1.shape))
    if n > 4 and is_identity:
        adj = _faddeev_leverrier_adj(M0)
    else:
        adj = _adjugate_poly(np.stack([M0, M1], axis=-1))
    coeffs = np.einsum("...ijk,...ji->...k", adj, W)
    out = np.zeros(coeffs.shape[:-1] + (n,))
    m = min(n, coeffs.shape[-1])
    out[..., :m] = coeffs[..., :m]
    return out


def tau_poly_from_matrix(M0, M1, weight=None, provenance: str = "support-function", tol: float = 1e-12) -> TauPolynomial:
    """t(tau) = tr(adj(M0 + tau*M1) W) with W = Id by default."""
    M0 = np.asarray(M0, dtype=float)
    if M0.ndim != 2:
        raise UsageError("expected a single square matrix; use adjugate_trace_coeffs for batches")
    if M0.shape[0] == 1:
        raise NoAdmissibleTau("n = 1: the trace of a 1x1 inverse never vanishes")
    c = adjugate_trace_coeffs(M0, M1, weight)
    scale = max(np.max(np.abs(c)), 1e-300)
    return TauPolynomial(c, provenance, bool(abs(c[-1]) <= tol * scale))


def pencil_det_check(M0, M1) -> Callable[[float], float]:
    """tau -> |det M(tau)| / (||M0||_2 + |tau| ||M1||_2)^n, a scale-free nondegeneracy measure.

    Normalizing by the pencil rather than by ||M(tau)|| keeps a matrix that
    cancels to roundoff (an umbilic point) from looking well conditioned.
    """
    M0 = np.asarray(M0, dtype=float)
    M1 = np.asarray(M1, dtype=float)
    n = M0.shape[-1]
    n0, n1 = np.linalg.norm(M0, 2), np.linalg.norm(M1, 2)

    def check(tau: float) -> float:
        M = M0 + tau * M1
        nrm = n0 + abs(tau) * n1
        if nrm == 0.0:
            return 0.0
        return abs(np.linalg.det(M)) / nrm**n

    return check


def real_roots(tp: TauPolynomial, det_check: Callable[[float], float] | None = None, tol: float = 1e-9) -> TauRoots:
    """Real roots of ``tp``, splitting off complex and metric-degenerate ones."""
    c = np.asarray(tp.coeffs, dtype=float)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        raise IdenticallyZero("tau polynomial vanishes identically")
    last = len(c) - 1
    while last > 0 and abs(c[last]) <= tol * scale:
        last -= 1
    c = c[: last + 1]
    if last == 0:
        return TauRoots(())
    raw = P.polyroots(c)
    accepted: list[float] = []
    rejected: list[tuple[complex | float, str]] = []
    for r in sorted(raw, key=lambda z: (z.real, z.imag)):
        if abs(r.imag) > COMPLEX_TOL * (1.0 + abs(r.real)):
            if r.imag > 0:
                rejected.append((complex(r), "complex"))
            continue
        tau = float(r.real) + 0.0
        if accepted and abs(tau - accepted[-1]) <= MERGE_TOL * (1.0 + abs(tau)):
            continue
        if rejected and rejected[-1][1] == "metric-degenerate" and abs(tau - rejected[-1][0]) <= MERGE_TOL * (1.0 + abs(tau)):
            continue
        if det_check is not None and abs(det_check(tau)) < tol:
            rejected.append((tau, "metric-degenerate"))
        else:
            accepted.append(tau)
    return TauRoots(tuple(accepted), tuple(rejected))


# Taylor lifting --------------------------------------------------------------

def adjugate(M):
    """Adjugate of the trailing square matrices; arrays or Taylor objects."""
    n = tl.value(M).shape[-1]
    if n == 1:
        return M * 0.0 + 1.0
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            keep_r = [r for r in range(n) if r != j]
            keep_c = [c for c in range(n) if c != i]
            minor = M[..., keep_r, :][..., keep_c]
            d = tl.det(minor)
            row.append(d if (i + j) % 2 == 0 else -d)
        rows.append(tl.stack(row, axis=-1))
    return tl.stack(rows, axis=-2)


def pencil_value(M0, M1, W, tau):
    """tr(adj(M0 + tau*M1) W) for Taylor or array data and Taylor or array tau."""
    t = tau[..., None, None] if isinstance(tau, tl.Taylor) else np.asarray(tau)[..., None, None]
    M = M0 + M1 * t
    return tl.trace(tl.matmul(adjugate(M), W))


def lift_root(M0, M1, W, tau0: np.ndarray, slope: np.ndarray) -> tl.Taylor:
    """Taylor expansion of the root branch through ``tau0`` by chord iteration.

    ``slope`` is dt/dtau at the base point; each step fixes one more order.
    """
    anchor = tl._anchor(M0, M1, W)
    tau = tl.Taylor.constant(tau0, anchor.nvars, anchor.order)
    for _ in range(anchor.order + 1):
        tau = tau - pencil_value(M0, M1, W, tau) / slope
    return tau
