"""Charts on products of round spheres S^p x S^q and calculus of scalar fields on them.

The chart map is written with the generic helpers of :mod:`mtrap.taylor`, so
calling it on Taylor variables yields exact derivatives of the embedding.
Coordinates of the plus factor come first.  S^1 uses an unconstrained angle,
S^m for m >= 2 uses hyperspherical coordinates (longitude first, then
latitudes), and S^0 is the fixed point +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import taylor as tl
from .errors import DegenerateChartPoint
from .pseudolin import AmbientSpace, Signature, inner, signed_gram_schmidt
from .scalarlang import Jet4

POLE_MARGIN = 1e-6


@dataclass(frozen=True)
class CoordRange:
    lo: float
    hi: float
    periodic: bool = False

    def contains(self, x, margin: float = 0.0) -> np.ndarray:
        if self.periodic:
            return np.ones(np.shape(x), dtype=bool)
        return (x >= self.lo + margin) & (x <= self.hi - margin)


def sphere_embedding(coords, m: int):
    """Unit sphere S^m in R^{m+1} from m coordinates (longitude, latitude_1, ...)."""
    if m == 0:
        return [1.0]
    pt = [tl.cos(coords[0]), tl.sin(coords[0])]
    for k in range(1, m):
        c, s = tl.cos(coords[k]), tl.sin(coords[k])
        pt = [c * x for x in pt] + [s]
    return pt


def _factor_ranges(m: int) -> list[CoordRange]:
    if m == 0:
        return []
    lat = math.pi / 2 - 0.2
    return [CoordRange(0.0, 2 * math.pi, True)] + [CoordRange(-lat, lat) for _ in range(m - 1)]


def _lift(items, like):
    """Stack scalars/arrays/Taylors into a vector on the last axis, broadcasting constants."""
    anchor = tl._anchor(*items)
    if anchor is None:
        base = np.asarray(tl.value(like), dtype=float)
        return np.stack([np.broadcast_to(np.asarray(i, dtype=float), base.shape) for i in items], axis=-1)
    shape = anchor.shape
    lifted = [i if isinstance(i, tl.Taylor) else anchor.like(np.broadcast_to(np.asarray(i, dtype=float), shape)) for i in items]
    return tl.stack(lifted, axis=-1)


@dataclass(frozen=True)
class ProductSphereChart:
    """Chart of S^p x S^q inside R^{n+2} with signs (p+1, q+1)."""

    signature: Signature

    @property
    def ambient(self) -> AmbientSpace:
        return self.signature.flat()

    @property
    def n(self) -> int:
        return self.signature.n

    @property
    def domain(self) -> tuple[CoordRange, ...]:
        return tuple(_factor_ranges(self.signature.p) + _factor_ranges(self.signature.q))

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(f"u{i + 1}" for i in range(self.n))

    def aliases(self) -> dict[str, int]:
        """Short chart names (u, v, w) for low dimensions."""
        return {name: i for i, name in enumerate("uvw"[: self.n])} if self.n <= 3 else {}

    def point(self, coords):
        """The embedded point nu(x) = (nu', nu''), for arrays or Taylor variables."""
        p, q = self.signature.p, self.signature.q
        plus = sphere_embedding(coords[:p], p)
        minus = sphere_embedding(coords[p:], q)
        return _lift(plus + minus, coords[0])

    def field_env(self, coords) -> dict:
        """Names available to scalar fields: u1..un, aliases, nu1..nuN, and x, y, z on an S^2 factor."""
        env = {name: coords[i] for i, name in enumerate(self.variables)}
        env.update({name: coords[i] for name, i in self.aliases().items()})
        pt = self.point(coords)
        for k in range(self.ambient.dim):
            env[f"nu{k + 1}"] = pt[..., k]
        if self.signature.p == 2:
            env.update(x=pt[..., 0], y=pt[..., 1], z=pt[..., 2])
        elif self.signature.q == 2:
            off = self.signature.p + 1
            env.update(x=pt[..., off], y=pt[..., off + 1], z=pt[..., off + 2])
        return env

    def field_names(self) -> tuple[str, ...]:
        coords = [np.zeros(1)] * self.n
        return tuple(self.field_env(coords))

    def tangent(self, x) -> np.ndarray:
        """Chart derivative d nu, shape (..., N, n)."""
        x = np.asarray(x, dtype=float)
        coords = tl.Taylor.variables(x, 1)
        return self.point(coords).grad()

    def check_poles(self, x) -> None:
        x = np.asarray(x, dtype=float)
        for block_start, m in ((0, self.signature.p), (self.signature.p, self.signature.q)):
            for k in range(1, m):
                if np.any(np.abs(np.cos(x[..., block_start + k])) < POLE_MARGIN):
                    raise DegenerateChartPoint(f"chart point {x.tolist()} is within the pole margin")


def make_chart(sig: Signature) -> ProductSphereChart:
    return ProductSphereChart(sig)


@dataclass(frozen=True)
class TangentFrame:
    vectors: np.ndarray  # (N, n), columns e_i
    signs: np.ndarray  # (n,)
    coeffs: np.ndarray  # (n, n): e = d nu @ coeffs


def orthonormal_frame(chart: ProductSphereChart, x, tol: float = 1e-12) -> TangentFrame:
    """Signed Gram-Schmidt of the chart basis, plus directions first."""
    chart.check_poles(x)
    dnu = chart.tangent(x)
    amb = chart.ambient
    try:
        e, signs = signed_gram_schmidt(dnu, amb, tol=tol)
    except ValueError as exc:
        raise DegenerateChartPoint(str(exc)) from None
    g = dnu.T @ (amb.eta[:, None] * dnu)
    coeffs = np.linalg.solve(g, dnu.T @ (amb.eta[:, None] * e))
    return TangentFrame(e, signs, coeffs)


def stack_partials(t: tl.Taylor) -> tl.Taylor:
    """All first partials of ``t`` on a new last axis (order drops by one)."""
    return tl.stack([t.diff(a) for a in range(t.nvars)], axis=-1)


def gradient_field(sigma, dnu, amb: AmbientSpace):
    """V = g^{ab} sigma_b d_a nu with g the signed induced metric of the chart.

    ``sigma`` is the stack of chart partials (..., n) and ``dnu`` is (..., N, n).
    On a product of spheres this equals (grad' sigma, -grad'' sigma).
    """
    eta = amb.eta
    g = tl.einsum("...ia,...ib->...ab", dnu * eta[:, None], dnu)
    coeff = tl.matmul(tl.inv(g), sigma[..., None])
    out = tl.matmul(dnu, coeff)
    return out[..., 0]


def _jet_taylor(j: Jet4, order: int, x) -> tl.Taylor:
    """Rebuild the Taylor polynomial of a scalar field from its chart partials."""
    n = j.grad.shape[-1]
    b = tl.basis(n, order)
    tensors = [j.value, j.grad, j.hess, j.third, j.fourth]
    coef = np.zeros((b.size,) + np.shape(j.value))
    for k, alpha in enumerate(b.monomials):
        deg = sum(alpha)
        idx = tuple(i for i, a in enumerate(alpha) for _ in range(a))
        coef[k] = tensors[deg][(...,) + idx] / b.factorial[k]
    return tl.Taylor(coef, n, order)


def intrinsic_gradient(j: Jet4, chart: ProductSphereChart, x) -> np.ndarray:
    """Gradient of sigma on S^p x S^q as an ambient vector."""
    if j.grad is None:
        raise ValueError("jet must hold first derivatives")
    return gradient_field(np.asarray(j.grad, dtype=float), chart.tangent(x), chart.ambient)


def covariant_hessian(j: Jet4, chart: ProductSphereChart, x, frame: TangentFrame) -> np.ndarray:
    """H_ij = <D_{e_i} grad sigma, e_j>, symmetrized."""
    if j.hess is None:
        raise ValueError("jet must hold second derivatives")
    x = np.asarray(x, dtype=float)
    sig = _jet_taylor(j, 2, x)
    nu = chart.point(tl.Taylor.variables(x, 2))
    V = gradient_field(stack_partials(sig), stack_partials(nu), chart.ambient)
    dV = V.grad()  # (N, n): column c is d_c V
    D = dV @ frame.coeffs  # column i is D_{e_i} V
    H = D.T @ (chart.ambient.eta[:, None] * frame.vectors)
    return 0.5 * (H + H.T)


def grid_points(domain, counts) -> np.ndarray:
    """Tensor grid over a chart domain, shape (prod(counts), n), last coordinate fastest.

    Periodic coordinates are sampled without the duplicate endpoint; bounded
    ones at cell centres so that every sample keeps a margin from the boundary.
    """
    axes = []
    for rng, m in zip(domain, counts):
        if rng.periodic:
            axes.append(rng.lo + (rng.hi - rng.lo) * np.arange(m) / m)
        else:
            axes.append(rng.lo + (rng.hi - rng.lo) * (np.arange(m) + 0.5) / m)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)
