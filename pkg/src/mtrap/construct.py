"""Representation formulas for marginally trapped codimension-two immersions.

Every constructor returns a :class:`CandidateImmersion` whose ``sample``
method evaluates the immersion as a Taylor expansion of any order at a batch
of chart points, together with the selected tau values, a provenance null
normal and a per-sample degeneracy mask.  Verification lives in
:mod:`mtrap.verify`; nothing here asserts the marginally trapped property.

Root branches: at each sample the real roots of the tau polynomial are sorted
(including those rejected as metric-degenerate) and ``branch`` indexes that
list.  A change in the number of real roots, or two roots colliding, raises
:class:`RootBranchLost`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from . import taylor as tl
from .errors import (
    IdenticallyZero,
    NoAdmissibleTau,
    NormalizationFailure,
    NotInNullHyperplane,
    RootBranchLost,
    UsageError,
)
from .jets import CoordRange, ProductSphereChart, gradient_field, grid_points, make_chart, stack_partials
from .pseudolin import AmbientSpace, Signature
from .scalarlang import FieldExpr, evaluate, parse
from .tausolve import (
    TauPolynomial,
    TauRoots,
    adjugate_trace_coeffs,
    lift_root,
    pencil_det_check,
    real_roots,
)

COLLISION_TOL = 1e-6
PROBE = 6


# candidates --------------------------------------------------------------------

@dataclass
class Sample:
    phi: tl.Taylor  # (..., N)
    tau: np.ndarray | None = None
    normal: np.ndarray | None = None  # provenance null normal, (..., N)
    degenerate: np.ndarray | None = None
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CandidateImmersion:
    target: AmbientSpace
    provenance: str
    n: int
    domain: tuple[CoordRange, ...]
    builder: Callable[[np.ndarray, int], Sample] = field(repr=False)
    branch: int = 0
    seed: object = None
    sigma: FieldExpr | None = None
    chart: ProductSphereChart | None = None

    @property
    def sphere_mode(self) -> bool:
        return self.target.is_sphere

    def sample(self, x, order: int = 0) -> Sample:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise UsageError(f"chart points must have {self.n} coordinates")
        batch = x.shape[:-1]
        flat = x.reshape(-1, self.n)
        s = self.builder(flat, order)
        N = self.target.dim
        phi = s.phi.reshape(batch + (N,))
        re = lambda a, tail=(): None if a is None else np.asarray(a).reshape(batch + tail)
        extras = {k: np.asarray(v).reshape(batch + np.asarray(v).shape[1:]) for k, v in s.extras.items()}
        deg = np.zeros(flat.shape[0], dtype=bool) if s.degenerate is None else s.degenerate
        return Sample(phi, re(s.tau), re(s.normal, (N,)), re(deg), extras)

    def evaluate(self, x) -> np.ndarray:
        return self.sample(x, 0).phi.value

    def taylor(self, x, order: int = 2) -> tl.Taylor:
        return self.sample(x, order).phi

    def tau(self, x) -> np.ndarray | None:
        return self.sample(x, 0).tau

    def normal(self, x) -> np.ndarray | None:
        return self.sample(x, 0).normal


def _probe(candidate: CandidateImmersion) -> CandidateImmersion:
    """Evaluate once on a coarse grid so that root and membership errors surface early."""
    candidate.sample(grid_points(candidate.domain, [PROBE] * candidate.n), 0)
    return candidate


def _as_taylor(value, like: tl.Taylor, shape) -> tl.Taylor:
    if isinstance(value, tl.Taylor):
        if value.shape != tuple(shape):
            value = value + np.zeros(shape)
        return value
    return like.like(np.broadcast_to(np.asarray(value, dtype=float), shape))


# root selection ------------------------------------------------------------------

def select_roots(coeffs: np.ndarray, det_checks, x: np.ndarray, branch: int, keep_degenerate: bool):
    """Per-sample root on the chosen branch, the slope dt/dtau there, and a degeneracy mask."""
    S = coeffs.shape[0]
    taus = np.full(S, np.nan)
    slopes = np.full(S, np.nan)
    degenerate = np.zeros(S, dtype=bool)
    counts = []
    for s in range(S):
        try:
            roots = real_roots(TauPolynomial(coeffs[s]), det_checks(s))
        except IdenticallyZero:
            raise IdenticallyZero(f"tau polynomial vanishes identically at chart point {x[s].tolist()}") from None
        real = roots.real
        counts.append(len(real))
        if not real:
            continue
        for a, b in zip(real, real[1:]):
            if abs(b - a) <= COLLISION_TOL * (1.0 + abs(a)):
                raise RootBranchLost(x[s].tolist(), f"tau roots collide at chart point {x[s].tolist()}")
        if branch >= len(real):
            if max(counts) == 0:
                continue
            raise RootBranchLost(x[s].tolist(), f"branch {branch} unavailable at chart point {x[s].tolist()} ({len(real)} real roots)")
        taus[s] = real[branch]
        slopes[s] = P.polyval(taus[s], P.polyder(coeffs[s]))
        degenerate[s] = taus[s] in roots.metric_degenerate
    if max(counts, default=0) == 0:
        raise NoAdmissibleTau("no real tau root at any sample")
    if min(counts) != max(counts):
        bad = next(i for i, c in enumerate(counts) if c != max(counts))
        raise RootBranchLost(x[bad].tolist(), f"number of real tau roots changes near chart point {x[bad].tolist()}")
    if not keep_degenerate and degenerate.all():
        raise NoAdmissibleTau("every tau root is metric-degenerate")
    return taus, slopes, degenerate


def _solve_pencil(M0, M1, W, x, branch, keep_degenerate):
    """Select the branch pointwise and lift it to a Taylor expansion."""
    v0, v1, vw = np.broadcast_arrays(*(tl.value(m) for m in (M0, M1, W)))
    coeffs = adjugate_trace_coeffs(v0, v1, vw)
    checks = lambda s: pencil_det_check(v0[s], v1[s])
    taus, slopes, degenerate = select_roots(coeffs, checks, x, branch, keep_degenerate)
    flat_slope = np.abs(slopes) < 1e-12
    degenerate |= flat_slope
    safe = np.where(flat_slope, 1.0, slopes)
    pencil = np.stack([v0, v1, vw], axis=-3)
    anchor = tl._anchor(M0, M1, W)
    if anchor is None:
        return taus, degenerate, taus, pencil
    lifted = lift_root(_lift_like(M0, anchor), _lift_like(M1, anchor), _lift_like(W, anchor), taus, safe)
    return taus, degenerate, lifted, pencil


def tau_roots_at(candidate: "CandidateImmersion", x) -> list[TauRoots]:
    """Accepted and rejected tau roots of the candidate's pencil at each chart point (empty for closed forms)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    pencil = candidate.sample(x, 0).extras.get("pencil")
    if pencil is None:
        return []
    out = []
    for M0, M1, W in pencil:
        tp = TauPolynomial(adjugate_trace_coeffs(M0, M1, W))
        out.append(real_roots(tp, pencil_det_check(M0, M1)))
    return out


def _lift_like(m, anchor):
    return m if isinstance(m, tl.Taylor) else anchor.like(np.broadcast_to(m, tl.value(anchor).shape[:-2] + np.shape(m)[-2:]))


# support function (flat target) ------------------------------------------------

def support_data(sigma: FieldExpr, chart: ProductSphereChart, x: np.ndarray, order: int) -> dict:
    """Chart point, field, gradient and the pencil matrix sigma*C + 2*Hess as Taylor objects.

    In the chart basis the tangential part of the differential of
    nu -> tau*nu + sigma*conj(nu) + 2*grad(sigma) is tau*Id + M0 with
    M0 = sigma*C + 2*Hess, C^a_b = g^{ac}<conj(d_b nu), d_c nu> and
    Hess^a_b = g^{ac}<d_b grad sigma, d_c nu>.
    """
    K = order + 2
    amb = chart.ambient
    eta = amb.eta
    coords = tl.Taylor.variables(x, K)
    nu = chart.point(coords)
    sig = _as_taylor(evaluate(sigma, chart.field_env(coords)), coords[0], x.shape[:-1])
    dnu = stack_partials(nu)
    g = tl.einsum("...ia,...ib->...ab", dnu * eta[:, None], dnu)
    ginv = tl.inv(g)
    V = gradient_field(stack_partials(sig), dnu, amb)
    dV = stack_partials(V)
    hess = tl.matmul(ginv.truncate(K - 2), tl.einsum("...ic,...ib->...cb", dnu * eta[:, None], dV))
    C = tl.matmul(ginv, tl.einsum("...ic,...ib->...cb", dnu, dnu))
    M0 = sig[..., None, None] * C + hess * 2.0
    return {"nu": nu, "sigma": sig, "grad": V, "M0": M0.truncate(order)}


def from_support_function(
    sigma: FieldExpr | str,
    sig: Signature,
    chart: ProductSphereChart | None = None,
    root_index: int = 0,
    keep_degenerate: bool = False,
) -> CandidateImmersion:
    """phi = tau*nu + sigma*conj(nu) + 2*grad(sigma) over S^p x S^q, tau a root of tr(adj(tau Id + M0))."""
    chart = chart or make_chart(sig)
    if sig.n < 2:
        raise NoAdmissibleTau("n = 1: the trace of a 1x1 inverse never vanishes")
    if isinstance(sigma, str):
        sigma = parse(sigma, chart.field_names())
    amb = chart.ambient
    n = sig.n
    eye = np.eye(n)

    def build(x, order):
        d = support_data(sigma, chart, x, order)
        M0 = d["M0"]
        taus, degenerate, tau, pencil = _solve_pencil(M0, eye, eye, x, root_index, keep_degenerate)
        nu, s, V = d["nu"], d["sigma"], d["grad"]
        phi = tau[..., None] * nu + s[..., None] * (nu * amb.eta) + V * 2.0
        return Sample(phi.truncate(order), taus, nu.value, degenerate, {"sigma": s.value, "pencil": pencil})

    cand = CandidateImmersion(amb, "support-function", n, chart.domain, build, root_index, sigma=sigma, chart=chart)
    return _probe(cand)


def corollary1_surface(sigma: FieldExpr | str, root: str = "plus") -> CandidateImmersion:
    """Closed form on S^1 x S^1 with tau = sigma_vv - sigma_uu, in complex coordinates

    z1 = (sigma - sigma_uu + sigma_vv + 2i sigma_u) e^{iu},
    z2 = (-sigma - sigma_uu + sigma_vv - 2i sigma_v) e^{iv}.
    """
    if root != "plus":
        raise UsageError("only the root with tau = sigma_vv - sigma_uu exists on (1,1)")
    sig = Signature(1, 1)
    chart = make_chart(sig)
    if isinstance(sigma, str):
        sigma = parse(sigma, chart.field_names())
    amb = chart.ambient

    def build(x, order):
        coords = tl.Taylor.variables(x, order + 2)
        s = _as_taylor(evaluate(sigma, chart.field_env(coords)), coords[0], x.shape[:-1])
        su, sv = s.diff(0), s.diff(1)
        suu, svv = su.diff(0), sv.diff(1)
        u, v = coords
        a = s - suu + svv
        b = -s - suu + svv
        cu, snu, cv, snv = tl.cos(u), tl.sin(u), tl.cos(v), tl.sin(v)
        comps = [
            a * cu - su * snu * 2.0,
            a * snu + su * cu * 2.0,
            b * cv + sv * snv * 2.0,
            b * snv - sv * cv * 2.0,
        ]
        phi = tl.stack([c.truncate(order) for c in comps], axis=-1)
        tau = (svv - suu).value
        nu = chart.point([u.value, v.value])
        return Sample(phi, tau, nu, None, {"sigma": s.value})

    return CandidateImmersion(amb, "corollary1", 2, chart.domain, build, 0, sigma=sigma, chart=chart)


# seed hypersurfaces --------------------------------------------------------------

def _cofactor_normal(cols):
    """Vector c with sum_i c_i w_i = 0 for every column w of the (..., N, N-1) matrix."""
    N = tl.value(cols).shape[-2]
    comps = []
    for i in range(N):
        keep = [r for r in range(N) if r != i]
        d = tl.det(cols[..., keep, :])
        comps.append(d if i % 2 == 0 else -d)
    return tl.stack(comps, axis=-1)


def _unit(vec, amb: AmbientSpace):
    nrm2 = (vec * amb.eta * vec).sum(-1)
    if np.any(tl.value(nrm2) <= 0):
        raise UsageError("seed normal is not spacelike")
    return vec / tl.sqrt(nrm2)[..., None]


@dataclass(frozen=True)
class SeedHypersurface:
    """A hypersurface with unit spacelike normal, given by Taylor-capable chart maps.

    ``target`` is "flat" (inside R^{n+1} with p+1 plus signs) or
    "product-sphere" (inside S^{p+1} x S^q in R^{n+3}).  ``gauss`` may be None,
    in which case the normal is computed from the immersion and multiplied by
    ``normal_sign``.  ``shift`` replaces the immersion by sigma + shift*nu.
    ``basis`` chooses the frame of nu^perp in which the tau pencil is written:
    "immersion" (d sigma) or "gauss" (d nu, for seeds parametrized by their
    Gauss map).
    """

    name: str
    signature: Signature
    target: str
    immersion: Callable = field(repr=False)
    gauss: Callable | None = field(default=None, repr=False)
    domain: tuple[CoordRange, ...] = ()
    basis: str = "immersion"
    shift: float = 0.0
    normal_sign: float = 1.0
    params: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.signature.n

    @property
    def ambient(self) -> AmbientSpace:
        p, q = self.signature.p, self.signature.q
        if self.target == "flat":
            return AmbientSpace(self.n + 1, p + 1, q, "flat")
        return AmbientSpace(self.n + 3, p + 2, q + 1, "flat")

    def data(self, coords):
        """(sigma, nu) at Taylor or array coordinates, shift applied."""
        sig = self.immersion(coords)
        nu = self.gauss(coords) if self.gauss is not None else self._normal(sig)
        if self.shift:
            sig = sig + nu * self.shift
        return sig, nu

    def _normal(self, sig):
        amb = self.ambient
        if not isinstance(sig, tl.Taylor):
            raise UsageError("computed normals need Taylor coordinates")
        cols = stack_partials(sig)
        if self.target != "flat":
            # also orthogonal to the two sphere factors' position vectors
            s = sig.truncate(cols.order)
            mask = np.zeros(amb.dim)
            mask[: self.signature.p + 2] = 1.0
            cols = tl.stack([cols[..., k] for k in range(self.n)] + [s * mask, s * (1.0 - mask)], axis=-1)
        c = _cofactor_normal(cols)
        return _unit(c * amb.eta, amb) * self.normal_sign

    def point(self, x) -> np.ndarray:
        coords = tl.Taylor.variables(np.asarray(x, dtype=float), 1)
        return tl.value(self.data(coords)[0])

    def gauss_value(self, x) -> np.ndarray:
        coords = tl.Taylor.variables(np.asarray(x, dtype=float), 1)
        return tl.value(self.data(coords)[1])

    def shape_operator(self, x) -> np.ndarray:
        """A = -g^{-1}<d sigma, d nu> in the chart basis, with the seed metric g."""
        coords = tl.Taylor.variables(np.asarray(x, dtype=float), 2)
        sig, nu = self.data(coords)
        ds, dn = stack_partials(sig).value, stack_partials(nu).value
        eta = self.ambient.eta
        g = np.einsum("...ia,i,...ib->...ab", ds, eta, ds)
        return -np.linalg.solve(g, np.einsum("...ia,i,...ib->...ab", ds, eta, dn))

    def metric(self, x) -> np.ndarray:
        coords = tl.Taylor.variables(np.asarray(x, dtype=float), 1)
        ds = stack_partials(self.data(coords)[0]).value
        return np.einsum("...ia,i,...ib->...ab", ds, self.ambient.eta, ds)

    def with_shift(self, t0: float) -> "SeedHypersurface":
        return SeedHypersurface(self.name, self.signature, self.target, self.immersion, self.gauss,
                                self.domain, self.basis, t0, self.normal_sign, self.params)


def _vec(items, like):
    from .jets import _lift

    return _lift(items, like)


def cylinder(r: float = 1.0, height: float = 1.0) -> SeedHypersurface:
    """Round cylinder of radius r in R^3 with inward normal, so A = diag(1/r, 0)."""
    def imm(c):
        th, z = c
        return _vec([tl.cos(th) * r, tl.sin(th) * r, z], th)

    def gauss(c):
        th, z = c
        return _vec([-tl.cos(th), -tl.sin(th), 0.0], th)

    dom = (CoordRange(0.0, 2 * math.pi, True), CoordRange(-height, height))
    return SeedHypersurface("cylinder", Signature(2, 0), "flat", imm, gauss, dom, params={"r": r})


def round_sphere(R: float = 1.0) -> SeedHypersurface:
    """Sphere of radius R with inward normal (A = Id/R): totally umbilic."""
    def imm(c):
        return _vec([x * R for x in _s2(c)], c[0])

    def gauss(c):
        return _vec([-x for x in _s2(c)], c[0])

    dom = (CoordRange(0.0, 2 * math.pi, True), CoordRange(-1.2, 1.2))
    return SeedHypersurface("round-sphere", Signature(2, 0), "flat", imm, gauss, dom, params={"R": R})


def _s2(c):
    lon, lat = c
    return [tl.cos(lat) * tl.cos(lon), tl.cos(lat) * tl.sin(lon), tl.sin(lat)]


def ellipsoid(a: float = 1.0, b: float = 1.3, c: float = 1.7) -> SeedHypersurface:
    """Ellipsoid with semi-axes (a, b, c) and inward normal."""
    def imm(co):
        x, y, z = _s2(co)
        return _vec([x * a, y * b, z * c], co[0])

    dom = (CoordRange(0.0, 2 * math.pi, True), CoordRange(-1.2, 1.2))
    # the cofactor normal of (d/dlon, d/dlat) points outward
    return SeedHypersurface("ellipsoid", Signature(2, 0), "flat", imm, None, dom, normal_sign=-1.0,
                            params={"a": a, "b": b, "c": c})


def graph(f: FieldExpr | str, sig: Signature = Signature(2, 0), extent: float = 1.0, normal_sign: float = 1.0) -> SeedHypersurface:
    """Graph (u_1..u_p, f, u_{p+1}..u_n) in R^{n+1} with p+1 plus signs."""
    names = tuple(f"u{i + 1}" for i in range(sig.n)) + tuple("uvw"[: sig.n])
    if isinstance(f, str):
        f = parse(f, names)
    p = sig.p

    def imm(c):
        env = {f"u{i + 1}": c[i] for i in range(sig.n)}
        env.update({a: c[i] for i, a in enumerate("uvw"[: sig.n])})
        h = _as_taylor(evaluate(f, env), c[0], tl.value(c[0]).shape) if isinstance(c[0], tl.Taylor) else evaluate(f, env)
        return _vec(list(c[:p]) + [h] + list(c[p:]), c[0])

    dom = tuple(CoordRange(-extent, extent) for _ in range(sig.n))
    return SeedHypersurface("graph", sig, "flat", imm, None, dom, normal_sign=normal_sign, params={"f": str(f)})


def latitude_product(theta: float) -> SeedHypersurface:
    """Latitude circle at angle theta times S^1 inside S^2 x S^1, with A = diag(tan theta, 0)."""
    ct, st = math.cos(theta), math.sin(theta)

    def imm(c):
        u, v = c
        return _vec([tl.cos(u) * ct, tl.sin(u) * ct, st, tl.cos(v), tl.sin(v)], u)

    def gauss(c):
        u, v = c
        return _vec([tl.cos(u) * -st, tl.sin(u) * -st, ct, 0.0, 0.0], u)

    dom = (CoordRange(0.0, 2 * math.pi, True), CoordRange(0.0, 2 * math.pi, True))
    return SeedHypersurface("latitude", Signature(1, 1), "product-sphere", imm, gauss, dom, params={"theta": theta})


def latitude_graph(theta: FieldExpr | str) -> SeedHypersurface:
    """Hypersurface ((cos t cos u, cos t sin u, sin t), (cos v, sin v)) of S^2 x S^1 with t = theta(u, v)."""
    if isinstance(theta, str):
        theta = parse(theta, ("u", "v"))

    def imm(c):
        u, v = c
        t = _as_taylor(evaluate(theta, {"u": u, "v": v}), u, tl.value(u).shape) if isinstance(u, tl.Taylor) else evaluate(theta, {"u": u, "v": v})
        return _vec([tl.cos(t) * tl.cos(u), tl.cos(t) * tl.sin(u), tl.sin(t), tl.cos(v), tl.sin(v)], u)

    dom = (CoordRange(0.0, 2 * math.pi, True), CoordRange(0.0, 2 * math.pi, True))
    seed = SeedHypersurface("latitude-graph", Signature(1, 1), "product-sphere", imm, None, dom,
                            params={"theta": str(theta)})
    # orient like the constant-latitude normal: positive third component
    nu = seed.gauss_value(np.array([0.1, 0.1]))
    if nu[2] < 0:
        seed = SeedHypersurface(seed.name, seed.signature, seed.target, imm, None, dom, normal_sign=-1.0,
                                params=seed.params)
    return seed


SEED_PRESETS: dict[str, Callable[..., SeedHypersurface]] = {
    "cylinder": cylinder,
    "ellipsoid": ellipsoid,
    "graph": graph,
    "latitude": latitude_product,
    "latitude-graph": latitude_graph,
    "round-sphere": round_sphere,
}


# hypersurface seeds -> candidates -------------------------------------------------

def _coords_in(Q, W, eta):
    """Coordinates X with W = Q X for columns of W in span(Q) (signed least squares)."""
    G = tl.einsum("...ia,...ib->...ab", Q * eta[:, None], Q)
    return tl.matmul(tl.inv(G), tl.einsum("...ia,...ib->...ab", Q * eta[:, None], W))


def _pencil_blocks(seed: SeedHypersurface, x: np.ndarray, order: int):
    coords = tl.Taylor.variables(x, order + 2)
    sig, nu = seed.data(coords)
    ds, dn = stack_partials(sig), stack_partials(nu)
    eta = seed.ambient.eta
    n = seed.n
    eye = ds.like(np.broadcast_to(np.eye(n), x.shape[:-1] + (n, n)))
    if seed.basis == "immersion":
        S, Nm = eye, _coords_in(ds, dn, eta)
    elif seed.basis == "gauss":
        S, Nm = _coords_in(dn, ds, eta), eye
    else:
        raise UsageError(f"unknown pencil basis {seed.basis!r}")
    return sig, nu, S.truncate(order), Nm.truncate(order)


def from_hypersurface_flat(
    seed: SeedHypersurface,
    root_index: int = 0,
    polynomial: str = "corrected",
    keep_degenerate: bool = False,
) -> CandidateImmersion:
    """phi = (sigma + tau*nu, tau) in R^{n+2} with the last coordinate timelike.

    ``polynomial="corrected"`` takes tau among the roots of
    tr((Id - tau A)^{-1} A), the condition under which phi is marginally
    trapped; ``"literal"`` uses tr((Id - tau A)^{-1}) instead.  Both are
    written as adjugate traces of the pencil S + tau*Nm, where S and Nm are
    the coordinates of d sigma and d nu in a basis of nu^perp.
    """
    if seed.target != "flat":
        raise UsageError("from_hypersurface_flat needs a seed in flat space")
    if polynomial not in ("corrected", "literal"):
        raise UsageError(f"unknown polynomial form {polynomial!r}")
    target = seed.signature.flat()

    def build(x, order):
        sig, nu, S, Nm = _pencil_blocks(seed, x, order)
        W = Nm if polynomial == "corrected" else S
        taus, degenerate, tau, pencil = _solve_pencil(S, Nm, W, x, root_index, keep_degenerate)
        head = sig.truncate(order) + tau[..., None] * nu.truncate(order)
        phi = tl.stack([head[..., k] for k in range(seed.n + 1)] + [tau], axis=-1)
        nu_v = nu.value
        normal = np.concatenate([nu_v, np.ones(nu_v.shape[:-1] + (1,))], axis=-1)
        return Sample(phi, taus, normal, degenerate, {"seed_sigma": sig.value, "seed_nu": nu_v, "pencil": pencil})

    cand = CandidateImmersion(target, f"hypersurface-flat/{polynomial}", seed.n, seed.domain, build, root_index, seed=seed)
    return _probe(cand)


def from_gauss_sphere(seed: SeedHypersurface, root_index: int = 0, keep_degenerate: bool = False) -> CandidateImmersion:
    """phi = nu + tau*sigma in S^{n+2}, tau a root of tr((tau Id - A)^{-1})."""
    if seed.target != "product-sphere":
        raise UsageError("from_gauss_sphere needs a seed in S^{p+1} x S^q")
    target = seed.signature.sphere()

    def build(x, order):
        sig, nu, S, Nm = _pencil_blocks(seed, x, order)
        taus, degenerate, tau, pencil = _solve_pencil(Nm, S, S, x, root_index, keep_degenerate)
        phi = nu.truncate(order) + tau[..., None] * sig.truncate(order)
        return Sample(phi, taus, sig.value, degenerate, {"seed_sigma": sig.value, "seed_nu": nu.value, "pencil": pencil})

    cand = CandidateImmersion(target, "gauss-sphere", seed.n, seed.domain, build, root_index, seed=seed)
    return _probe(cand)


def null_hyperplane_graph(
    nu0,
    components: Sequence[FieldExpr | str] | Callable,
    target: AmbientSpace,
    domain: Sequence[CoordRange] | None = None,
    n: int = 2,
    tol: float = 1e-10,
) -> CandidateImmersion:
    """Candidate phi with <phi, nu0> = 0 for a fixed null vector nu0 (and <phi, phi> = 1 on the sphere)."""
    nu0 = np.asarray(nu0, dtype=float)
    if nu0.shape != (target.dim,):
        raise UsageError("nu0 must live in the target ambient space")
    if abs(np.sum(nu0 * target.eta * nu0)) > tol * max(1.0, np.sum(nu0**2)) or not np.any(nu0):
        raise UsageError("nu0 must be a nonzero null vector")
    names = tuple(f"u{i + 1}" for i in range(n)) + tuple("uvw"[:n])
    if callable(components):
        fmap = components
    else:
        exprs = [parse(c, names) if isinstance(c, str) else c for c in components]
        if len(exprs) != target.dim:
            raise UsageError(f"expected {target.dim} component expressions")

        def fmap(c):
            env = {f"u{i + 1}": c[i] for i in range(n)}
            env.update({a: c[i] for i, a in enumerate("uvw"[:n])})
            return _vec([evaluate(e, env) for e in exprs], c[0])

    domain = tuple(domain) if domain is not None else tuple(CoordRange(-1.0, 1.0) for _ in range(n))

    def build(x, order):
        coords = tl.Taylor.variables(x, order)
        phi = fmap(coords)
        if not isinstance(phi, tl.Taylor):
            phi = coords[0].like(np.broadcast_to(phi, x.shape[:-1] + (target.dim,)))
        val = phi.value
        scale = np.maximum(1.0, np.sqrt(np.sum(val**2, axis=-1)))
        pair = np.abs(val @ (target.eta * nu0)) / scale
        if np.any(pair > tol):
            s = int(np.argmax(pair))
            raise NotInNullHyperplane(f"<phi, nu0> = {pair[s]:.3e} at chart point {x[s].tolist()}")
        if target.is_sphere:
            unit = np.abs(np.sum(val * target.eta * val, axis=-1) - 1.0)
            if np.any(unit > tol):
                s = int(np.argmax(unit))
                raise NotInNullHyperplane(f"<phi, phi> - 1 = {unit[s]:.3e} at chart point {x[s].tolist()}")
        normal = np.broadcast_to(nu0, val.shape).copy()
        return Sample(phi, None, normal, None)

    cand = CandidateImmersion(target, "null-hyperplane", n, domain, build)
    return _probe(cand)


# decompositions ---------------------------------------------------------------------

@dataclass
class FlatDecomposition:
    sigma: np.ndarray
    tau: np.ndarray
    nu: np.ndarray
    legendrian: np.ndarray | None = None  # max_a |<d_a sigma, nu>|

    def recompose(self) -> np.ndarray:
        return np.concatenate([self.sigma + self.tau[..., None] * self.nu, self.tau[..., None]], axis=-1)


def decompose_flat(phi, nu_tilde, amb: AmbientSpace, dphi=None, dnu_tilde=None, tol: float = 1e-9) -> FlatDecomposition:
    """Split phi = (psi, tau) with null normal (nu, 1) into sigma = psi - tau*nu.

    With chart derivatives of phi and of the normal, the Legendrian residual
    <d sigma, nu> is reported as well.
    """
    phi = np.asarray(phi, dtype=float)
    nt = np.asarray(nu_tilde, dtype=float)
    last = nt[..., -1]
    if np.any(np.abs(last) <= tol):
        raise NormalizationFailure("null normal has vanishing last component")
    nu = nt[..., :-1] / last[..., None]
    tau = phi[..., -1]
    sigma = phi[..., :-1] - tau[..., None] * nu
    leg = None
    if dphi is not None and dnu_tilde is not None:
        dphi = np.asarray(dphi, dtype=float)
        dnt = np.asarray(dnu_tilde, dtype=float)
        # d(nu) from the quotient rule, d(tau) from the last row
        dnu = dnt[..., :-1, :] / last[..., None, None] - nt[..., :-1, None] * dnt[..., -1:, :] / last[..., None, None] ** 2
        dtau = dphi[..., -1, :]
        dsigma = dphi[..., :-1, :] - dtau[..., None, :] * nu[..., :, None] - tau[..., None, None] * dnu
        seed_eta = amb.eta[:-1]
        leg = np.abs(np.einsum("...ia,...i->...a", dsigma, nu * seed_eta)).max(axis=-1)
    return FlatDecomposition(sigma, tau, nu, leg)


@dataclass
class SphereDecomposition:
    nu: np.ndarray
    tau: np.ndarray
    orthogonality: np.ndarray  # |<nu, sigma>|
    gauss: np.ndarray | None = None  # max_a |<d nu, sigma>|
    legendrian: np.ndarray | None = None  # max_a |<d sigma, nu>|


def decompose_sphere(phi, sigma, amb: AmbientSpace, plus: int, dphi=None, dsigma=None) -> SphereDecomposition:
    """tau = <phi', sigma'> over the first ``plus`` coordinates, nu = phi - tau*sigma."""
    phi = np.asarray(phi, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    eta = amb.eta
    tau = np.sum(phi[..., :plus] * sigma[..., :plus], axis=-1)
    nu = phi - tau[..., None] * sigma
    orth = np.abs(np.sum(nu * eta * sigma, axis=-1))
    gauss = leg = None
    if dphi is not None and dsigma is not None:
        dphi = np.asarray(dphi, dtype=float)
        dsigma = np.asarray(dsigma, dtype=float)
        dtau = np.einsum("...ia,...i->...a", dphi[..., :plus, :], sigma[..., :plus]) + np.einsum(
            "...i,...ia->...a", phi[..., :plus], dsigma[..., :plus, :])
        dnu = dphi - dtau[..., None, :] * sigma[..., :, None] - tau[..., None, None] * dsigma
        gauss = np.abs(np.einsum("...ia,...i->...a", dnu, sigma * eta)).max(axis=-1)
        leg = np.abs(np.einsum("...ia,...i->...a", dsigma, nu * eta)).max(axis=-1)
    return SphereDecomposition(nu, tau, orth, gauss, leg)


# Lorentzian correspondence ------------------------------------------------------------

@dataclass(frozen=True)
class Correspondence:
    """Hypersurface data sigma2 = 2 sigma3 nu2 + 2 grad sigma3 with Gauss map nu2 on S^n."""

    seed: SeedHypersurface
    sigma3: FieldExpr
    chart: ProductSphereChart

    def sigma3_values(self, x) -> np.ndarray:
        coords = tl.Taylor.variables(np.asarray(x, dtype=float), 0)
        out = evaluate(self.sigma3, self.chart.field_env(coords))
        return np.broadcast_to(tl.value(out), np.shape(x)[:-1]).copy()

    def tau_offset(self, x) -> np.ndarray:
        """tau2 = tau3 - sigma3, so the offset subtracted from tau3 is sigma3."""
        return self.sigma3_values(x)

    def support_residual(self, x) -> np.ndarray:
        """|<sigma2, nu2> - 2 sigma3| per sample."""
        s2 = self.seed.point(x)
        n2 = self.seed.gauss_value(x)
        return np.abs(np.sum(s2 * n2, axis=-1) - 2.0 * self.sigma3_values(x))

    def non_immersed(self, x, tol: float = 1e-8) -> list:
        """Chart points where sigma2 drops rank."""
        x = np.asarray(x, dtype=float).reshape(-1, self.seed.n)
        # the seed immersion contains a gradient, which costs one order
        coords = tl.Taylor.variables(x, 2)
        ds = stack_partials(self.seed.data(coords)[0]).value
        sv = np.linalg.svd(ds, compute_uv=False)
        bad = sv[:, -1] <= tol * np.maximum(1.0, sv[:, 0])
        return [x[i].tolist() for i in np.flatnonzero(bad)]


def lorentzian_correspondence(sigma3: FieldExpr | str, n: int = 2) -> Correspondence:
    """Theorem-zero seed on S^n built from a support function on S^n x S^0."""
    sig = Signature(n, 0)
    chart = make_chart(sig)
    if isinstance(sigma3, str):
        sigma3 = parse(sigma3, chart.field_names())
    amb = chart.ambient

    def imm(coords):
        nu = chart.point(coords)
        s = evaluate(sigma3, chart.field_env(coords))
        s = _as_taylor(s, coords[0], tl.value(coords[0]).shape) if isinstance(coords[0], tl.Taylor) else s
        V = gradient_field(stack_partials(s), stack_partials(nu), amb)
        nu2 = nu[..., : n + 1]
        return (nu2.truncate(V.order) * s.truncate(V.order)[..., None] + V[..., : n + 1]) * 2.0

    def gauss(coords):
        return chart.point(coords)[..., : n + 1]

    seed = SeedHypersurface("correspondence", sig, "flat", imm, gauss, chart.domain, basis="gauss",
                            params={"sigma3": str(sigma3)})
    return Correspondence(seed, sigma3, chart)
