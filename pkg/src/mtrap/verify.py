"""Numerical extrinsic geometry of candidate immersions.

Per sample: jets of the immersion (exact Taylor or finite differences), the
induced metric, a null normal frame, the second fundamental form, the mean
curvature vector and a scale-free marginally trapped residual.  On top of
that sit the structural checks (null second fundamental form, flat normal
bundle, seed-based closed forms, the (1,1) surface identities) and a grid
sweep that collects everything into a :class:`VerificationReport`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import taylor as tl
from .construct import CandidateImmersion
from .errors import BoundaryMargin, DegenerateSample, NotLorentzianPlane, NothingVerifiable
from .jets import grid_points
from .pseudolin import AmbientSpace, NullNormalFrame, gram_signature, null_frame_from_plane, signed_complement
from .scalarlang import taylor_eval

MT_EPS = 1e-30


# jets ---------------------------------------------------------------------------

@dataclass
class ImmersionJet:
    point: np.ndarray  # (..., N)
    first: np.ndarray  # (..., N, n)
    second: np.ndarray  # (..., N, n, n)

    def at(self, i) -> "ImmersionJet":
        return ImmersionJet(self.point[i], self.first[i], self.second[i])


def _fd_offsets(n: int, h: float) -> tuple[np.ndarray, dict]:
    """Stencil offsets and their positions for 4th-order first/second and mixed partials."""
    offs = [np.zeros(n)]
    where = {}
    eye = np.eye(n)
    for a in range(n):
        for k in (-2, -1, 1, 2):
            where[(a, k)] = len(offs)
            offs.append(k * h * eye[a])
    for a in range(n):
        for b in range(a + 1, n):
            for k in (1, 2):
                for sa in (-1, 1):
                    for sb in (-1, 1):
                        where[(a, b, k, sa, sb)] = len(offs)
                        offs.append(k * h * (sa * eye[a] + sb * eye[b]))
    return np.array(offs), where


def fd_jet(fn, x, h: float = 1e-3) -> ImmersionJet:
    """Central differences of ``fn`` (arrays (..., n) -> (..., N)) at the points ``x`` (S, n)."""
    x = np.asarray(x, dtype=float)
    S, n = x.shape
    offs, where = _fd_offsets(n, h)
    vals = np.asarray(fn((x[:, None, :] + offs[None]).reshape(-1, n))).reshape(S, len(offs), -1)
    f0 = vals[:, 0]
    N = f0.shape[-1]
    first = np.empty((S, N, n))
    second = np.empty((S, N, n, n))
    for a in range(n):
        m2, m1, p1, p2 = (vals[:, where[(a, k)]] for k in (-2, -1, 1, 2))
        first[:, :, a] = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h)
        second[:, :, a, a] = (-p2 + 16 * p1 - 30 * f0 + 16 * m1 - m2) / (12 * h * h)
    for a in range(n):
        for b in range(a + 1, n):
            mixed = []
            for k in (1, 2):
                pp, pm, mp, mm = (vals[:, where[(a, b, k, sa, sb)]] for sa, sb in ((1, 1), (1, -1), (-1, 1), (-1, -1)))
                mixed.append((pp - pm - mp + mm) / (4 * (k * h) ** 2))
            d = (4 * mixed[0] - mixed[1]) / 3  # Richardson: second order -> fourth order
            second[:, :, a, b] = d
            second[:, :, b, a] = d
    return ImmersionJet(f0, first, second)


def check_margin(candidate: CandidateImmersion, x, h: float) -> None:
    x = np.asarray(x, dtype=float)
    for a, rng in enumerate(candidate.domain):
        if not np.all(rng.contains(x[..., a], 2 * h)):
            raise BoundaryMargin(f"chart coordinate {a} closer than {2 * h:g} to the domain boundary")


def immersion_jet(candidate: CandidateImmersion, x, mode: str = "analytic", step: float = 1e-3) -> ImmersionJet:
    """Point, first and second chart derivatives of the candidate at ``x`` ((n,) or (S, n))."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    xs = x.reshape(-1, candidate.n)
    if mode == "analytic":
        T = candidate.taylor(xs, 2)
        jet = ImmersionJet(T.value, T.grad(), T.hessian())
    elif mode == "fd":
        check_margin(candidate, xs, step)
        jet = fd_jet(candidate.evaluate, xs, step)
    elif mode == "fd-richardson":
        check_margin(candidate, xs, step)
        j1 = fd_jet(candidate.evaluate, xs, step)
        j2 = fd_jet(candidate.evaluate, xs, step / 2)
        jet = ImmersionJet(j1.point, (16 * j2.first - j1.first) / 15, (16 * j2.second - j1.second) / 15)
    else:
        raise ValueError(f"unknown jet mode {mode!r}")
    return jet.at(0) if single else jet


# forms and frames ---------------------------------------------------------------

@dataclass
class FirstForm:
    metric: np.ndarray
    plus: int
    minus: int
    zero: int

    @property
    def degenerate(self) -> bool:
        return self.zero > 0


def first_fundamental_form(jet: ImmersionJet, amb: AmbientSpace, tol: float = 1e-9, floor: float = 1e-20) -> FirstForm:
    """Induced metric and signature; a differential below ``floor`` (relative to |phi|^2) counts as zero."""
    d = jet.first
    g = d.T @ (amb.eta[:, None] * d)
    scale = float(np.max(np.sum(d * d, axis=0))) if d.size else 0.0
    if scale <= floor * max(1.0, float(np.sum(jet.point**2))):
        return FirstForm(g, 0, 0, g.shape[0])
    plus, minus, zero = gram_signature(g, tol * scale)
    return FirstForm(g, plus, minus, zero)


def normal_frame(
    jet: ImmersionJet,
    amb: AmbientSpace,
    sphere_mode: bool = False,
    provenance=None,
    tol: float = 1e-10,
) -> NullNormalFrame:
    """Null frame of the normal plane, aligned with a provenance null normal when given."""
    cols = jet.first
    if sphere_mode:
        cols = np.concatenate([cols, jet.point[:, None]], axis=1)
    sv = np.linalg.svd(cols, compute_uv=False)
    if sv.size == 0 or sv[-1] <= tol * max(sv[0], 1e-300):
        raise DegenerateSample("immersion is not of full rank at this sample")
    comp = signed_complement(cols, amb)
    if comp.shape[1] != 2:
        raise DegenerateSample("normal space is not two-dimensional")
    frame = null_frame_from_plane(comp[:, 0], comp[:, 1], amb)
    if provenance is None:
        return frame
    prov = np.asarray(provenance, dtype=float)
    n1, n2 = frame.nu, frame.xi
    # parallel null vectors pair to zero; pick the frame vector along the provenance line
    if abs(np.sum(n2 * amb.eta * prov)) < abs(np.sum(n1 * amb.eta * prov)):
        n1, n2 = n2, n1
    lam = float(n1 @ prov) / float(n1 @ n1)
    if lam == 0.0:
        return frame
    nu = lam * n1
    xi = 2.0 * n2 / np.sum(nu * amb.eta * n2)
    return NullNormalFrame(nu, xi)


@dataclass
class ShapeData:
    metric: np.ndarray
    frame: np.ndarray  # (n, n): columns form a metric-orthonormal basis in chart coordinates
    frame_signs: np.ndarray
    normal_frame: NullNormalFrame
    h: np.ndarray  # (N, n, n) normal-valued second fundamental form
    h_nu: np.ndarray
    h_xi: np.ndarray
    H: np.ndarray
    H_direct: np.ndarray
    mean_norm: float  # <H, H>
    residual_mt: float
    amb: AmbientSpace

    @property
    def decomposition_residual(self) -> float:
        return float(np.max(np.abs(self.H - self.H_direct)))

    @property
    def n(self) -> int:
        return self.metric.shape[0]


def _orthonormal_basis(g: np.ndarray):
    w, V = np.linalg.eigh(g)
    order = np.argsort(-np.sign(w), kind="stable")
    w, V = w[order], V[:, order]
    return V / np.sqrt(np.abs(w)), np.sign(w)


def shape_data(jet: ImmersionJet, frame: NullNormalFrame, metric=None, amb: AmbientSpace | None = None,
               sphere_mode: bool = False) -> ShapeData:
    """Second fundamental form, mean curvature and the marginally trapped residual."""
    if amb is None:
        raise ValueError("ambient space required")
    eta = amb.eta
    d1 = jet.first
    g = d1.T @ (eta[:, None] * d1) if metric is None else np.asarray(metric)
    n = g.shape[0]
    w = np.linalg.eigvalsh(g)
    if np.min(np.abs(w)) <= 1e-12 * max(np.max(np.abs(w)), 1e-300):
        raise DegenerateSample("induced metric is singular")
    ginv = np.linalg.inv(g)
    d2 = jet.second
    if sphere_mode:
        d2 = d2 - np.einsum("iab,i->ab", d2, eta * jet.point)[None] * jet.point[:, None, None]
    nu, xi = frame.nu, frame.xi
    h_nu = np.einsum("iab,i->ab", d2, eta * nu)
    h_xi = np.einsum("iab,i->ab", d2, eta * xi)
    h = 0.5 * (h_xi[None] * nu[:, None, None] + h_nu[None] * xi[:, None, None])
    tr_nu = float(np.sum(ginv * h_nu))
    tr_xi = float(np.sum(ginv * h_xi))
    H = (tr_xi * nu + tr_nu * xi) / (2 * n)
    # independent path: subtract the tangential (and radial) part, then trace
    tang = d1 @ ginv @ (d1.T @ (eta[:, None] * d2.reshape(d2.shape[0], -1)))
    normal_part = d2.reshape(d2.shape[0], -1) - tang
    if sphere_mode:
        normal_part = normal_part - jet.point[:, None] * (jet.point * eta) @ normal_part
    H_direct = np.einsum("iab,ab->i", normal_part.reshape(d2.shape), ginv) / n
    E, signs = _orthonormal_basis(g)
    hn = E.T @ h_nu @ E
    hx = E.T @ h_xi @ E
    mean_norm = tr_xi * tr_nu / n**2
    residual = abs(mean_norm) / (np.linalg.norm(hn) * np.linalg.norm(hx) + MT_EPS)
    return ShapeData(g, E, signs, frame, h, h_nu, h_xi, H, H_direct, mean_norm, float(residual), amb)


def analyse(jet: ImmersionJet, amb: AmbientSpace, sphere_mode: bool = False, provenance=None) -> ShapeData:
    """first form -> normal frame -> shape data, raising DegenerateSample on any degeneracy."""
    form = first_fundamental_form(jet, amb)
    if form.degenerate:
        raise DegenerateSample("induced metric is degenerate")
    try:
        frame = normal_frame(jet, amb, sphere_mode, provenance)
    except NotLorentzianPlane as exc:
        raise DegenerateSample(f"normal plane: {exc}") from None
    return shape_data(jet, frame, form.metric, amb, sphere_mode)


# structural checks -----------------------------------------------------------------

@dataclass
class NullSffResult:
    max_pairing: float
    collinear_with: str | None  # "nu", "xi" or None
    collinear_residual: float


def null_sff_check(shape: ShapeData, tol: float = 1e-8) -> NullSffResult:
    """max |<h(e_a, e_b), h(e_c, e_d)>| over a metric-orthonormal frame."""
    E = shape.frame
    hv = np.einsum("iab,ac,bd->icd", shape.h, E, E)
    n = shape.n
    flat = hv.reshape(hv.shape[0], n * n)
    pair = flat.T @ (shape.amb.eta[:, None] * flat)
    hn = np.max(np.abs(E.T @ shape.h_nu @ E))
    hx = np.max(np.abs(E.T @ shape.h_xi @ E))
    # h is collinear with nu exactly when its nu-pairing vanishes, and likewise for xi
    which = None
    if min(hn, hx) <= tol:
        which = "nu" if hn <= hx else "xi"
    return NullSffResult(float(np.max(np.abs(pair))), which, float(min(hn, hx)))


def ricci_flat_normal_check(shape: ShapeData) -> float:
    """max |[A_nu, A_xi]| with A = g^{-1} h."""
    ginv = np.linalg.inv(shape.metric)
    A_nu = ginv @ shape.h_nu
    A_xi = ginv @ shape.h_xi
    return float(np.max(np.abs(A_nu @ A_xi - A_xi @ A_nu)))


def mean_gauss_map(shape: ShapeData, tol: float = 1e-9) -> np.ndarray:
    """Null normal collinear with H (or with h when H vanishes), scaled so its plus block has unit length."""
    amb = shape.amb
    nu, xi = shape.normal_frame.nu, shape.normal_frame.xi
    H = shape.H
    scale = max(np.linalg.norm(shape.h), 1e-300)
    if np.linalg.norm(H) > tol * scale:
        # H = (tr h_xi nu + tr h_nu xi)/2n is null, so one coefficient vanishes
        v = nu if abs(np.sum(H * amb.eta * nu)) <= abs(np.sum(H * amb.eta * xi)) else xi
    else:
        res = null_sff_check(shape)
        v = xi if res.collinear_with == "xi" else nu
    v = v / np.linalg.norm(v[: amb.plus])
    for c in v:
        if abs(c) > 1e-12:
            return v if c > 0 else -v
    return v


def mean_gauss_rank(candidate: CandidateImmersion, x, h: float = 1e-4, tol: float = 1e-6) -> tuple[int, np.ndarray]:
    """Numerical rank of the differential of the mean Gauss map at ``x``."""
    x = np.asarray(x, dtype=float)
    n = candidate.n
    eye = np.eye(n)
    pts = [x + k * h * eye[a] for a in range(n) for k in (-2, -1, 1, 2)]
    jets = immersion_jet(candidate, np.array(pts), "analytic")
    normals = []
    for i in range(len(pts)):
        sd = analyse(jets.at(i), candidate.target, candidate.sphere_mode)
        normals.append(mean_gauss_map(sd))
    normals = np.array(normals).reshape(n, 4, -1)
    D = np.stack([(-normals[a, 3] + 8 * normals[a, 2] - 8 * normals[a, 1] + normals[a, 0]) / (12 * h) for a in range(n)], axis=-1)
    sv = np.linalg.svd(D, compute_uv=False)
    return int(np.sum(sv > tol)), sv


# seed closed forms --------------------------------------------------------------------

def _seed_forms(candidate: CandidateImmersion, x):
    seed = candidate.seed
    g = seed.metric(x)
    A = seed.shape_operator(x)
    gA = g @ A
    gA = 0.5 * (gA + gA.T)
    AgA = A.T @ g @ A
    tau = float(candidate.tau(x))
    return seed, g, gA, AgA, tau


def lemma_geozero_oracle(candidate: CandidateImmersion, x, jet: ImmersionJet) -> dict:
    """Induced metric and nu-tilde second fundamental form against their seed closed forms."""
    seed, g, gA, AgA, tau = _seed_forms(candidate, x)
    eta = candidate.target.eta
    g_cf = g - 2 * tau * gA + tau**2 * AgA
    h_cf = gA - tau * AgA
    nu = seed.gauss_value(x)
    nt = np.concatenate([nu, [1.0]])
    g_num = jet.first.T @ (eta[:, None] * jet.first)
    h_num = np.einsum("iab,i->ab", jet.second, eta * nt)
    return {"metric": float(np.max(np.abs(g_num - g_cf))), "sff": float(np.max(np.abs(h_num - h_cf)))}


def lemma_geo_oracle(candidate: CandidateImmersion, x, jet: ImmersionJet) -> dict:
    """Sphere case: metric tau^2 g - 2 tau g(A.,.) + g(A.,A.) and h_sigma = g(A.,.) - tau g."""
    seed, g, gA, AgA, tau = _seed_forms(candidate, x)
    eta = candidate.target.eta
    g_cf = tau**2 * g - 2 * tau * gA + AgA
    h_cf = gA - tau * g
    sig = seed.point(x)
    g_num = jet.first.T @ (eta[:, None] * jet.first)
    h_num = np.einsum("iab,i->ab", jet.second, eta * sig)
    return {"metric": float(np.max(np.abs(g_num - g_cf))), "sff": float(np.max(np.abs(h_num - h_cf)))}


# (1,1) surface identities ------------------------------------------------------------------

def _is_torus(candidate: CandidateImmersion) -> bool:
    chart = candidate.chart
    return chart is not None and (chart.signature.p, chart.signature.q) == (1, 1)


def _J(x):
    return np.stack([-x[..., 1], x[..., 0], -x[..., 3], x[..., 2]], axis=-1)


def _K(x):
    return np.stack([x[..., 2], x[..., 3], x[..., 0], x[..., 1]], axis=-1)


def sigma_partials(candidate: CandidateImmersion, x) -> dict:
    """Named chart partials of the support function up to order four."""
    T = taylor_eval(candidate.sigma, np.asarray(x, dtype=float), 4, candidate.chart.field_env)
    names = {}
    for alpha in tl.basis(2, 4).monomials:
        key = "s" + "u" * alpha[0] + "v" * alpha[1]
        names[key] = T.partial(alpha)
    return names


def surface_checks(candidate: CandidateImmersion, x, jet: ImmersionJet | None = None, null_tol: float = 1e-9) -> dict:
    """Closed forms of E, F, G, omega and omega' on S^1 x S^1 at tau = sigma_vv - sigma_uu."""
    if candidate.sigma is None or not _is_torus(candidate):
        raise ValueError("surface checks need a (1,1) support-function candidate")
    x = np.asarray(x, dtype=float)
    if jet is None:
        jet = immersion_jet(candidate, x, "analytic")
    d = sigma_partials(candidate, x)
    s, su, sv = d["s"], d["su"], d["sv"]
    suu, suv, svv = d["suu"], d["suv"], d["svv"]
    suuu, suuv, suvv, svvv = d["suuu"], d["suuv"], d["suvv"], d["svvv"]
    tau = svv - suu
    S = s + suu + svv
    eta = candidate.target.eta
    pu, pv = jet.first[:, 0], jet.first[:, 1]
    E = float(np.sum(pu * eta * pu))
    F = float(np.sum(pu * eta * pv))
    G = float(np.sum(pv * eta * pv))
    E_cf = (2 * suu + tau + s) ** 2 - 4 * suv**2
    F_cf = 4 * suv * (suu - svv + tau)
    F_literal = 4 * suv * (suu - svv + 2 * tau)
    G_cf = -((2 * svv - tau + s) ** 2) + 4 * suv**2
    # flatness: the literal box(E) and the curvature form box(log|E|)
    Ef = S**2 - 4 * suv**2
    Eu = 2 * S * (su + suuu + suvv) - 8 * suv * d["suuv"]
    Ev = 2 * S * (sv + suuv + svvv) - 8 * suv * d["suvv"]
    Suu = suu + d["suuuu"] + d["suuvv"]
    Svv = svv + d["suuvv"] + d["svvvv"]
    Su, Sv = su + suuu + suvv, sv + suuv + svvv
    Euu = 2 * Su**2 + 2 * S * Suu - 8 * suuv**2 - 8 * suv * d["suuuv"]
    Evv = 2 * Sv**2 + 2 * S * Svv - 8 * suvv**2 - 8 * suv * d["suvvv"]
    box_E = Euu - Evv
    box_logE = (Ef * box_E - (Eu**2 - Ev**2)) / Ef**2 if Ef != 0 else math.inf
    lag_factor = su + sv + svvv - suuv - suvv + suuu
    omega = float(np.sum(_J(pu) * eta * pv))
    omega_cf = (S + 2 * suv) * (-sv - su - svvv + suuv + suvv - suuu)
    omega_p = float(np.sum(_K(pu) * eta * pv))
    u, v = x
    omega_p_literal = math.cos(u - v) * Ef
    a_u = suvv - suuu - su
    c_v = svvv - suuv + sv
    omega_p_cf = math.cos(u - v) * Ef + math.sin(u - v) * (a_u + c_v) * (S - 2 * suv)
    null_fn = min(abs(S - 2 * suv), abs(S + 2 * suv))
    return {
        "E": E, "F": F, "G": G,
        "E_residual": abs(E - E_cf),
        "F_residual": abs(F - F_cf),
        "F_literal_residual": abs(F - F_literal),
        "G_residual": abs(G - G_cf),
        "weak_conformal": max(abs(E + G), abs(F)),
        "null_function": null_fn,
        "null_point": bool(null_fn <= null_tol * max(1.0, abs(S))),
        "flatness": box_E,
        "flatness_log": box_logE,
        "lagrangian_factor": lag_factor,
        "omega": omega,
        "omega_residual": abs(omega - omega_cf),
        "omega_prime": omega_p,
        "omega_prime_residual": abs(omega_p - omega_p_literal),
        "omega_prime_corrected_residual": abs(omega_p - omega_p_cf),
    }


# sweep -----------------------------------------------------------------------------

@dataclass
class SampleRecord:
    point: list
    residual_mt: float | None
    metric_scale: float
    signature: tuple[int, int, int]
    degenerate: bool
    identities: dict = field(default_factory=dict)
    note: str = ""


@dataclass
class VerificationReport:
    records: list[SampleRecord]
    checks: tuple[str, ...]
    mode: str
    tol_mt: float

    @property
    def nondegenerate(self) -> list[SampleRecord]:
        return [r for r in self.records if not r.degenerate]

    def aggregates(self) -> dict:
        good = self.nondegenerate
        res = np.array([r.residual_mt for r in good]) if good else np.zeros(0)
        out = {
            "samples": len(self.records),
            "degenerate": len(self.records) - len(good),
            "residual_mt_max": float(res.max()) if res.size else None,
            "residual_mt_mean": float(res.mean()) if res.size else None,
            "failed": int(np.sum(res > self.tol_mt)),
        }
        names = sorted({k for r in good for k, v in r.identities.items() if isinstance(v, (int, float)) and not isinstance(v, bool)})
        out["identities"] = {k: float(max(abs(r.identities[k]) for r in good if k in r.identities)) for k in names}
        return out

    def worst(self) -> SampleRecord | None:
        good = self.nondegenerate
        return max(good, key=lambda r: r.residual_mt) if good else None


DEFAULT_CHECKS = ("mt", "h_decomposition")


def _checks_for(candidate: CandidateImmersion) -> tuple[str, ...]:
    checks = list(DEFAULT_CHECKS)
    if candidate.provenance.startswith("hypersurface-flat") and getattr(candidate.seed, "basis", "") == "immersion":
        checks.append("lemma")
    if candidate.provenance == "gauss-sphere":
        checks += ["lemma", "sphere_unit"]
    if candidate.provenance == "null-hyperplane":
        checks += ["null_sff", "ricci_normal"]
    if candidate.sigma is not None and _is_torus(candidate):
        checks.append("surface")
    return tuple(checks)


def sweep(
    candidate: CandidateImmersion,
    grid,
    checks=None,
    mode: str = "analytic",
    step: float = 1e-3,
    tol_mt: float | None = None,
) -> VerificationReport:
    """Run the selected checks on every sample of ``grid`` (counts per axis or explicit points)."""
    if tol_mt is None:
        tol_mt = 1e-6 if mode == "analytic" else 1e-4
    checks = tuple(checks) if checks is not None else _checks_for(candidate)
    grid = np.asarray(grid)
    pts = grid_points(candidate.domain, grid) if grid.ndim == 1 and grid.dtype.kind in "iu" else grid.astype(float)
    info = candidate.sample(pts, 0)
    jets = immersion_jet(candidate, pts, mode, step)
    amb = candidate.target
    records = []
    for i, x in enumerate(pts):
        jet = jets.at(i)
        form = first_fundamental_form(jet, amb)
        scale = float(abs(np.linalg.det(form.metric)))
        rec = SampleRecord(x.tolist(), None, scale, (form.plus, form.minus, form.zero), False)
        records.append(rec)
        if info.degenerate is not None and info.degenerate[i]:
            rec.degenerate, rec.note = True, "metric-degenerate tau root"
            continue
        prov = None if info.normal is None else info.normal[i]
        try:
            sd = analyse(jet, amb, candidate.sphere_mode, prov)
        except DegenerateSample as exc:
            rec.degenerate, rec.note = True, str(exc)
            continue
        rec.residual_mt = sd.residual_mt
        if mode == "fd" and tol_mt < sd.residual_mt < 10 * tol_mt:
            # Richardson fallback for borderline samples
            j2 = immersion_jet(candidate, x, "fd-richardson", step)
            try:
                sd = analyse(j2, amb, candidate.sphere_mode, prov)
                jet = j2
                rec.residual_mt = sd.residual_mt
            except DegenerateSample:
                pass
        ids = rec.identities
        if "h_decomposition" in checks:
            ids["h_decomposition"] = sd.decomposition_residual
        if "null_sff" in checks:
            ids["null_sff"] = null_sff_check(sd).max_pairing
        if "ricci_normal" in checks:
            ids["ricci_normal"] = ricci_flat_normal_check(sd)
        if "lemma" in checks:
            oracle = lemma_geo_oracle if candidate.sphere_mode else lemma_geozero_oracle
            for k, v in oracle(candidate, x, jet).items():
                ids[f"lemma_{k}"] = v
        if "sphere_unit" in checks:
            ids["sphere_unit"] = float(abs(np.sum(jet.point * amb.eta * jet.point) - 1.0))
        if "surface" in checks:
            sc = surface_checks(candidate, x, jet)
            for k in ("E_residual", "F_residual", "G_residual", "weak_conformal", "omega_residual",
                      "omega_prime_residual", "omega_prime_corrected_residual"):
                ids[k] = sc[k]
            ids["null_point"] = sc["null_point"]
    report = VerificationReport(records, checks, mode, tol_mt)
    if not report.nondegenerate:
        raise NothingVerifiable("every sample is degenerate")
    return report
