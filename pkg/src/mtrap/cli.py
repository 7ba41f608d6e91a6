"""Scenario-driven command line front end.

A scenario is a small TOML file with the sections ``[scenario]``,
``[seed]``, ``[hyperplane]``, ``[verify]``, ``[tolerances]`` and
``[output]``.  ``run`` builds the candidate, sweeps it, writes a JSON report
(and optionally a CSV mesh) and returns

* 0 when every asserted check passes,
* 1 when a check fails or the construction/verification raises,
* 2 for configuration errors (reported with line and column).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from . import construct as C
from . import verify as V
from .errors import ConfigError, ExprSyntaxError, MTError, UnknownSymbol, UsageError
from .jets import CoordRange, make_chart
from .pseudolin import Signature
from .scalarlang import parse

THEOREMS = ("support_function", "hypersurface_flat", "gauss_sphere", "corollary1", "corollary3",
            "null_hyperplane", "correspondence")

SECTIONS = {
    "scenario": {"name", "theorem", "signature", "sigma", "branch"},
    "seed": None,  # preset parameters are free-form
    "hyperplane": {"nu0", "components", "target", "domain"},
    "verify": {"grid", "mode", "step", "tol_mt", "mt_fraction", "checks", "asserted"},
    "tolerances": None,
    "output": {"report", "mesh"},
}

# identity residual tolerances; names not listed here are reported but never asserted
DEFAULT_TOLERANCES = {
    "h_decomposition": 1e-8,
    "null_sff": 1e-8,
    "ricci_normal": 1e-8,
    "lemma_metric": 1e-7,
    "lemma_sff": 1e-7,
    "sphere_unit": 1e-10,
    "E_residual": 1e-7,
    "F_residual": 1e-7,
    "G_residual": 1e-7,
    "weak_conformal": 1e-7,
    "omega_residual": 1e-7,
    "omega_prime_corrected_residual": 1e-8,
    "mean_gauss_rank": 1,
    "decompose_roundtrip": 1e-12,
    "correspondence_agreement": 1e-8,
    "support_identity": 1e-10,
    "tau_offset": 1e-8,
}
INFORMATIONAL = {"omega_prime_residual"}


# presets -------------------------------------------------------------------------

@dataclass(frozen=True)
class Preset:
    name: str
    anchor: str
    text: str


def _preset(name, anchor, body):
    return Preset(name, anchor, f'[scenario]\nname = "{name}"\n' + body.strip() + "\n")


PRESETS = {p.name: p for p in [
    _preset("corollary1-constant", "flat torus from a constant support function", """
theorem = "corollary1"
signature = [1, 1]
sigma = "0.5"
[verify]
grid = [32, 32]
tol_mt = 1e-10
[output]
mesh = "corollary1-constant.csv"
"""),
    _preset("corollary1-trig", "complex closed form on S1 x S1 with a trigonometric support function", """
theorem = "corollary1"
signature = [1, 1]
sigma = "2 + 0.3*sin(u)*cos(v)"
[verify]
grid = [24, 24]
"""),
    _preset("corollary1-zero", "zero support function: every sample is a null point", """
theorem = "corollary1"
signature = [1, 1]
sigma = "0"
[verify]
grid = [8, 8]
"""),
    _preset("support-function-trig", "general support-function construction on S1 x S1", """
theorem = "support_function"
signature = [1, 1]
sigma = "2 + 0.3*sin(u)*cos(v)"
[verify]
grid = [24, 24]
"""),
    _preset("support-function-s2", "support-function construction on S2 x S0", """
theorem = "support_function"
signature = [2, 0]
sigma = "0.5 + 0.1*z^2"
[verify]
grid = [16, 16]
"""),
    _preset("cylinder-thm-zero", "flat seed: unit cylinder, inverse-trace polynomial read literally", """
theorem = "hypersurface_flat"
signature = [2, 0]
[seed]
preset = "cylinder"
r = 1.0
polynomial = "literal"
[verify]
grid = [64, 16]
mode = "fd"
tol_mt = 1e-6
"""),
    _preset("ellipsoid-thm-zero", "flat seed: triaxial ellipsoid, trapping polynomial", """
theorem = "hypersurface_flat"
signature = [2, 0]
[seed]
preset = "ellipsoid"
[verify]
grid = [16, 16]
"""),
    _preset("round-sphere-umbilic", "flat seed: round sphere, every root umbilic", """
theorem = "hypersurface_flat"
signature = [2, 0]
[seed]
preset = "round-sphere"
[verify]
grid = [8, 8]
"""),
    _preset("latitude-corollary3", "sphere target: latitude circle times S1", """
theorem = "corollary3"
signature = [1, 1]
[seed]
preset = "latitude"
theta = 0.5
[verify]
grid = [24, 24]
[output]
mesh = "latitude-corollary3.csv"
"""),
    _preset("null-hyperplane-graph", "graph inside a null hyperplane of R4 with signature (2,2)", """
theorem = "null_hyperplane"
signature = [1, 1]
[hyperplane]
nu0 = [1, 0, 1, 0]
components = ["sin(u)*cos(v)", "u", "sin(u)*cos(v)", "v"]
target = "flat"
[verify]
grid = [12, 12]
"""),
    _preset("correspondence-quadratic", "Lorentzian correspondence on S2 with a quadratic support function", """
theorem = "correspondence"
signature = [2, 0]
sigma = "0.5 + 0.1*z^2"
[verify]
grid = [16, 16]
"""),
]}


def list_presets() -> str:
    width = max(len(n) for n in PRESETS)
    return "\n".join(f"{name.ljust(width)}  {PRESETS[name].anchor}" for name in sorted(PRESETS))


# config ------------------------------------------------------------------------------

def _locate(text: str, section: str, key: str) -> tuple[int | None, int | None]:
    """1-based line and column of ``key =`` inside ``[section]`` (or of the header)."""
    current = None
    for i, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        m = re.match(r"\[([^\]]+)\]", stripped)
        if m:
            current = m.group(1).strip()
            if key is None and current == section:
                return i, line.index("[") + 1
            continue
        if current == section and key is not None:
            m = re.match(r"\s*" + re.escape(key) + r"\s*=", line)
            if m:
                return i, line.index(key) + 1
    return None, None


def _expr_column(text: str, line: int | None) -> int | None:
    if line is None:
        return None
    src = text.splitlines()[line - 1]
    q = src.find('"', src.find("="))
    return q + 2 if q >= 0 else None


@dataclass
class Scenario:
    text: str
    data: dict
    name: str
    theorem: str
    signature: Signature
    branch: int = 0
    grid: list[int] = field(default_factory=list)
    mode: str = "analytic"
    step: float = 1e-3
    tol_mt: float | None = None
    mt_fraction: float = 1.0
    checks: list[str] | None = None
    asserted: list[str] | None = None
    tolerances: dict = field(default_factory=dict)
    report: str = ""
    mesh: str = ""

    def error(self, message: str, section: str, key: str | None = None) -> ConfigError:
        line, col = _locate(self.text, section, key)
        return ConfigError(message, line, col)

    def section(self, name: str) -> dict:
        return self.data.get(name, {})


def _typed(sc: Scenario, section: str, key: str, kind, default=None):
    value = sc.section(section).get(key, default)
    if value is None:
        return None
    ok = isinstance(value, kind) and not (kind in (int, (int, float)) and isinstance(value, bool))
    if not ok:
        raise sc.error(f"[{section}] {key} has the wrong type", section, key)
    return value


def load_scenario(text: str) -> Scenario:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML syntax: {getattr(exc, 'msg', str(exc))}", getattr(exc, "lineno", None),
                          getattr(exc, "colno", None)) from None
    probe = Scenario(text, data, "", "", Signature(1, 1))
    for sec, body in data.items():
        if sec not in SECTIONS:
            raise probe.error(f"unknown section [{sec}]", sec)
        if not isinstance(body, dict):
            raise ConfigError(f"{sec} must be a section", *_locate(text, "", sec))
        allowed = SECTIONS[sec]
        if allowed is not None:
            for key in body:
                if key not in allowed:
                    raise probe.error(f"unknown key {key!r} in [{sec}]", sec, key)
    if "scenario" not in data:
        raise ConfigError("missing [scenario] section", 1, 1)
    name = _typed(probe, "scenario", "name", str, "scenario")
    theorem = _typed(probe, "scenario", "theorem", str)
    if theorem is None:
        raise probe.error("[scenario] theorem is required", "scenario")
    if theorem not in THEOREMS:
        raise probe.error(f"unknown theorem tag {theorem!r}", "scenario", "theorem")
    sig = _typed(probe, "scenario", "signature", list, [1, 1])
    if len(sig) != 2 or not all(isinstance(k, int) and not isinstance(k, bool) and k >= 0 for k in sig):
        raise probe.error("signature must be two non-negative integers", "scenario", "signature")
    signature = Signature(*sig)
    if theorem in ("corollary1", "corollary3") and tuple(sig) != (1, 1):
        raise probe.error(f"{theorem} requires signature (1, 1)", "scenario", "signature")
    if theorem == "correspondence" and sig[1] != 0:
        raise probe.error("correspondence requires q = 0", "scenario", "signature")
    sc = Scenario(text, data, name, theorem, signature)
    sc.branch = _typed(sc, "scenario", "branch", int, 0)
    sc.grid = _typed(sc, "verify", "grid", list, [16] * max(signature.n, 2))
    if not all(isinstance(k, int) and not isinstance(k, bool) and k > 0 for k in sc.grid):
        raise sc.error("grid must be a list of positive integers", "verify", "grid")
    sc.mode = _typed(sc, "verify", "mode", str, "analytic")
    if sc.mode not in ("analytic", "fd"):
        raise sc.error(f"unknown jet mode {sc.mode!r}", "verify", "mode")
    sc.step = float(_typed(sc, "verify", "step", (int, float), 1e-3))
    tol = _typed(sc, "verify", "tol_mt", (int, float))
    sc.tol_mt = None if tol is None else float(tol)
    sc.mt_fraction = float(_typed(sc, "verify", "mt_fraction", (int, float), 1.0))
    sc.checks = _typed(sc, "verify", "checks", list)
    sc.asserted = _typed(sc, "verify", "asserted", list)
    for key, value in sc.section("tolerances").items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise sc.error(f"tolerance {key!r} must be a number", "tolerances", key)
        sc.tolerances[key] = float(value)
    sc.report = _typed(sc, "output", "report", str, f"{name}.json")
    sc.mesh = _typed(sc, "output", "mesh", str, "")
    return sc


def _parse_expr(sc: Scenario, section: str, key: str, src, variables=None):
    if not isinstance(src, str):
        raise sc.error(f"[{section}] {key} must be a quoted expression", section, key)
    try:
        return parse(src, variables)
    except ExprSyntaxError as exc:
        line, _ = _locate(sc.text, section, key)
        col = _expr_column(sc.text, line)
        raise ConfigError(f"[{section}] {key}: {exc}", line, None if col is None else col + exc.offset) from None
    except UnknownSymbol as exc:
        line, _ = _locate(sc.text, section, key)
        col = _expr_column(sc.text, line)
        raise ConfigError(f"[{section}] {key}: {exc}", line, None if col is None else col + exc.offset) from None


# building ------------------------------------------------------------------------------

@dataclass
class Built:
    candidate: C.CandidateImmersion
    extra: dict = field(default_factory=dict)  # scenario-level residual functions of the grid points


def _sigma(sc: Scenario):
    src = sc.section("scenario").get("sigma")
    if src is None:
        raise sc.error(f"{sc.theorem} needs [scenario] sigma", "scenario")
    chart = make_chart(sc.signature)
    return _parse_expr(sc, "scenario", "sigma", src, chart.field_names()), chart


def _seed(sc: Scenario) -> tuple[C.SeedHypersurface, str]:
    body = dict(sc.section("seed"))
    preset = body.pop("preset", None)
    if preset is None:
        raise sc.error(f"{sc.theorem} needs [seed] preset", "seed" if "seed" in sc.data else "scenario")
    if preset not in C.SEED_PRESETS:
        raise sc.error(f"unknown seed preset {preset!r}", "seed", "preset")
    polynomial = body.pop("polynomial", "corrected")
    if polynomial not in ("corrected", "literal"):
        raise sc.error(f"unknown polynomial form {polynomial!r}", "seed", "polynomial")
    shift = body.pop("shift", 0.0)
    for key in ("f", "theta"):
        if isinstance(body.get(key), str):
            body[key] = _parse_expr(sc, "seed", key, body[key])
    if preset == "graph":
        body["sig"] = sc.signature
    try:
        seed = C.SEED_PRESETS[preset](**body)
    except TypeError as exc:
        raise sc.error(f"bad parameters for seed {preset!r}: {exc}", "seed", "preset") from None
    if shift:
        seed = seed.with_shift(float(shift))
    return seed, polynomial


def _roundtrip_flat(cand):
    def check(pts):
        s = cand.sample(pts, 0)
        dec = C.decompose_flat(s.phi.value, s.normal, cand.target)
        return np.abs(dec.recompose() - s.phi.value).max(axis=-1)
    return check


def _roundtrip_sphere(cand):
    def check(pts):
        s = cand.sample(pts, 0)
        dec = C.decompose_sphere(s.phi.value, s.normal, cand.target, cand.target.plus)
        return np.abs(dec.tau - s.tau)
    return check


def build(sc: Scenario) -> Built:
    th = sc.theorem
    if th == "corollary1":
        sigma, _ = _sigma(sc)
        return Built(C.corollary1_surface(sigma))
    if th == "support_function":
        sigma, chart = _sigma(sc)
        return Built(C.from_support_function(sigma, sc.signature, chart, sc.branch, keep_degenerate=True))
    if th == "hypersurface_flat":
        seed, polynomial = _seed(sc)
        cand = C.from_hypersurface_flat(seed, sc.branch, polynomial)
        return Built(cand, {"decompose_roundtrip": _roundtrip_flat(cand)})
    if th in ("gauss_sphere", "corollary3"):
        seed, _ = _seed(sc)
        cand = C.from_gauss_sphere(seed, sc.branch)
        return Built(cand, {"decompose_roundtrip": _roundtrip_sphere(cand)})
    if th == "null_hyperplane":
        body = sc.section("hyperplane")
        target = body.get("target", "flat")
        if target not in ("flat", "sphere"):
            raise sc.error(f"unknown target {target!r}", "hyperplane", "target")
        amb = sc.signature.flat() if target == "flat" else sc.signature.sphere()
        comps = body.get("components")
        if not isinstance(comps, list):
            raise sc.error("[hyperplane] components must be a list of expressions", "hyperplane", "components")
        n = sc.signature.n
        names = tuple(f"u{i + 1}" for i in range(n)) + tuple("uvw"[:n])
        exprs = [_parse_expr(sc, "hyperplane", "components", c, names) for c in comps]
        domain = body.get("domain")
        if domain is not None:
            domain = [CoordRange(float(lo), float(hi)) for lo, hi in domain]
        try:
            nu0 = np.asarray(body.get("nu0"), dtype=float)
        except (TypeError, ValueError):
            raise sc.error("[hyperplane] nu0 must be a numeric list", "hyperplane", "nu0") from None
        cand = C.null_hyperplane_graph(nu0, exprs, amb, domain, n)

        def rank(pts):
            return np.array([V.mean_gauss_rank(cand, x)[0] for x in pts], dtype=float)

        return Built(cand, {"mean_gauss_rank": rank})
    # correspondence
    sigma, chart = _sigma(sc)
    corr = C.lorentzian_correspondence(sigma, sc.signature.n)
    flat0 = C.from_hypersurface_flat(corr.seed, sc.branch, keep_degenerate=True)
    one = C.from_support_function(sigma, sc.signature, chart, sc.branch, keep_degenerate=True)
    return Built(flat0, {
        "correspondence_agreement": lambda pts: np.abs(flat0.evaluate(pts) - one.evaluate(pts)).max(axis=-1),
        "support_identity": corr.support_residual,
        "tau_offset": lambda pts: np.abs(flat0.tau(pts) - (one.tau(pts) - corr.tau_offset(pts))),
    })


# reporting ------------------------------------------------------------------------------

def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None, complex to [re, im]."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def _record_dict(rec: V.SampleRecord) -> dict:
    return {
        "point": rec.point,
        "residual_mt": rec.residual_mt,
        "metric_det": rec.metric_scale,
        "signature": list(rec.signature),
        "degenerate": rec.degenerate,
        "identities": rec.identities,
        "note": rec.note,
    }


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def mesh_csv(candidate: C.CandidateImmersion, report: V.VerificationReport) -> str:
    pts = np.array([r.point for r in report.records])
    phi = candidate.evaluate(pts)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"u{i + 1}" for i in range(candidate.n)] + [f"phi{k + 1}" for k in range(candidate.target.dim)]
               + ["residual_mt", "degenerate"])
    for x, p, rec in zip(pts, phi, report.records):
        res = "" if rec.residual_mt is None else repr(float(rec.residual_mt))
        w.writerow([repr(float(c)) for c in x] + [repr(float(c)) for c in p] + [res, int(rec.degenerate)])
    return buf.getvalue()


def evaluate_checks(sc: Scenario, built: Built, report: V.VerificationReport) -> tuple[dict, list[str]]:
    """Per-check maxima against tolerances; returns the check table and the names that failed."""
    agg = report.aggregates()
    tol_mt = report.tol_mt
    res = np.array([r.residual_mt for r in report.nondegenerate])
    frac = float(np.mean(res <= tol_mt))
    table = {"residual_mt": {"max": agg["residual_mt_max"], "tol": tol_mt, "fraction_within": frac,
                             "asserted": True, "pass": frac >= sc.mt_fraction}}
    tols = dict(DEFAULT_TOLERANCES)
    tols.update(sc.tolerances)
    values = dict(agg["identities"])
    good_pts = np.array([r.point for r in report.nondegenerate])
    for name, fn in built.extra.items():
        values[name] = float(np.max(fn(good_pts)))
    for name in sorted(values):
        asserted = name in tols and name not in INFORMATIONAL
        if sc.asserted is not None:
            asserted = name in sc.asserted and name in tols
        tol = tols.get(name)
        ok = True if not asserted else values[name] <= tol
        table[name] = {"max": values[name], "tol": tol, "asserted": asserted, "pass": ok}
    failed = [name for name, row in table.items() if row["asserted"] and not row["pass"]]
    return table, failed


def _tau_summary(candidate, report: V.VerificationReport) -> dict | None:
    worst = report.worst() or report.records[0]
    roots = C.tau_roots_at(candidate, [worst.point])
    taus = candidate.tau(np.array([r.point for r in report.records]))
    out = {}
    if taus is not None:
        out["range"] = [float(np.nanmin(taus)), float(np.nanmax(taus))]
    if roots:
        out["point"] = worst.point
        out["accepted"] = list(roots[0].roots)
        out["rejected"] = [[r, why] for r, why in roots[0].rejected]
    return out or None


def run_scenario(text: str, out_dir: str = ".", grid=None, mode=None, branch=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        sc = load_scenario(text)
        if grid is not None:
            sc.grid = list(grid)
        if mode is not None:
            sc.mode = mode
        if branch is not None:
            sc.branch = branch
        if len(sc.grid) != sc.signature.n:
            raise sc.error(f"grid needs {sc.signature.n} entries", "verify", "grid")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    echo = {"name": sc.name, "theorem": sc.theorem, "signature": [sc.signature.p, sc.signature.q],
            "branch": sc.branch, "grid": sc.grid, "mode": sc.mode, "step": sc.step, "config": sc.data}
    result = {"version": __version__, "scenario": echo}
    code = 0
    mesh_text = None
    try:
        built = build(sc)
        report = V.sweep(built.candidate, sc.grid, sc.checks, sc.mode, sc.step, sc.tol_mt)
        table, failed = evaluate_checks(sc, built, report)
        agg = report.aggregates()
        result.update(
            status="fail" if failed else "pass",
            failures=failed,
            checks=table,
            aggregates={k: v for k, v in agg.items() if k != "identities"},
            worst_sample=None if report.worst() is None else _record_dict(report.worst()),
            tau=_tau_summary(built.candidate, report),
        )
        if sc.mesh:
            mesh_text = mesh_csv(built.candidate, report)
        code = 1 if failed else 0
        for name in failed:
            print(f"FAIL {name}: max {table[name]['max']!r} exceeds {table[name]['tol']!r}", file=stdout)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ExprSyntaxError, UnknownSymbol) as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except MTError as exc:
        result.update(status="fail", failures=[type(exc).__name__], error={"type": type(exc).__name__, "message": str(exc)})
        print(f"FAIL {type(exc).__name__}: {exc}", file=stdout)
        code = 1
    report_text = json.dumps(_clean(result), indent=2, sort_keys=True, allow_nan=False) + "\n"
    _atomic_write(os.path.join(out_dir, sc.report), report_text)
    if mesh_text is not None:
        _atomic_write(os.path.join(out_dir, sc.mesh), mesh_text)
    if code == 0:
        print(f"PASS {sc.name}: residual_mt max {result['checks']['residual_mt']['max']!r}", file=stdout)
    return code


def _grid_arg(text: str) -> list[int]:
    try:
        parts = [int(p) for p in text.lower().split("x")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 32x32, got {text!r}") from None
    if not parts or any(p <= 0 for p in parts):
        raise argparse.ArgumentTypeError("grid entries must be positive")
    return parts


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mtrap",
        description="Construct and verify marginally trapped immersions from scenario files.",
        epilog="Scalar fields use +, -, *, /, ^ with integer exponents, sin, cos, exp, pi and the chart names.",
    )
    parser.add_argument("--version", action="version", version=f"mtrap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file or preset:NAME")
    run.add_argument("config")
    run.add_argument("--grid", type=_grid_arg)
    run.add_argument("--out", default=".")
    run.add_argument("--mode", choices=("analytic", "fd"))
    run.add_argument("--branch", type=int)
    sub.add_parser("list-presets", help="list the built-in scenarios")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "list-presets":
        print(list_presets())
        return 0
    if args.config.startswith("preset:"):
        name = args.config.split(":", 1)[1]
        if name not in PRESETS:
            print(f"config error: unknown preset {name!r}", file=sys.stderr)
            return 2
        text = PRESETS[name].text
    else:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
    return run_scenario(text, args.out, args.grid, args.mode, args.branch)


if __name__ == "__main__":
    sys.exit(main())
