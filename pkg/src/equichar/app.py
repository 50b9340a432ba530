"""Configuration ingestion, eta-invariant assembly, check suite and CSV/JSON emission.

The command line exposes five subcommands over a single JSON config:

    equichar check CONFIG            run the invariant suite, exit 1 on failure
    equichar lform CONFIG -o DIR     write lform.csv
    equichar transgression CONFIG -o DIR   write transgression.csv
    equichar eta CONFIG -o DIR       write report.json (+ the two CSV tables)
    equichar oracle CONFIG           finite-difference chart validation

Exit codes: 0 success, 1 numerical failure, 2 config error.  The environment
variable EQUICHAR_THREADS caps worker threads for the embarrassingly parallel
sweeps; outputs are byte-identical for identical configs regardless.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import oracle as oracle_mod
from . import skr
from .charforms import QuadratureSpec
from .errors import ConfigError, EquicharError, ProfileError
from .matforms import DEFAULT_SERIES_ORDER, hirzebruch_l_log_germ
from .skr import SKRProfile

__all__ = [
    "RunConfig",
    "Report",
    "load_config",
    "build_profile",
    "eta_invariant",
    "run_check",
    "emit_tables",
    "main",
]


# --------------------------------------------------------------------------- config

@dataclass(frozen=True)
class Numerics:
    series_order: int = DEFAULT_SERIES_ORDER
    quad_nodes: int = 32
    fd_step: float = 1e-4
    tau_samples: int = 101


@dataclass(frozen=True)
class Topology:
    signature: int = 0
    base_area: float = 1.0
    fiber_period: float = 2.0 * math.pi


@dataclass(frozen=True)
class RunConfig:
    profile: dict
    numerics: Numerics = Numerics()
    topology: Topology = Topology()
    output_dir: Optional[str] = None

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(self.numerics.quad_nodes)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def load_config(path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    _require(isinstance(raw, dict), "config must be a JSON object")
    _require("profile" in raw, "config needs a 'profile' section")
    num = raw.get("numerics", {})
    top = raw.get("topology", {})
    for section, name in ((num, "numerics"), (top, "topology")):
        _require(isinstance(section, dict), f"'{name}' must be an object")
    numerics = Numerics(
        series_order=int(num.get("series_order", DEFAULT_SERIES_ORDER)),
        quad_nodes=int(num.get("quad_nodes", 32)),
        fd_step=float(num.get("fd_step", 1e-4)),
        tau_samples=int(num.get("tau_samples", 101)),
    )
    _require(numerics.series_order >= 4, "series_order must be >= 4")
    _require(numerics.quad_nodes >= 2, "quad_nodes must be >= 2")
    _require(numerics.fd_step > 0, "fd_step must be positive")
    _require(numerics.tau_samples >= 2, "tau_samples must be >= 2")
    topology = Topology(
        signature=int(top.get("signature", 0)),
        base_area=float(top.get("base_area", 1.0)),
        fiber_period=float(top.get("fiber_period", 2.0 * math.pi)),
    )
    _require(topology.base_area > 0, "base_area must be positive")
    _require(topology.fiber_period > 0, "fiber_period must be positive")
    out = raw.get("output", {})
    output_dir = out.get("dir") if isinstance(out, dict) else None
    return RunConfig(
        profile=raw["profile"], numerics=numerics, topology=topology, output_dir=output_dir
    )


def _interpolant(samples: dict, what: str):
    from scipy.interpolate import InterpolatedUnivariateSpline

    _require(
        isinstance(samples, dict) and "tau" in samples and what in samples,
        f"tabulated profile needs 'tau' and '{what}' arrays",
    )
    taus = np.asarray(samples["tau"], dtype=float)
    vals = np.asarray(samples[what], dtype=float)
    _require(taus.ndim == 1 and taus.shape == vals.shape, "sample arrays must match")
    _require(np.all(np.diff(taus) > 0), "sample tau values must be increasing")
    order = int(samples.get("interp_order", 3))
    _require(1 <= order <= 5, "interp_order must be in 1..5")
    spline = InterpolatedUnivariateSpline(taus, vals, k=order)
    d1 = spline.derivative(1)
    d2 = spline.derivative(2) if order >= 2 else None
    return (
        lambda t: float(spline(t)),
        lambda t: float(d1(t)),
        (lambda t: float(d2(t))) if d2 is not None else None,
    )


def build_profile(cfg: RunConfig) -> SKRProfile:
    prof = cfg.profile
    _require(isinstance(prof, dict), "'profile' must be an object")
    mode = prof.get("mode")
    _require(mode in ("irreducible", "reducible"), "profile.mode must be irreducible|reducible")
    common = dict(
        a_const=float(prof.get("a_const", 1.0)),
        base_curv=float(prof.get("base_curv", 0.0)),
        tau_min=float(prof.get("tau_min", -0.5)),
        base_area=cfg.topology.base_area,
        fiber_period=cfg.topology.fiber_period,
        label=str(prof.get("label", "")),
    )
    try:
        if mode == "irreducible":
            c_bar = float(prof.get("c_bar", -1.0))
            if "phi_coeffs" in prof:
                return SKRProfile.irreducible_polynomial(prof["phi_coeffs"], c_bar, **common)
            if "phi_samples" in prof:
                f, d1, d2 = _interpolant(prof["phi_samples"], "phi")
                return SKRProfile(
                    mode="irreducible", c_bar=c_bar, phi=f, phi_d=d1, phi_dd=d2, **common
                )
            raise ConfigError("irreducible profile needs phi_coeffs or phi_samples")
        if "q_coeffs" in prof:
            return SKRProfile.reducible_polynomial(prof["q_coeffs"], **common)
        if "q_samples" in prof:
            f, d1, d2 = _interpolant(prof["q_samples"], "q")
            return SKRProfile(mode="reducible", q_fun=f, q_fun_d=d1, q_fun_dd=d2, **common)
        raise ConfigError("reducible profile needs q_coeffs or q_samples")
    except ProfileError as exc:
        raise ConfigError(f"invalid profile: {exc}") from exc


def _thread_cap() -> int:
    raw = os.environ.get("EQUICHAR_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


# --------------------------------------------------------------------------- report

def _measured(value: float, error: float) -> dict:
    return {"value": float(value), "error": float(error)}


@dataclass
class Report:
    config_echo: dict
    lform_table: list
    tl3_closed: dict
    tl3_direct: dict
    tl3_discrepancy: float
    series_tail_bound: float
    bulk_integral: dict
    boundary_integral: dict
    eta: dict

    def to_json(self) -> str:
        payload = {
            "config": self.config_echo,
            "lform_table": self.lform_table,
            "boundary": {
                "tl3_closed": self.tl3_closed,
                "tl3_direct": self.tl3_direct,
                "discrepancy": self.tl3_discrepancy,
                "series_tail_bound": self.series_tail_bound,
            },
            "bulk_integral": self.bulk_integral,
            "boundary_integral": self.boundary_integral,
            "eta": self.eta,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _config_echo(cfg: RunConfig) -> dict:
    return {
        "profile": cfg.profile,
        "numerics": {
            "series_order": cfg.numerics.series_order,
            "quad_nodes": cfg.numerics.quad_nodes,
            "fd_step": cfg.numerics.fd_step,
            "tau_samples": cfg.numerics.tau_samples,
        },
        "topology": {
            "signature": cfg.topology.signature,
            "base_area": cfg.topology.base_area,
            "fiber_period": cfg.topology.fiber_period,
        },
    }


# --------------------------------------------------------------------------- eta assembly

def _gauss_nodes(n: int, a: float, b: float):
    xs, ws = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * xs + 0.5 * (a + b), 0.5 * (b - a) * ws


def _bulk_quadrature(p: SKRProfile, n_nodes: int, tau_lo: float) -> float:
    xs, ws = _gauss_nodes(n_nodes, tau_lo, 0.0)
    acc = 0.0
    for t, w in zip(xs, ws):
        acc += float(w) * skr.l4_coefficient(p, float(t)) * skr.volume_weight(p, float(t))
    return acc


def _bulk_integral(p: SKRProfile, cfg: RunConfig) -> dict:
    """Reduced radial integral of the L-form degree-4 density.

    When Q degenerates at tau_min the rule retreats to [tau_min + eps, 0] for
    shrinking eps and extrapolates; divergence raises a numerical failure.
    """
    n = cfg.numerics.quad_nodes
    try:
        derived_ok = skr.derived_functions(p, p.tau_min).q > 1e-9
    except ProfileError:
        derived_ok = False
    if derived_ok:
        coarse = _bulk_quadrature(p, n, p.tau_min)
        fine = _bulk_quadrature(p, 2 * n, p.tau_min)
        return _measured(fine, abs(fine - coarse))
    span = -p.tau_min
    values = [_bulk_quadrature(p, 2 * n, p.tau_min + span * eps) for eps in (1e-3, 1e-4, 1e-5)]
    d1 = abs(values[1] - values[0])
    d2 = abs(values[2] - values[1])
    if d2 > d1 and d2 > 1e-9 * max(1.0, abs(values[2])):
        raise EquicharError(
            f"bulk integrand appears divergent at tau_min: increments {d1:.3e} -> {d2:.3e}"
        )
    # one Richardson step assuming first-order shrinkage in eps
    extrapolated = values[2] + (values[2] - values[1]) / 9.0
    return _measured(extrapolated, d2)


def eta_invariant(cfg: RunConfig, profile: Optional[SKRProfile] = None) -> Report:
    """Assemble the infinitesimal equivariant eta invariant of the boundary.

    eta = -(1/pi^2) [ bulk - boundary ] - signature, where bulk is the reduced
    integral of the L-form degree-4 coefficient against the radial volume
    density and boundary is the closed transgression coefficient times the
    boundary 3-volume.
    """
    p = profile if profile is not None else build_profile(cfg)
    quad = cfg.quadrature()
    order = cfg.numerics.series_order

    bulk = _bulk_integral(p, cfg)

    bd = skr.boundary_data(p)
    tl3_closed = skr.transgression_pullback_closed(p, order, quad).coefficient((1, 2, 3))
    tl3_direct = skr.transgression_pullback_direct(p, order, quad).coefficient((1, 2, 3))
    discrepancy = abs(tl3_closed - tl3_direct)
    tail = skr.closed_transgression_tail(bd, order)

    radial = 2.0 * abs(p.c_bar) if p.mode == "irreducible" else 1.0
    boundary_volume = radial * p.base_area * p.fiber_period * math.sqrt(bd.q0)
    boundary = _measured(tl3_closed * boundary_volume, (discrepancy + tail) * boundary_volume)

    eta_val = -(bulk["value"] - boundary["value"]) / math.pi**2 - cfg.topology.signature
    eta_err = (bulk["error"] + boundary["error"]) / math.pi**2

    taus = _lform_taus(p, cfg.numerics.tau_samples)
    table = [_lform_row(p, t) for t in taus]

    return Report(
        config_echo=_config_echo(cfg),
        lform_table=table,
        tl3_closed=_measured(tl3_closed, tail),
        tl3_direct=_measured(tl3_direct, tail),
        tl3_discrepancy=discrepancy,
        series_tail_bound=tail,
        bulk_integral=bulk,
        boundary_integral=boundary,
        eta=_measured(eta_val, eta_err),
    )


# --------------------------------------------------------------------------- tables

def _lform_taus(p: SKRProfile, n: int) -> list:
    # midpoint grid: stays off tau_min (where Q may degenerate) and off tau = 0
    span = -p.tau_min
    return [p.tau_min + span * (i + 0.5) / n for i in range(n)]


def _lform_row(p: SKRProfile, tau: float) -> dict:
    d = skr.derived_functions(p, tau)
    cc = skr.curvature_components(p, tau)
    sq = skr.sqrt_a_coeffs(d.phi, d.psi, cc)
    return {
        "tau": tau,
        "alpha": sq.alpha,
        "beta": sq.beta,
        "gamma": sq.gamma,
        "delta": sq.delta,
        "L4": skr.l4_coefficient(p, tau),
    }


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def emit_tables(cfg: RunConfig, out_dir, which=("lform", "transgression", "report")) -> list:
    """Write the requested deterministic artifacts; returns the paths written."""
    p = build_profile(cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    if "lform" in which:
        rows = [_lform_row(p, t) for t in _lform_taus(p, cfg.numerics.tau_samples)]
        path = out / "lform.csv"
        with open(path, "w", newline="\n") as fh:
            fh.write("tau,alpha,beta,gamma,delta,L4\n")
            for r in rows:
                fh.write(
                    ",".join(
                        _fmt(r[c]) for c in ("tau", "alpha", "beta", "gamma", "delta", "L4")
                    )
                    + "\n"
                )
        written.append(path)

    if "transgression" in which:
        bd = skr.boundary_data(p)
        germ = hirzebruch_l_log_germ()
        xs, _ = cfg.quadrature().rule()
        path = out / "transgression.csv"
        with open(path, "w", newline="\n") as fh:
            fh.write("t,integrand_e123\n")
            for t in xs:
                val = skr.closed_transgression_integrand(
                    bd, float(t), germ, cfg.numerics.series_order
                )
                fh.write(f"{_fmt(float(t))},{_fmt(val)}\n")
        written.append(path)

    if "report" in which:
        report = eta_invariant(cfg, profile=p)
        path = out / "report.json"
        with open(path, "w", newline="\n") as fh:
            fh.write(report.to_json())
        written.append(path)

    return written


# --------------------------------------------------------------------------- check suite

@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<34s} residual={self.residual:.3e}  tol={self.tolerance:.3e}"


def _check(name: str, residual: float, tolerance: float) -> CheckResult:
    return CheckResult(name, residual <= tolerance, residual, tolerance)


def run_check(cfg: RunConfig, stream=None) -> list:
    """Run the invariant suite on the configured profile; print one line per check."""
    stream = stream if stream is not None else sys.stdout
    p = build_profile(cfg)
    quad = cfg.quadrature()
    order = cfg.numerics.series_order
    results = []

    # profile relations along tau
    taus = _lform_taus(p, 100)
    res = 0.0
    if p.mode == "irreducible":
        for t in taus:
            d = skr.derived_functions(p, t)
            res = max(res, abs(d.q - 2.0 * (t - p.c_bar) * d.phi))
            h = 1e-6 * max(1.0, abs(p.tau_min))
            if p.tau_min + h < t < -h:
                dq = (
                    skr.derived_functions(p, t + h).q - skr.derived_functions(p, t - h).q
                ) / (2.0 * h)
                res = max(res, abs(dq - 2.0 * d.psi))
                res = max(res, abs(d.q * d.phi_d - 2.0 * (d.psi - d.phi) * d.phi))
    results.append(_check("profile-relations", res, 1e-8))

    # curvature structure
    res = 0.0
    for t in taus[:: max(1, len(taus) // 10)]:
        cc = skr.curvature_components(p, t)
        if p.mode == "irreducible":
            res = max(res, abs(cc.r - 0.5 * cc.c))
        else:
            res = max(res, abs(cc.r), abs(cc.c))
    results.append(_check("curvature-relations", res, 1e-14))

    # sqrt(A) square identity
    res = 0.0
    for t in taus[:: max(1, len(taus) // 10)]:
        d = skr.derived_functions(p, t)
        cc = skr.curvature_components(p, t)
        try:
            sq = skr.sqrt_a_coeffs(d.phi, d.psi, cc)
        except EquicharError:
            continue
        from .exterior import ExteriorForm, wedge

        root = ExteriorForm(
            4, {(): sq.alpha, (1, 2): sq.beta, (3, 4): sq.gamma, (1, 2, 3, 4): sq.delta}
        )
        res = max(res, (wedge(root, root) - skr.eigenvalue_square(d.phi, d.psi, cc)).max_abs())
    results.append(_check("sqrt-a-square-identity", res, 1e-13))

    # transgression routes
    closed = skr.transgression_pullback_closed(p, order, quad).coefficient((1, 2, 3))
    direct = skr.transgression_pullback_direct(p, order, quad).coefficient((1, 2, 3))
    scale = max(abs(closed), abs(direct), 1e-12)
    results.append(_check("transgression-closed-vs-direct", abs(closed - direct) / scale, 1e-8))

    from .charforms import transgression_degree3_alt

    alt = (
        transgression_degree3_alt(hirzebruch_l_log_germ(), skr.boundary_family(p), quad, order)
        .coefficient((1, 2, 3))
    )
    results.append(_check("transgression-alt-route", abs(direct - alt) / scale, 1e-10))

    if p.mode == "reducible":
        l4max = max(abs(skr.l4_coefficient(p, t)) for t in taus)
        results.append(_check("reducible-lform-vanishing", l4max, 1e-12))
        results.append(
            _check("reducible-transgression-vanishing", max(abs(closed), abs(direct)), 1e-10)
        )

    # eta stability under quadrature refinement
    report = eta_invariant(cfg, profile=p)
    cfg_fine = RunConfig(
        profile=cfg.profile,
        numerics=Numerics(
            series_order=order,
            quad_nodes=2 * cfg.numerics.quad_nodes,
            fd_step=cfg.numerics.fd_step,
            tau_samples=cfg.numerics.tau_samples,
        ),
        topology=cfg.topology,
    )
    report_fine = eta_invariant(cfg_fine, profile=p)
    eta_scale = max(abs(report.eta["value"]), abs(report_fine.eta["value"]), 1.0)
    results.append(
        _check(
            "eta-quadrature-stability",
            abs(report.eta["value"] - report_fine.eta["value"]) / eta_scale,
            1e-8,
        )
    )

    # finite-difference oracle on the flat-base chart variant of this profile
    flat = _flat_base_variant(p)
    pts = _oracle_points(flat, 8)
    threads = _thread_cap()

    def curvature_residual(pt):
        r_fd = oracle_mod.riemann_frame_fd(flat, pt, cfg.numerics.fd_step)
        cc = skr.curvature_components(flat, pt.tau)
        want = {
            (0, 1, 0, 1): cc.b,
            (0, 1, 2, 3): cc.c,
            (2, 3, 2, 3): cc.d,
            (0, 2, 0, 2): cc.r,
            (0, 2, 1, 3): cc.r,
            (1, 2, 0, 3): -cc.r,
        }
        rel = 0.0
        for idx, val in want.items():
            rel = max(rel, abs(r_fd[idx] - val) / max(abs(val), 1e-3))
        return rel

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rels = list(pool.map(curvature_residual, pts))
    else:
        rels = [curvature_residual(pt) for pt in pts]
    results.append(_check("oracle-curvature-match", max(rels), 1e-5))

    kd = max(oracle_mod.kahler_defect_fd(flat, pt, cfg.numerics.fd_step) for pt in pts[:3])
    results.append(_check("oracle-kahler-parallel", kd, 1e-6))

    for r in results:
        print(r.line(), file=stream)
    return results


def _flat_base_variant(p: SKRProfile) -> SKRProfile:
    """Copy of the profile with base curvature zero, as realized by the chart."""
    if p.base_curv == 0.0:
        return p
    kwargs = dict(
        mode=p.mode,
        c_bar=p.c_bar,
        a_const=p.a_const,
        base_curv=0.0,
        tau_min=p.tau_min,
        base_area=p.base_area,
        fiber_period=p.fiber_period,
        phi=p.phi,
        phi_d=p.phi_d,
        phi_dd=p.phi_dd,
        q_fun=p.q_fun,
        q_fun_d=p.q_fun_d,
        q_fun_dd=p.q_fun_dd,
        label=p.label,
    )
    return SKRProfile(**kwargs)


def _oracle_points(p: SKRProfile, n: int) -> list:
    rng = np.random.default_rng(20240817)
    pts = []
    span = -p.tau_min
    for _ in range(n):
        tau = p.tau_min + span * rng.uniform(0.25, 0.95)
        pts.append(
            oracle_mod.ChartPoint(
                tau=float(tau),
                s=float(rng.uniform(0.0, 1.0)),
                x=float(rng.uniform(-0.4, 0.4)),
                y=float(rng.uniform(-0.4, 0.4)),
            )
        )
    return pts


def run_oracle(cfg: RunConfig, stream=None) -> list:
    """Standalone finite-difference validation (subset of run_check)."""
    stream = stream if stream is not None else sys.stdout
    p = _flat_base_variant(build_profile(cfg))
    pts = _oracle_points(p, 10)
    results = []
    worst_rel, worst_vanish, worst_sym = 0.0, 0.0, 0.0
    for pt in pts:
        r_fd = oracle_mod.riemann_frame_fd(p, pt, cfg.numerics.fd_step)
        cc = skr.curvature_components(p, pt.tau)
        pairs = [
            (r_fd[0, 1, 0, 1], cc.b),
            (r_fd[0, 1, 2, 3], cc.c),
            (r_fd[2, 3, 2, 3], cc.d),
            (r_fd[0, 2, 0, 2], cc.r),
        ]
        for got, want in pairs:
            worst_rel = max(worst_rel, abs(got - want) / max(abs(want), 1e-3))
        # exactly three indices drawn from the vertical pair
        for idx in ((2, 3, 2, 0), (2, 3, 2, 1), (0, 2, 2, 3), (1, 3, 2, 3)):
            worst_vanish = max(worst_vanish, abs(r_fd[idx]))
        worst_sym = max(
            worst_sym,
            float(np.max(np.abs(r_fd + r_fd.transpose(1, 0, 2, 3)))),
            float(np.max(np.abs(r_fd + r_fd.transpose(0, 1, 3, 2)))),
            float(np.max(np.abs(r_fd - r_fd.transpose(2, 3, 0, 1)))),
        )
    results.append(_check("oracle-curvature-match", worst_rel, 1e-5))
    results.append(_check("oracle-three-index-vanishing", worst_vanish, 1e-6))
    results.append(_check("oracle-curvature-symmetries", worst_sym, 1e-6))
    results.append(
        _check(
            "oracle-kahler-parallel",
            max(oracle_mod.kahler_defect_fd(p, pt, cfg.numerics.fd_step) for pt in pts[:4]),
            1e-6,
        )
    )
    results.append(
        _check(
            "oracle-pregeodesic",
            max(oracle_mod.pregeodesic_defect_fd(p, pt, cfg.numerics.fd_step) for pt in pts[:4]),
            1e-8,
        )
    )
    for r in results:
        print(r.line(), file=stream)
    return results


# --------------------------------------------------------------------------- CLI

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equichar",
        description="Equivariant characteristic forms and eta invariants of SKR geometries",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_out in (
        ("check", False),
        ("lform", True),
        ("transgression", True),
        ("eta", True),
        ("oracle", False),
    ):
        cmd = sub.add_parser(name)
        cmd.add_argument("config", help="path to the JSON run configuration")
        cmd.add_argument(
            "-o",
            "--out",
            default=None,
            required=False,
            help="output directory" + ("" if needs_out else " (unused)"),
        )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out_dir = args.out or cfg.output_dir or "."
    try:
        if args.command == "check":
            results = run_check(cfg)
            return 0 if all(r.passed for r in results) else 1
        if args.command == "oracle":
            results = run_oracle(cfg)
            return 0 if all(r.passed for r in results) else 1
        if args.command == "lform":
            paths = emit_tables(cfg, out_dir, which=("lform",))
        elif args.command == "transgression":
            paths = emit_tables(cfg, out_dir, which=("transgression",))
        else:
            paths = emit_tables(cfg, out_dir, which=("lform", "transgression", "report"))
        for path in paths:
            print(path)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except EquicharError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
