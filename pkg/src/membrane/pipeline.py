"""Per-domain bound, verification, sweep and classification runs."""
from __future__ import annotations

import contextlib
import math
import time
from dataclasses import asdict, dataclass

from . import __version__, bounds, geometry, oracle
from .errors import AlphaOutOfRange, NonintegrableExponent, NumericalFailure
from .maps import Family
from .quad import QuadConfig, lalpha_norm
from .specfile import DomainEntry

SCHEMA_ID = "membrane.report/1"
CLASSIFY_SCHEMA_ID = "membrane.classify/1"
DEFAULT_RESOLUTION = 128
TOL_SMOOTH = 0.02
TOL_SC = 0.05


class StageFailure(Exception):
    """A numerical failure tagged with the domain and pipeline stage it came from."""

    def __init__(self, domain, stage, cause):
        super().__init__(domain, stage, cause)    # args kept whole so it pickles
        self.domain, self.stage, self.cause = domain, stage, cause

    def __str__(self):
        return f"domain {self.domain!r}, stage {self.stage}: {type(self.cause).__name__}: {self.cause}"


@contextlib.contextmanager
def stage(domain, name):
    try:
        yield
    except NumericalFailure as exc:
        raise StageFailure(domain, name, exc) from exc


def mesh_tolerance(spec):
    return TOL_SC if spec.family is Family.SCHWARZ_CHRISTOFFEL else TOL_SMOOTH


def _alpha_json(a):
    return "inf" if math.isinf(a) else a


@dataclass(frozen=True)
class Options:
    cfg: QuadConfig
    resolution: int | None = None      # overrides runs.oracle_resolution when set
    timing: bool = False


def _provenance(opts, mesh_h=None, wall=None):
    prov = {
        "tool_version": __version__,
        "quad": asdict(opts.cfg),
        "mesh_h": mesh_h,
    }
    if opts.timing:
        prov["wall_time_seconds"] = wall
    return prov


def compute_report(entry: DomainEntry, opts: Options):
    """BoundReport plus the alpha table and the printed rectangle constant."""
    spec, runs, name, cfg = entry.map, entry.runs, entry.name, opts.cfg
    with stage(name, "area"):
        area = geometry.area(spec, cfg)
    with stage(name, "diameter"):
        diam = geometry.diameter(spec)
    with stage(name, "convexity"):
        margin = geometry.convexity_margin(spec)

    table = []
    lower_A = lower_B = lower_C = lower_C_printed = None
    alpha_used, norm_alpha = math.inf, None
    if spec.base.is_disc:
        for a in runs.alphas:
            if math.isinf(a):
                continue
            with stage(name, f"lower_A(alpha={a:g})"):
                norm = lalpha_norm(spec, a, cfg)
                table.append({"alpha": a, "norm_alpha": norm,
                              "lower_bound": bounds.lower_bound_A(spec, a, cfg, norm=norm)})
        if runs.optimize:
            with stage(name, "optimize_alpha"):
                a_star, b_star = bounds.optimize_alpha(spec, runs.alpha_max, cfg)
                table.append({"alpha": a_star, "norm_alpha": lalpha_norm(spec, a_star, cfg),
                              "lower_bound": b_star, "optimized": True})
        if table:
            best = max(table, key=lambda r: r["lower_bound"])
            alpha_used, norm_alpha, lower_A = best["alpha"], best["norm_alpha"], best["lower_bound"]
        if spec.bounded_derivative:
            with stage(name, "lower_B"):
                lower_B = bounds.lower_bound_B(spec, cfg)
            if norm_alpha is None:
                norm_alpha = lalpha_norm(spec, math.inf, cfg)
    else:
        for a in runs.alphas:
            if math.isinf(a):
                continue
            with stage(name, f"lower_C(alpha={a:g})"):
                val, printed = bounds.lower_bound_C(spec, a, cfg, with_printed=True)
                table.append({"alpha": a, "norm_alpha": lalpha_norm(spec, a, cfg),
                              "lower_bound": val, "lower_bound_printed_constant": printed})
        with stage(name, "lower_C"):
            lower_C = bounds.lower_bound_C(spec, math.inf, cfg)
            norm_alpha = lalpha_norm(spec, math.inf, cfg)
        finite = [r for r in table if r["lower_bound"] > lower_C]
        if finite:
            best = max(finite, key=lambda r: r["lower_bound"])
            alpha_used, norm_alpha, lower_C = best["alpha"], best["norm_alpha"], best["lower_bound"]
            lower_C_printed = best["lower_bound_printed_constant"]

    uniform, uniform_margin = False, None
    if spec.base.is_disc and spec.bounded_derivative:
        mode = runs.diameter_lower_bound if runs.diameter_lower_bound is not None else diam
        with stage(name, "classify"):
            uniform, uniform_margin = bounds.classify_conformal_uniform(spec, mode, cfg)

    report = bounds.BoundReport(
        domain_name=name,
        alpha_used=alpha_used,
        norm_alpha=norm_alpha,
        lower_A=lower_A,
        lower_B=lower_B,
        lower_C=lower_C,
        upper_polya=bounds.polya_upper(area),
        lower_pw=bounds.payne_weinberger_lower(diam) if margin > 0 else None,
        area=area,
        diameter=diam,
        is_conformal_uniform=bool(uniform),
        convexity_margin=margin,
    )
    extras = {"alpha_table": table, "lower_C_printed_constant": lower_C_printed,
              "conformal_uniform_margin": uniform_margin}
    return report, extras


def _verdicts(report, tol, plane_covering):
    lam = report.oracle_lambda1
    out, ratios = {}, {}
    for key in ("lower_A", "lower_B", "lower_C", "lower_pw"):
        val = getattr(report, key)
        if val is None or lam is None:
            out[key] = "NA"
            continue
        ratios[key] = val / lam
        out[key] = "PASS" if val <= lam * (1 + tol) else "FAIL"
    if lam is not None:
        ratios["upper_polya"] = report.upper_polya / lam
    if plane_covering and lam is not None:
        out["upper_polya"] = "PASS" if lam <= report.upper_polya * (1 + tol) else "FAIL"
    else:
        out["upper_polya"] = "NA"
    return out, ratios


def build_record(entry: DomainEntry, opts: Options, *, verify=False):
    t0 = time.perf_counter()
    report, extras = compute_report(entry, opts)
    mesh_h = None
    tol = mesh_tolerance(entry.map)
    record_extra = {}
    if verify:
        res = opts.resolution or entry.runs.oracle_resolution or DEFAULT_RESOLUTION
        with stage(entry.name, "oracle"):
            result = oracle.solve_map(entry.map, res)
            report.oracle_lambda1 = oracle.first_nontrivial(result)
        mesh_h = result.mesh_h
        verdicts, ratios = _verdicts(report, tol, entry.runs.plane_covering)
        record_extra = {"oracle_resolution": res, "oracle_eigenvalues": result.eigenvalues.tolist(),
                        "oracle_weight_capped": result.weight_capped,
                        "verdicts": verdicts, "ratios": ratios}
    rec = {"schema": SCHEMA_ID}
    rec.update(report.to_dict())
    rec["alpha_used"] = _alpha_json(report.alpha_used)
    rec.update({
        "map": entry.map.describe(),
        "plane_covering": entry.runs.plane_covering,
        "mesh_tolerance": tol,
        "conformal_uniform_margin": extras["conformal_uniform_margin"],
        "lower_C_printed_constant": extras["lower_C_printed_constant"],
        "alpha_table": [dict(r, alpha=_alpha_json(r["alpha"])) for r in extras["alpha_table"]],
    })
    rec.update(record_extra)
    rec["provenance"] = _provenance(opts, mesh_h, time.perf_counter() - t0)
    return rec


def classify_record(entry: DomainEntry, opts: Options):
    spec, name, cfg = entry.map, entry.name, opts.cfg
    with stage(name, "diameter"):
        diam = geometry.diameter(spec)
    with stage(name, "convexity"):
        margin = geometry.convexity_margin(spec)
    uniform = uniform_margin = bound_B = None
    applicable = spec.base.is_disc and spec.bounded_derivative
    if applicable:
        mode = entry.runs.diameter_lower_bound
        with stage(name, "classify"):
            uniform, uniform_margin = bounds.classify_conformal_uniform(
                spec, "computed" if mode is None else mode, cfg)
            bound_B = bounds.lower_bound_B(spec, cfg)
    return {
        "schema": CLASSIFY_SCHEMA_ID,
        "name": name,
        "map": spec.describe(),
        "is_conformal_uniform": uniform,
        "margin": uniform_margin,
        "diameter": diam,
        "diameter_mode": "computed" if entry.runs.diameter_lower_bound is None else "lower_bound",
        "diameter_lower_bound": entry.runs.diameter_lower_bound,
        "convexity_margin": margin,
        "pw_bound": bounds.payne_weinberger_lower(diam),
        "pw_applicable": margin > 0,
        "bound_B": bound_B,
    }


NONINTEGRABLE = "NONINTEGRABLE"
ALPHA_OUT_OF_RANGE = "ALPHA_OUT_OF_RANGE"


def sweep_rows(entry: DomainEntry, alphas, opts: Options):
    """(alpha, norm, bound) rows; markers replace values that do not exist."""
    spec, cfg = entry.map, opts.cfg
    rows = []
    for a in alphas:
        with stage(entry.name, f"sweep(alpha={a:g})"):
            try:
                norm = lalpha_norm(spec, a, cfg)
            except NonintegrableExponent:
                rows.append((a, math.inf, NONINTEGRABLE))
                continue
            try:
                if math.isinf(a):
                    bound = (bounds.lower_bound_B(spec, cfg) if spec.base.is_disc
                             else bounds.lower_bound_C(spec, a, cfg))
                elif spec.base.is_disc:
                    bound = bounds.lower_bound_A(spec, a, cfg, norm=norm)
                else:
                    bound = bounds.lower_bound_C(spec, a, cfg)
            except AlphaOutOfRange:
                bound = ALPHA_OUT_OF_RANGE
        rows.append((a, norm, bound))
    return rows
