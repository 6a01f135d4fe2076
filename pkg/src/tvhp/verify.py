"""Registry of verifiable identities and the report format.

Every registered identity has a single-point runner (used by ``tvhp
verify``) and a default parameter grid (used by ``tvhp verify-all``). A
runner returns an :class:`Outcome`; :func:`run_identity` and
:func:`run_grid` turn outcomes into :class:`VerificationReport` objects.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Any, Callable

from . import boson, fock, hermite, quadrature
from .errors import TVHPError
from .hermite import GenParams, SqueezeParam

__all__ = [
    "SCHEMA_VERSION",
    "EXACT",
    "TOLERANCES",
    "IdentityDescriptor",
    "VerificationReport",
    "Outcome",
    "Options",
    "REGISTRY",
    "run_identity",
    "run_grid",
    "verify_all",
    "load_schema",
    "reports_to_json",
    "reports_from_json",
]

SCHEMA_VERSION = "1.0"
EXACT = "exact"

# default tolerance per oracle class
TOLERANCES = {
    "symbolic": EXACT,
    "quadrature": 1e-12,
    "series": 1e-8,
}


@dataclass
class VerificationReport:
    id: str
    module: str
    parameters: dict
    residual: float | str | None
    tolerance: float | str
    verdict: str
    notes: str = ""
    wall_time: float | None = None
    details: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> VerificationReport:
        return cls(**data)


@dataclass
class Outcome:
    """Result of one runner call, before it is judged against a tolerance.

    ``residual`` is a float, or ``EXACT`` when a symbolic check found no
    difference; a failed symbolic check reports the largest coefficient
    difference as a float.
    """

    residual: float | str
    details: dict = field(default_factory=dict)
    notes: str = ""


@dataclass(frozen=True)
class Options:
    """Batch-wide overrides from the command line."""

    tol: float | None = None
    max_degree: int | None = None
    cutoff: int = 40
    quad_order: int | None = None


@dataclass(frozen=True)
class IdentityDescriptor:
    id: str
    module: str
    oracle: str
    runner: Callable[..., Outcome]
    grid: Callable[[Options], list[dict]]
    description: str = ""

    def tolerance(self, override: float | None = None) -> float | str:
        if self.oracle == "symbolic":
            return EXACT
        return TOLERANCES[self.oracle] if override is None else override


def _judge(residual, tolerance) -> str:
    if residual == EXACT:
        return "pass"
    if residual is None or isinstance(residual, str) or not math.isfinite(residual):
        return "fail"
    if tolerance == EXACT:
        return "fail"
    return "pass" if residual <= tolerance else "fail"


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b) if b else abs(a - b)


def _exact(verdict: boson.ExactVerdict) -> Outcome:
    details = {k: v for k, v in verdict.details.items()}
    if verdict.passed:
        return Outcome(EXACT, details, verdict.notes)
    details["difference"] = str(verdict.difference)
    return Outcome(verdict.max_abs_difference, details, verdict.notes)


def _cplx(z) -> Any:
    """JSON-friendly form of a scalar parameter."""
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _max_degree(opts: Options, default: int) -> int:
    return default if opts.max_degree is None else min(default, opts.max_degree)


# ---------------------------------------------------------------- runners


def _genfunc_single(t=0.3, t_prime=0.3, xi=0.5, v=None, M=30, **_):
    v = complex(xi).conjugate() if v is None else v
    p = GenParams(t=t, t_prime=t_prime)
    r = hermite.residual_genfunc_single(p, xi, v, M, relative=True)
    r5 = hermite.residual_genfunc_single(p, xi, v, max(M - 5, 0), relative=True)
    return Outcome(r, {"residual_at_M_minus_5": r5})


def _genfunc_double(s=0.3, t=0.3, x=0.5, y=0.5, x_prime=0.5, y_prime=0.5, M=30, **_):
    p = GenParams(t=t, s=s)
    r = hermite.residual_genfunc_double(p, x, y, x_prime, y_prime, M, relative=True)
    r5 = hermite.residual_genfunc_double(p, x, y, x_prime, y_prime, max(M - 5, 0), relative=True)
    return Outcome(r, {"residual_at_M_minus_5": r5})


def _genfunc_fixed_m(m=1, t=0.25, x=1.0, y=1.0, x_prime=1.0, y_prime=1.0, M=40, **_):
    t = complex(t)
    if t.imag:
        raise hermite.DomainError("t must be real and positive")
    args = (m, t.real, x, y, x_prime, y_prime)
    r = hermite.residual_genfunc_fixed_m(*args, M, relative=True)
    r5 = hermite.residual_genfunc_fixed_m(*args, max(M - 5, 0), relative=True)
    return Outcome(r, {"residual_at_M_minus_5": r5})


def _laguerre_genfunc(s=0.4, x=1.5, M=60, **_):
    r = hermite.residual_laguerre_genfunc(s, x, M, relative=True)
    r5 = hermite.residual_laguerre_genfunc(s, x, max(M - 5, 0), relative=True)
    return Outcome(r, {"residual_at_M_minus_5": r5})


def _laguerre_relation(m=2, x=None, y=None, **_):
    diff = hermite.laguerre_relation_difference(m)
    details = {}
    if x is not None and y is not None:
        details["numeric_residual"] = hermite.check_laguerre_relation(m, x, y)
    if diff:
        return Outcome(max(abs(complex(c)) for c in diff.terms.values()), details)
    return Outcome(EXACT, details)


def _op(fn):
    def run(m=2, n=2, **_):
        return _exact(fn(m, n))
    return run


def _factor_normal(K=8, **_):
    return _exact(boson.check_factorization_normal(K))


def _factor_antinormal(K=8, **_):
    return _exact(boson.check_factorization_antinormal(K))


def _op_laguerre(m=1, K=8, **_):
    return _exact(boson.check_identity_laguerre_operator(m, max(K, m)))


def _int_forward(m=1, n=1, alpha=1 + 1j, q=None, **_):
    alpha = complex(alpha)
    value = quadrature.integral_tvhp_forward(m, n, alpha, q)
    expected = alpha**m * alpha.conjugate() ** n
    return Outcome(_rel(value, expected), {"value": _cplx(value), "expected": _cplx(expected)})


def _int_reciprocal(m=1, n=1, alpha=1 + 1j, q=None, **_):
    value = quadrature.integral_tvhp_reciprocal(m, n, alpha, q)
    expected = quadrature.tvhp_reciprocal_closed_form(m, n, alpha)
    via_forward = quadrature.mutual_transform(m, n, alpha, q)
    residual = max(_rel(value, expected), _rel(via_forward, expected))
    return Outcome(residual, {
        "value": _cplx(value),
        "expected": _cplx(expected),
        "via_forward_integrals": _cplx(via_forward),
    })


def _int_gaussian(eta=-1.0, f=1.0, g=1.0, q=24, **_):
    spec = quadrature.GaussianIntegralSpec(eta, f, g)
    q = q or 24
    analytic = quadrature.gaussian_integral_analytic(spec)
    numeric = quadrature.gaussian_integral_numeric(spec, q)
    refined = quadrature.gaussian_integral_numeric(spec, q + 8)
    return Outcome(_rel(numeric, analytic), {
        "numeric": _cplx(numeric),
        "analytic": _cplx(analytic),
        "change_q_plus_8": abs(refined - numeric),
    })


def _erratum_note(published, factor_name="cosh^2(lambda)"):
    return (f"published closed form gives {published:.15g}; the direct value is larger by {factor_name}, "
            "the squared sech(lambda) normalization of the squeezed vacuum")


def _int_laguerre_product(m=1, tau=0.3, q=None, cutoff=40, **_):
    sq = SqueezeParam.from_tau(tau)
    res = quadrature.integral_laguerre_product(m, sq, q)
    norm = fock.psv_norm_squared(m, sq, cutoff)
    via_norm = norm.numeric / (math.factorial(m) ** 2 * tau ** (2 * m)) if m else norm.numeric
    residual = max(_rel(res.numeric, res.corrected_value), _rel(res.numeric, via_norm))
    return Outcome(residual, {
        "numeric": res.numeric,
        "published_value": res.published_value,
        "corrected_value": res.corrected_value,
        "via_state_norm": via_norm,
    }, _erratum_note(res.published_value))


def _psv_state(m=1, tau=0.5, cutoff=40, **_):
    return Outcome(fock.psv_state_residual(m, SqueezeParam.from_tau(tau), cutoff))


def _psv_norm(m=1, tau=0.5, cutoff=40, **_):
    sq = SqueezeParam.from_tau(tau)
    rep = fock.psv_norm_squared(m, sq, cutoff)
    closed = fock.psv_norm_closed_sum(m, tau)
    residual = max(_rel(rep.numeric, closed), _rel(rep.ratio, rep.expected_ratio))
    return Outcome(residual, {
        "numeric": rep.numeric,
        "closed_sum": closed,
        "published_value": rep.published_value,
        "ratio": rep.ratio,
        "cosh2_lambda": rep.expected_ratio,
    }, _erratum_note(rep.published_value))


def _completeness(basis_max=4, q=24, **_):
    return Outcome(fock.completeness_gram(basis_max, q or 24))


def _eigen(xi=1 + 1j, cutoff=40, **_):
    r1, r2 = fock.eigen_residual(xi, cutoff)
    return Outcome(max(r1, r2), {"res1": r1, "res2": r2})


# ------------------------------------------------------------------ grids


def _grid_genfunc_single(o):
    pts = [(0.3, 0.3, 0.5), (1.0, 1j, 0.6 + 0.8j), (-0.7 + 0.5j, 0.5, 1j), (0.5, 0.0, 1.0)]
    return [{"t": t, "t_prime": tp, "xi": xi, "M": 30} for t, tp, xi in pts]


def _grid_genfunc_double(o):
    pts = [(0.3, 0.3, (0.5, 0.5, 0.5, 0.5)), (0.0, 0.3, (1.0, -0.5, 0.2j, 1.0)),
           (0.5, -0.4j, (0.3 + 0.4j, 1.0, -1.0, 0.5))]
    return [{"s": s, "t": t, "x": x, "y": y, "x_prime": xp, "y_prime": yp, "M": 30}
            for s, t, (x, y, xp, yp) in pts]


def _grid_genfunc_fixed_m(o):
    md = _max_degree(o, 3)
    return [{"m": m, "t": t, "x": 1.0, "y": 1.0, "x_prime": 1.0, "y_prime": 1.0, "M": 40}
            for m in range(md + 1) for t in (0.1, 0.25)] + [
            {"m": md, "t": 0.25, "x": 0.3 + 1j, "y": -0.5, "x_prime": 0.7j, "y_prime": 1.2, "M": 40}]


def _grid_laguerre_genfunc(o):
    return [{"s": s, "x": x, "M": 60} for s in (0.4, -0.3 + 0.2j) for x in (1.5, -0.5)]


def _grid_laguerre_relation(o):
    return [{"m": m, "x": 0.7, "y": -1.3} for m in range(_max_degree(o, 8) + 1)]


def _grid_mn(default):
    def grid(o):
        md = _max_degree(o, default)
        return [{"m": m, "n": n} for m in range(md + 1) for n in range(md + 1)]
    return grid


def _grid_K(o):
    return [{"K": _max_degree(o, 8) if o.max_degree is not None else 8}]


def _grid_op_laguerre(o):
    md = _max_degree(o, 3)
    return [{"m": m, "K": max(8 if o.max_degree is None else o.max_degree, m)} for m in range(md + 1)]


_ALPHAS = (0.5, 2.0, 1.3 - 0.4j, 2 * complex(math.cos(1), math.sin(1)))


def _grid_int(default):
    def grid(o):
        md = _max_degree(o, default)
        return [{"m": m, "n": n, "alpha": a, "q": o.quad_order}
                for m in range(md + 1) for n in range(md + 1) for a in _ALPHAS]
    return grid


def _grid_int_gaussian(o):
    q = o.quad_order or 24
    return [{"eta": eta, "f": f, "g": g, "q": q} for eta, f, g in (
        (-1.0, 0.0, 0.0), (-2.0, 0.0, 0.0), (-1.0, 1.0, 1.0), (-1.0, 0.3j, -0.3j),
        (-1.0, 1.5, -1.5j), (-1.5 + 0.5j, 1.0 + 0.5j, 0.8))]


def _grid_squeezed(o):
    md = _max_degree(o, 3)
    return [{"m": m, "tau": tau, "cutoff": o.cutoff, "q": o.quad_order}
            for m in range(md + 1) for tau in (0.3, 0.5)]


def _grid_completeness(o):
    return [{"basis_max": _max_degree(o, 4), "q": o.quad_order or 24}]


def _grid_eigen(o):
    return [{"xi": xi, "cutoff": o.cutoff} for xi in (0.0, 1.0, 1 + 1j, 1.5j)]


def _d(id, module, oracle, runner, grid, description):
    return IdentityDescriptor(id, module, oracle, runner, grid, description)


REGISTRY: dict[str, IdentityDescriptor] = {d.id: d for d in [
    _d("genfunc-single", "hermite-core", "series", _genfunc_single, _grid_genfunc_single,
       "double-index generating function of H_{m,n}"),
    _d("genfunc-double", "hermite-core", "series", _genfunc_double, _grid_genfunc_double,
       "product generating function sum s^m t^n H H /(m!n!)"),
    _d("genfunc-fixed-m", "hermite-core", "series", _genfunc_fixed_m, _grid_genfunc_fixed_m,
       "single-index sum at fixed m"),
    _d("laguerre-genfunc", "hermite-core", "series", _laguerre_genfunc, _grid_laguerre_genfunc,
       "Laguerre generating function"),
    _d("laguerre-relation", "hermite-core", "symbolic", _laguerre_relation, _grid_laguerre_relation,
       "H_{m,m}(x,y) = (-1)^m m! L_m(xy)"),
    _d("op-normal", "boson-algebra", "symbolic", _op(boson.check_identity_normal), _grid_mn(6),
       "H_{m,n}(a+b+, a+ +b) = :(a+b+)^m (a+ +b)^n:"),
    _d("op-antinormal-scaled", "boson-algebra", "symbolic", _op(boson.check_identity_antinormal_scaled),
       _grid_mn(6), "antinormal expansion with sqrt(2)-scaled arguments"),
    _d("op-reciprocal", "boson-algebra", "symbolic", _op(boson.check_identity_reciprocal), _grid_mn(6),
       "(a+b+)^m (a+ +b)^n = i^{m+n} :H_{m,n}(-i(a+b+), -i(a+ +b)):"),
    _d("op-single-mode", "boson-algebra", "symbolic", _op(boson.check_identity_single_mode), _grid_mn(6),
       "a^n a+^m = (-i)^{m+n} :H_{m,n}(i a+, i a):"),
    _d("op-antinormal-single", "boson-algebra", "symbolic", _op(boson.check_identity_antinormal_single),
       _grid_mn(6), "antinormal H_{m,n}(a+, a) = a+^m a^n"),
    _d("factor-normal", "boson-algebra", "symbolic", _factor_normal, _grid_K,
       "normal-ordered closed form of e^{s ab} e^{t a+b+}"),
    _d("factor-antinormal", "boson-algebra", "symbolic", _factor_antinormal, _grid_K,
       "antinormal-ordered closed form of e^{t a+b+} e^{s ab}"),
    _d("op-laguerre", "boson-algebra", "symbolic", _op_laguerre, _grid_op_laguerre,
       "a^m b^m e^{tau a+b+} as a Laguerre polynomial in normal order"),
    _d("int-forward", "gauss-quad", "quadrature", _int_forward, _grid_int(6),
       "int H_{m,n} e^{-|xi-alpha|^2} = alpha^m alpha*^n"),
    _d("int-reciprocal", "gauss-quad", "quadrature", _int_reciprocal, _grid_int(5),
       "int xi^m xi*^n e^{-|xi-alpha|^2} = i^{m+n} H_{m,n}(-i alpha, -i alpha*)"),
    _d("int-gaussian", "gauss-quad", "quadrature", _int_gaussian, _grid_int_gaussian,
       "basic complex Gaussian integral"),
    _d("int-laguerre-product", "gauss-quad", "series", _int_laguerre_product, _grid_squeezed,
       "4D Laguerre-product Gaussian integral"),
    _d("psv-state", "fock-numeric", "series", _psv_state, _grid_squeezed,
       "photon-subtracted squeezed vacuum as Laguerre excitation"),
    _d("psv-norm", "fock-numeric", "series", _psv_norm, _grid_squeezed,
       "norm of the photon-subtracted squeezed vacuum"),
    _d("completeness", "fock-numeric", "quadrature", _completeness, _grid_completeness,
       "Gram matrix of <m,n|xi> over the plane"),
]}

# checks reachable through ``tvhp verify`` but outside the fixed batch registry
EXTRAS: dict[str, IdentityDescriptor] = {
    "eigen": _d("eigen", "fock-numeric", "series", _eigen, _grid_eigen,
                "(a+b+)|xi> = xi|xi> and (a+ +b)|xi> = xi*|xi> on the guarded block"),
}


def lookup(identity: str) -> IdentityDescriptor:
    if identity in REGISTRY:
        return REGISTRY[identity]
    if identity in EXTRAS:
        return EXTRAS[identity]
    raise KeyError(identity)


def _jsonable(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if v is None:
            continue
        out[k] = _cplx(v) if isinstance(v, complex) else v
    return out


def run_identity(identity: str, params: dict | None = None, tol: float | None = None,
                 timing: bool = True) -> VerificationReport:
    """Run one identity at one parameter point.

    Domain and usage errors propagate to the caller.
    """
    desc = lookup(identity)
    params = dict(params or {})
    tolerance = desc.tolerance(tol)
    start = time.perf_counter()
    outcome = desc.runner(**params)
    elapsed = time.perf_counter() - start
    return VerificationReport(
        id=desc.id,
        module=desc.module,
        parameters=_jsonable(params),
        residual=outcome.residual,
        tolerance=tolerance,
        verdict=_judge(outcome.residual, tolerance),
        notes=outcome.notes,
        wall_time=round(elapsed, 6) if timing else None,
        details=outcome.details,
    )


def _worse(a, b) -> bool:
    """Whether residual ``a`` is worse than ``b``."""
    if b is None:
        return False
    if a is None:
        return True
    if b == EXACT:
        return a != EXACT
    if a == EXACT:
        return False
    return a > b


def run_grid(identity: str, opts: Options = Options(), timing: bool = True) -> VerificationReport:
    """Run an identity over its default grid; never raises.

    The report carries the worst residual, the grid size and the worst
    point. Errors raised by a runner become a failing report.
    """
    desc = lookup(identity)
    tolerance = desc.tolerance(opts.tol)
    start = time.perf_counter()
    worst = EXACT if desc.oracle == "symbolic" else 0.0
    worst_point, worst_outcome = None, None
    notes = []
    points = desc.grid(opts)
    try:
        for point in points:
            outcome = desc.runner(**point)
            if worst_outcome is None or _worse(outcome.residual, worst):
                worst, worst_point, worst_outcome = outcome.residual, point, outcome
            if outcome.notes and outcome.notes not in notes and len(notes) < 3:
                notes.append(outcome.notes)
    except (TVHPError, ValueError, ArithmeticError) as exc:
        worst = None
        notes.append(f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - start
    details = {"points": len(points)}
    if worst_point is not None:
        details["worst_point"] = _jsonable(worst_point)
        details.update({f"worst_{k}": v for k, v in worst_outcome.details.items()})
    return VerificationReport(
        id=desc.id,
        module=desc.module,
        parameters=_grid_summary(points),
        residual=worst,
        tolerance=tolerance,
        verdict=_judge(worst, tolerance),
        notes="; ".join(notes),
        wall_time=round(elapsed, 6) if timing else None,
        details=details,
    )


def _grid_summary(points: list[dict]) -> dict:
    summary: dict = {}
    for p in points:
        for k, v in _jsonable(p).items():
            vals = summary.setdefault(k, [])
            if v not in vals:
                vals.append(v)
    return summary


def _grid_worker(args):
    identity, opts, timing = args
    return run_grid(identity, opts, timing)


def verify_all(opts: Options = Options(), jobs: int | None = None, timing: bool = True) -> list[VerificationReport]:
    """Run every registered identity; reports come back in registry order."""
    ids = list(REGISTRY)
    jobs = jobs or os.cpu_count() or 1
    if jobs <= 1:
        return [run_grid(i, opts, timing) for i in ids]
    # processes, not threads: mpmath's working precision is process-global
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_grid_worker, [(i, opts, timing) for i in ids]))


# ----------------------------------------------------------------- schema


def load_schema() -> dict:
    return json.loads(resources.files("tvhp").joinpath("report_schema.json").read_text())


def reports_to_json(reports: list[VerificationReport], indent: int | None = 2) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=indent, allow_nan=False)


def reports_from_json(text: str) -> list[VerificationReport]:
    return [VerificationReport.from_dict(d) for d in json.loads(text)]
