"""Command-line front end: configuration ingestion and machine-readable output.

Every command reads one JSON configuration document (see README for the
schema) and writes either CSV (header row first, ``%.17g`` numbers, the
token ``inf`` for infinities) or a structured JSON document.

Exit codes: 0 success, 2 validation, 3 vacuum, 4 convergence,
5 classification conflict, 6 no admissible structure, 1 anything else.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import coupled
from .coupled import SolveOptions
from .errors import (
    BranchUndefinedError,
    ClassificationConflictError,
    ConfigError,
    ConvergenceError,
    NoAdmissibleStructureError,
    NonPhysicalStateError,
    NoSolutionError,
    ParseError,
    SingularEulerError,
    ValidationError,
    VacuumError,
)
from .gas import GasModel, GasState, mach_number
from .stationary import (
    Branch,
    SourceCoefficients,
    admissible_sets,
    branch_mach,
    critical_machs,
    downstream_mach,
    state_ratios,
    upstream_mach,
)
from .waves import WaveKind

__all__ = [
    "GridSpec",
    "CurveSpec",
    "SweepSpec",
    "ProblemConfig",
    "OutputRecord",
    "parse_config",
    "emit_config",
    "cmd_solve",
    "cmd_profile",
    "cmd_curve",
    "cmd_critical",
    "cmd_sweep",
    "render",
    "exit_code_for",
    "main",
]

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_VALIDATION = 2
EXIT_VACUUM = 3
EXIT_CONVERGENCE = 4
EXIT_CONFLICT = 5
EXIT_NO_ADMISSIBLE = 6

# ------------------------------------------------------------------ config


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid in ``xi = x/t``; with ``t`` set the bounds are in ``x``."""

    xi_min: float = -2.0
    xi_max: float = 2.0
    count: int = 201
    t: float | None = None


@dataclass(frozen=True)
class CurveSpec:
    kind: str = "forward"
    m_min: float = 0.01
    m_max: float = 3.0
    count: int = 300
    branch: str = "subsonic"


@dataclass(frozen=True)
class SweepSpec:
    """Phase-diagram sweep over upstream/downstream Mach numbers and ``k``.

    Each point uses ``UL = (rho_left, ml * a_L, p_left)`` and
    ``UR = (rho_right, mr * a_R, p_right)`` with coefficients
    ``(k1, k2, k3)`` where ``k3`` is chosen so that the composite gain is ``k``.
    """

    ml: tuple = (0.1, 3.0, 50)
    mr: tuple = (0.1, 3.0, 50)
    k: tuple = (-0.2, 0.0, 0.2)
    k1: float = 0.1
    k2: float = 0.1
    rho_left: float = 1.0
    p_left: float = 1.0
    rho_right: float = 0.5
    p_right: float = 0.4
    sample: str = "grid"
    count: int = 1000
    workers: int = 4


@dataclass(frozen=True)
class ProblemConfig:
    gamma: float = 1.4
    left: GasState | None = None
    right: GasState | None = None
    coefficients: SourceCoefficients = field(default_factory=SourceCoefficients)
    solver: SolveOptions = field(default_factory=SolveOptions)
    grid: GridSpec = field(default_factory=GridSpec)
    curve: CurveSpec = field(default_factory=CurveSpec)
    sweep: SweepSpec = field(default_factory=SweepSpec)

    @property
    def model(self) -> GasModel:
        return GasModel(self.gamma)


_TOP_KEYS = ("gamma", "left", "right", "coefficients", "solver", "grid", "curve", "sweep")


def _obj(doc, path):
    if not isinstance(doc, dict):
        raise ParseError("expected an object", path)
    return doc


def _no_extra(doc, allowed, path):
    extra = sorted(set(doc) - set(allowed))
    if extra:
        where = f"{path}.{extra[0]}" if path else extra[0]
        raise ParseError("unknown key", where)


def _num(doc, key, path, default=None, required=False):
    where = f"{path}.{key}" if path else key
    if key not in doc:
        if required:
            raise ParseError("missing required field", where)
        return default
    v = doc[key]
    # null is allowed only for optional fields without a numeric default
    if v is None and default is None and not required:
        return None
    if isinstance(v, str) and v.strip().lower() in ("inf", "+inf", "-inf"):
        return float(v)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"expected a number, got {v!r}", where)
    v = float(v)
    if not math.isfinite(v):
        raise ValidationError(f"{where} must be finite", f"{where} finite")
    return v


def _int(doc, key, path, default):
    where = f"{path}.{key}" if path else key
    if key not in doc:
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"expected an integer, got {v!r}", where)
    return v


def _str(doc, key, path, default, choices):
    where = f"{path}.{key}" if path else key
    if key not in doc:
        return default
    v = doc[key]
    if not isinstance(v, str):
        raise ParseError(f"expected a string, got {v!r}", where)
    if v not in choices:
        raise ValidationError(f"{where} must be one of {', '.join(choices)}",
                              f"{where} in {{{', '.join(choices)}}}")
    return v


def _require(cond, constraint):
    if not cond:
        raise ValidationError(f"{constraint} required", constraint)


def _state(doc, path):
    doc = _obj(doc, path)
    _no_extra(doc, ("rho", "u", "p"), path)
    rho = _num(doc, "rho", path, required=True)
    u = _num(doc, "u", path, required=True)
    p = _num(doc, "p", path, required=True)
    _require(rho > 0.0, f"{path}.rho > 0")
    _require(p > 0.0, f"{path}.p > 0")
    return GasState(rho, u, p)


def _range3(doc, key, path, default):
    where = f"{path}.{key}"
    if key not in doc:
        return default
    v = doc[key]
    if not (isinstance(v, list) and len(v) == 3):
        raise ParseError("expected [min, max, count]", where)
    lo = _num({"v": v[0]}, "v", where)
    hi = _num({"v": v[1]}, "v", where)
    n = _int({"v": v[2]}, "v", where, None)
    _require(n >= 1, f"{where} count >= 1")
    _require(hi >= lo, f"{where} max >= min")
    return (lo, hi, n)


def parse_config(text: str) -> ProblemConfig:
    """Parse and validate a JSON configuration document.

    Raises
    ------
    ParseError
        Malformed document, wrong types or unknown keys; ``path`` names the field.
    ValidationError
        A value violates a named constraint, e.g. ``"k1 > -1"``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg} at line {exc.lineno}") from None
    doc = _obj(doc, "")
    _no_extra(doc, _TOP_KEYS, "")

    gamma = _num(doc, "gamma", "", 1.4)
    _require(gamma > 1.0, "gamma > 1")

    left = _state(doc["left"], "left") if "left" in doc else None
    right = _state(doc["right"], "right") if "right" in doc else None

    cdoc = _obj(doc.get("coefficients", {}), "coefficients")
    _no_extra(cdoc, ("k1", "k2", "k3"), "coefficients")
    ks = [_num(cdoc, name, "coefficients", 0.0) for name in ("k1", "k2", "k3")]
    for name, v in zip(("k1", "k2", "k3"), ks):
        _require(v > -1.0, f"{name} > -1")
    coeffs = SourceCoefficients(*ks)

    sdoc = _obj(doc.get("solver", {}), "solver")
    base = SolveOptions()
    _no_extra(sdoc, ("root_tol", "max_iter", "sonic_tol", "residual_tol"), "solver")
    vals = {}
    for name in ("root_tol", "sonic_tol", "residual_tol"):
        vals[name] = _num(sdoc, name, "solver", getattr(base, name))
        _require(vals[name] > 0.0, f"solver.{name} > 0")
    vals["max_iter"] = _int(sdoc, "max_iter", "solver", base.max_iter)
    _require(vals["max_iter"] > 0, "solver.max_iter > 0")
    solver = SolveOptions(**vals)

    gdoc = _obj(doc.get("grid", {}), "grid")
    _no_extra(gdoc, ("xi_min", "xi_max", "count", "t"), "grid")
    gbase = GridSpec()
    grid = GridSpec(
        xi_min=_num(gdoc, "xi_min", "grid", gbase.xi_min),
        xi_max=_num(gdoc, "xi_max", "grid", gbase.xi_max),
        count=_int(gdoc, "count", "grid", gbase.count),
        t=_num(gdoc, "t", "grid", None),
    )
    _require(grid.count >= 2, "grid.count >= 2")
    _require(grid.xi_max > grid.xi_min, "grid.xi_max > grid.xi_min")
    _require(grid.t is None or grid.t > 0.0, "grid.t > 0")

    vdoc = _obj(doc.get("curve", {}), "curve")
    _no_extra(vdoc, ("kind", "m_min", "m_max", "count", "branch"), "curve")
    vbase = CurveSpec()
    curve = CurveSpec(
        kind=_str(vdoc, "kind", "curve", vbase.kind, ("forward", "backward", "branch")),
        m_min=_num(vdoc, "m_min", "curve", vbase.m_min),
        m_max=_num(vdoc, "m_max", "curve", vbase.m_max),
        count=_int(vdoc, "count", "curve", vbase.count),
        branch=_str(vdoc, "branch", "curve", vbase.branch, ("subsonic", "supersonic")),
    )
    _require(curve.m_min > 0.0, "curve.m_min > 0")
    _require(curve.m_max >= curve.m_min, "curve.m_max >= curve.m_min")
    _require(curve.count >= 2, "curve.count >= 2")

    wdoc = _obj(doc.get("sweep", {}), "sweep")
    wbase = SweepSpec()
    _no_extra(wdoc, tuple(asdict(wbase)), "sweep")
    if "k" in wdoc:
        kv = wdoc["k"]
        if not (isinstance(kv, list) and kv):
            raise ParseError("expected a non-empty list of numbers", "sweep.k")
        kvals = tuple(_num({"v": x}, "v", f"sweep.k[{i}]") for i, x in enumerate(kv))
    else:
        kvals = wbase.k
    sweep = SweepSpec(
        ml=_range3(wdoc, "ml", "sweep", wbase.ml),
        mr=_range3(wdoc, "mr", "sweep", wbase.mr),
        k=kvals,
        k1=_num(wdoc, "k1", "sweep", wbase.k1),
        k2=_num(wdoc, "k2", "sweep", wbase.k2),
        rho_left=_num(wdoc, "rho_left", "sweep", wbase.rho_left),
        p_left=_num(wdoc, "p_left", "sweep", wbase.p_left),
        rho_right=_num(wdoc, "rho_right", "sweep", wbase.rho_right),
        p_right=_num(wdoc, "p_right", "sweep", wbase.p_right),
        sample=_str(wdoc, "sample", "sweep", wbase.sample, ("grid", "random")),
        count=_int(wdoc, "count", "sweep", wbase.count),
        workers=_int(wdoc, "workers", "sweep", wbase.workers),
    )
    for kv in sweep.k:
        _require(kv > -1.0, "sweep.k > -1")
    _require(sweep.k1 > -1.0, "sweep.k1 > -1")
    _require(sweep.k2 > -1.0, "sweep.k2 > -1")
    for name in ("rho_left", "p_left", "rho_right", "p_right"):
        _require(getattr(sweep, name) > 0.0, f"sweep.{name} > 0")
    _require(sweep.count >= 1, "sweep.count >= 1")
    _require(sweep.workers >= 1, "sweep.workers >= 1")

    return ProblemConfig(gamma, left, right, coeffs, solver, grid, curve, sweep)


def emit_config(cfg: ProblemConfig) -> str:
    """Serialize a configuration so that ``parse_config`` reproduces it."""
    doc = {"gamma": cfg.gamma}
    for name in ("left", "right"):
        s = getattr(cfg, name)
        if s is not None:
            doc[name] = {"rho": s.rho, "u": s.u, "p": s.p}
    c = cfg.coefficients
    doc["coefficients"] = {"k1": c.k1, "k2": c.k2, "k3": c.k3}
    doc["solver"] = asdict(cfg.solver)
    doc["grid"] = {k: v for k, v in asdict(cfg.grid).items() if v is not None}
    doc["curve"] = asdict(cfg.curve)
    sw = asdict(cfg.sweep)
    for key in ("ml", "mr", "k"):
        sw[key] = list(sw[key])
    doc["sweep"] = sw
    return json.dumps(doc, indent=2) + "\n"


# ------------------------------------------------------------------ output


@dataclass
class OutputRecord:
    """Result of one command: tabular rows and/or a metadata document."""

    header: tuple = ()
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK
    default_format: str = "csv"


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    if isinstance(v, np.integer):
        return int(v)
    return v


def _flatten(doc, prefix=""):
    out = []
    for k, v in doc.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out += _flatten(v, key + ".")
        elif isinstance(v, (list, tuple)) and any(isinstance(x, (dict, list, tuple)) for x in v):
            for i, x in enumerate(v):
                if isinstance(x, dict):
                    out += _flatten(x, f"{key}[{i}].")
                else:
                    out.append((f"{key}[{i}]", x))
        elif isinstance(v, (list, tuple)):
            out.append((key, ";".join(_fmt(x) for x in v)))
        else:
            out.append((key, v))
    return out


def render(rec: OutputRecord, fmt: str | None = None) -> str:
    """CSV or structured (JSON) text for a command result."""
    fmt = fmt or rec.default_format
    if fmt == "structured":
        doc = dict(rec.metadata)
        if rec.header:
            doc["rows"] = [dict(zip(rec.header, r)) for r in rec.rows]
        return json.dumps(_jsonable(doc), indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rec.header:
        w.writerow(rec.header)
        for r in rec.rows:
            w.writerow([_fmt(x) for x in r])
    else:
        w.writerow(("key", "value"))
        for k, v in _flatten(rec.metadata):
            w.writerow((k, _fmt(v)))
    return buf.getvalue()


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (ConfigError, NonPhysicalStateError)):
        return EXIT_VALIDATION
    if isinstance(exc, VacuumError):
        return EXIT_VACUUM
    if isinstance(exc, ConvergenceError):
        return EXIT_CONVERGENCE
    if isinstance(exc, ClassificationConflictError):
        return EXIT_CONFLICT
    if isinstance(exc, NoAdmissibleStructureError):
        return EXIT_NO_ADMISSIBLE
    return EXIT_OTHER


def error_record(exc: BaseException) -> OutputRecord:
    err = {"type": type(exc).__name__, "message": str(exc), "exit_code": exit_code_for(exc)}
    for attr in ("path", "constraint", "attempts", "pattern_verdict", "table_verdict"):
        if hasattr(exc, attr):
            v = getattr(exc, attr)
            err[attr] = list(v) if isinstance(v, tuple) else (None if v is None else str(v))
    return OutputRecord(metadata={"error": err}, exit_code=err["exit_code"],
                        default_format="structured")


# ---------------------------------------------------------------- commands


def _state_doc(s: GasState, model):
    return {"rho": s.rho, "u": s.u, "p": s.p, "mach": mach_number(s, model)}


def _wave_doc(w):
    return {"family": int(w.family), "kind": w.kind.value,
            "speed_lo": w.speed_lo, "speed_hi": w.speed_hi}


def _critical_doc(k, model):
    c = critical_machs(k, model)
    out = {}
    for name in ("m1_star", "m2_star", "m3_star", "m1_dstar", "m2_dstar", "m3_dstar"):
        v = getattr(c, name)
        if v is not None:
            out[name] = v
    return out


def _interval_doc(iv):
    if iv.empty:
        return "empty"
    lo = "[" if iv.lo_closed else "("
    hi = "]" if iv.hi_closed else ")"
    return f"{lo}{_fmt(iv.lo)}, {_fmt(iv.hi)}{hi}"


def _need_states(cfg):
    if cfg.left is None:
        raise ValidationError("left state required", "left present")
    if cfg.right is None:
        raise ValidationError("right state required", "right present")


def _solve(cfg):
    _need_states(cfg)
    return coupled.solve(cfg.left, cfg.right, cfg.coefficients, cfg.model, cfg.solver)


def solution_metadata(sol, opts: SolveOptions | None = None) -> dict:
    """Structured summary of a solution: type, origin Machs, residuals, states, waves."""
    opts = opts or SolveOptions()
    model = sol.model
    um, up = sol.origin_states
    report = coupled.residual_report(sol, model, opts.sonic_tol)
    k = sol.coeffs.k
    doc = {
        "type": sol.tag.value,
        "mirrored": sol.structure.mirrored,
        "pattern": sol.structure.pattern,
        "gamma": model.gamma,
        "k": k,
        "m_minus": mach_number(um, model),
        "m_plus": mach_number(up, model),
        "critical": _critical_doc(k, model),
        "max_residual": report.max_residual,
        "residuals": report.as_dict(),
        "speed_violations": report.speed_violations,
        "states": {name: _state_doc(s, model) for name, s in sol.states.items()},
        "diagnostics": list(sol.diagnostics),
    }
    if sol.classical is not None:
        doc["p_star"] = sol.classical.p_star
        doc["u_star"] = sol.classical.u_star
        doc["waves"] = [_wave_doc(w) for w in sol.classical.waves]
    else:
        doc["left_waves"] = [_wave_doc(w) for w in sol.left_waves]
        doc["right_waves"] = [_wave_doc(w) for w in sol.right_waves]
    doc["double_branch"] = _double_doc(sol, opts)
    return doc


def _double_doc(sol, opts):
    try:
        pair = coupled.double_branches(sol, opts)
    except ValueError as exc:
        return {"branches": [], "uniqueness_verified": False, "note": str(exc)}
    if pair is None:
        return None
    model = sol.model
    if sol.structure.mirrored:
        pair = tuple(coupled.mirror(b) for b in pair)
    branches = []
    for b in pair:
        um, up = b.stationary.left_state, b.stationary.right_state
        branches.append({
            "m_minus": mach_number(um, model),
            "m_plus": mach_number(up, model),
            "origin_left": _state_doc(um, model),
            "origin_right": _state_doc(up, model),
            "left_waves": [_wave_doc(w) for w in b.left_waves],
            "right_waves": [_wave_doc(w) for w in b.right_waves],
        })
    return {"branches": branches, "uniqueness_verified": coupled.branches_agree(*pair)}


def cmd_solve(cfg: ProblemConfig) -> OutputRecord:
    sol = _solve(cfg)
    return OutputRecord(metadata=solution_metadata(sol, cfg.solver), default_format="structured")


def _discontinuities(sol):
    out = []
    waves = sol.classical.waves if sol.classical is not None else sol.left_waves + sol.right_waves
    for w in waves:
        if w.kind is not WaveKind.RAREFACTION and not w.is_trivial:
            out.append(w.speed_lo)
    if sol.stationary is not None and sol.stationary.left_state != sol.stationary.right_state:
        out.append(0.0)
    return sorted(out)


def profile_grid(sol, xi_min, xi_max, count):
    """Uniform grid where each jump at ``s`` is carried by the pair ``s -+ h/2``.

    The pair replaces the two grid nodes bracketing ``s``, so the row count
    is unchanged.  A jump whose bracketing nodes are already used by another
    jump is left unresolved.
    """
    xs = np.linspace(xi_min, xi_max, count)
    h = xs[1] - xs[0]
    used = set()
    for s in _discontinuities(sol):
        if not (xs[0] < s < xs[-1]):
            continue
        i = min(int(math.floor((s - xs[0]) / h)), count - 2)
        if i in used or i + 1 in used:
            continue
        lo, hi = s - 0.5 * h, s + 0.5 * h
        if (i > 0 and lo <= xs[i - 1]) or (i + 2 < count and hi >= xs[i + 2]):
            continue
        xs[i], xs[i + 1] = lo, hi
        used.update((i, i + 1))
    return xs


def cmd_profile(cfg: ProblemConfig) -> OutputRecord:
    sol = _solve(cfg)
    g = cfg.grid
    model = sol.model
    if g.t is None:
        xis = profile_grid(sol, g.xi_min, g.xi_max, g.count)
        coords = xis
        header = ("xi", "rho", "u", "p", "mach")
    else:
        coords = profile_grid(sol, g.xi_min / g.t, g.xi_max / g.t, g.count) * g.t
        xis = coords / g.t
        header = ("x", "rho", "u", "p", "mach")
    rows = []
    for c, xi in zip(coords, xis):
        s = coupled.sample(sol, float(xi))
        rows.append((float(c), s.rho, s.u, s.p, mach_number(s, model)))
    meta = {"type": sol.tag.value, "mirrored": sol.structure.mirrored,
            "max_residual": coupled.residual_report(sol, model, cfg.solver.sonic_tol).max_residual}
    if g.t is not None:
        meta["t"] = g.t
    return OutputRecord(header=header, rows=rows, metadata=meta)


_CURVE_HEADER = ("m_minus", "m_plus", "rho_ratio", "u_ratio", "p_ratio", "branch", "flag")


def _branch_labels(m, values):
    if len(values) == 2:
        return ("subsonic", "supersonic")
    return ("subsonic" if m <= 1.0 else "supersonic",)


def cmd_curve(cfg: ProblemConfig) -> OutputRecord:
    """Stationary-wave curve sampled over a Mach range.

    ``forward`` maps upstream to downstream Mach numbers, ``backward`` the
    reverse, ``branch`` evaluates one branch formula.  Points without a
    stationary wave are emitted as rows flagged ``no_solution`` (or
    ``branch_undefined``) with ``nan`` in the numeric columns.
    """
    model, coeffs, spec = cfg.model, cfg.coefficients, cfg.curve
    k = coeffs.k
    nan = math.nan
    rows = []
    for m in np.linspace(spec.m_min, spec.m_max, spec.count):
        m = float(m)
        try:
            if spec.kind == "branch":
                br = Branch.SUBSONIC if spec.branch == "subsonic" else Branch.SUPERSONIC
                pairs = [(m, branch_mach(br, m, k, model), spec.branch)]
            elif spec.kind == "forward":
                vals = downstream_mach(m, k, model, cfg.solver.sonic_tol)
                pairs = [(m, v, b) for v, b in zip(vals, _branch_labels(m, vals))]
            else:
                vals = upstream_mach(m, k, model, cfg.solver.sonic_tol)
                pairs = [(v, m, b) for v, b in zip(vals, _branch_labels(m, vals))]
        except NoSolutionError as exc:
            flag = "branch_undefined" if isinstance(exc, BranchUndefinedError) else "no_solution"
            if spec.kind == "backward":
                rows.append((nan, m, nan, nan, nan, "", flag))
            else:
                rows.append((m, nan, nan, nan, nan, spec.branch if spec.kind == "branch" else "", flag))
            continue
        for mm, mp, b in pairs:
            if math.isinf(mm) or math.isinf(mp):
                rows.append((mm, mp, nan, nan, nan, b, "infinite"))
                continue
            r = state_ratios(mm, mp, coeffs, model)
            rows.append((mm, mp, r[0], r[1], r[2], b, "ok"))
    meta = {"kind": spec.kind, "k": k, "gamma": model.gamma}
    return OutputRecord(header=_CURVE_HEADER, rows=rows, metadata=meta)


def critical_report(coeffs: SourceCoefficients, model: GasModel) -> dict:
    k = coeffs.k
    sets = admissible_sets(k, model)
    regime = "identity" if k == 0.0 else ("positive" if k > 0.0 else "negative")
    return {
        "gamma": model.gamma,
        "k": k,
        "regime": regime,
        "critical": _critical_doc(k, model),
        "gamma_minus": [_interval_doc(iv) for iv in sets.gamma_minus],
        "gamma_plus": [_interval_doc(iv) for iv in sets.gamma_plus],
    }


def cmd_critical(cfg: ProblemConfig) -> OutputRecord:
    return OutputRecord(metadata=critical_report(cfg.coefficients, cfg.model),
                        default_format="structured")


_SWEEP_HEADER = ("index", "ml", "mr", "k", "type", "mirrored", "m_minus", "m_plus", "max_residual")


def sweep_point(args):
    """Solve one phase-diagram point; errors become a tag, never an exception."""
    gamma, rl, pl, rr, pr, k1, k2, ml, mr, k, opts = args
    model = GasModel(gamma)
    k3 = (1.0 + k) * (1.0 + k2) ** 2 / (1.0 + k1) - 1.0
    coeffs = SourceCoefficients(k1, k2, k3)
    UL = GasState(rl, ml * math.sqrt(gamma * pl / rl), pl)
    UR = GasState(rr, mr * math.sqrt(gamma * pr / rr), pr)
    nan = math.nan
    try:
        sol = coupled.solve(UL, UR, coeffs, model, SolveOptions(*opts))
    except SingularEulerError as exc:
        return (f"error:{type(exc).__name__}", "", nan, nan, nan)
    um, up = sol.origin_states
    res = coupled.residual_report(sol, model, opts[2]).max_residual
    return (sol.tag.value, sol.structure.mirrored, mach_number(um, model),
            mach_number(up, model), res)


def _sweep_points(spec: SweepSpec, seed):
    if spec.sample == "random":
        rng = np.random.default_rng(seed)
        ml = rng.uniform(spec.ml[0], spec.ml[1], spec.count)
        mr = rng.uniform(spec.mr[0], spec.mr[1], spec.count)
        ks = rng.choice(np.asarray(spec.k, dtype=float), spec.count)
        return [(float(a), float(b), float(c)) for a, b, c in zip(ml, mr, ks)]
    mls = np.linspace(*spec.ml)
    mrs = np.linspace(*spec.mr)
    return [(float(k), float(a), float(b)) for k in spec.k for a in mls for b in mrs]


def cmd_sweep(cfg: ProblemConfig, seed: int = 0) -> OutputRecord:
    """Structure type at every point of an ``(ML, MR, k)`` grid, in grid order."""
    spec = cfg.sweep
    pts = _sweep_points(spec, seed)
    if spec.sample == "grid":
        pts = [(ml, mr, k) for k, ml, mr in pts]
    s = cfg.solver
    opts = (s.root_tol, s.max_iter, s.sonic_tol, s.residual_tol)
    jobs = [(cfg.gamma, spec.rho_left, spec.p_left, spec.rho_right, spec.p_right,
             spec.k1, spec.k2, ml, mr, k, opts) for ml, mr, k in pts]
    if spec.workers == 1 or len(jobs) < 64:
        results = [sweep_point(j) for j in jobs]
    else:
        chunk = max(1, len(jobs) // (8 * spec.workers))
        with ProcessPoolExecutor(max_workers=spec.workers) as ex:
            results = list(ex.map(sweep_point, jobs, chunksize=chunk))
    rows = [(i, ml, mr, k) + r for i, ((ml, mr, k), r) in enumerate(zip(pts, results))]
    meta = {"gamma": cfg.gamma, "points": len(rows), "sample": spec.sample}
    return OutputRecord(header=_SWEEP_HEADER, rows=rows, metadata=meta)


# --------------------------------------------------------------------- main

COMMANDS = ("solve", "profile", "curve", "critical", "sweep")


def _parser():
    ap = argparse.ArgumentParser(
        prog="singular-euler",
        description="Exact Riemann solutions of the Euler equations with a point source.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", metavar="PATH",
                    help="JSON configuration document (default: read standard input)")
    ap.add_argument("--output", metavar="PATH", help="output file (default: standard output)")
    ap.add_argument("--format", choices=("csv", "structured"), default=None,
                    help="csv or structured (JSON); default depends on the command")
    ap.add_argument("--seed", type=int, default=0, metavar="N",
                    help="seed for randomized sweeps")
    return ap


def run(command, text, seed=0) -> OutputRecord:
    """Parse ``text`` and run ``command``; solver errors become error records."""
    try:
        cfg = parse_config(text)
        if command == "solve":
            return cmd_solve(cfg)
        if command == "profile":
            return cmd_profile(cfg)
        if command == "curve":
            return cmd_curve(cfg)
        if command == "critical":
            return cmd_critical(cfg)
        return cmd_sweep(cfg, seed)
    except (SingularEulerError, ValueError) as exc:
        return error_record(exc)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
    except OSError as exc:
        rec = error_record(ParseError(str(exc), "--config"))
    else:
        rec = run(args.command, text, args.seed)
    fmt = args.format if rec.exit_code == EXIT_OK else "structured"
    out = render(rec, fmt)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    if rec.exit_code != EXIT_OK:
        sys.stderr.write(f"error: {rec.metadata['error']['message']}\n")
    return rec.exit_code


if __name__ == "__main__":
    sys.exit(main())
