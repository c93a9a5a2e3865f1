"""Global Riemann solver for the Euler equations with a point source at ``x = 0``.

The solution is assembled from a left half-plane of classical waves, the
stationary wave at the origin and a right half-plane of classical waves.
For flow to the right the construction follows one monotone path in the
``(p, u)`` plane:

* the left 1-wave curve of ``UL`` is walked from the state where the flow
  at the origin stops (``u- = 0``) towards faster flow, each ``U-`` is
  pushed through the subsonic branch of the stationary map;
* once the flow at the origin chokes, the path continues along a
  right-moving 1-wave issued from the sonic or supersonic downstream state;
* for a supersonic ``UL`` that reaches the origin undisturbed the path
  continues along the 1-wave curve of ``D(UL)``.

Consecutive pieces meet continuously (a stationary normal shock preserves
the flux, so it commutes with the stationary map), and the solution is the
first crossing of this path with the 3-wave curve of ``UR``.  Flow to the
left is handled by mirroring.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .errors import (
    ClassificationConflictError,
    ConvergenceError,
    NoAdmissibleStructureError,
    NoSolutionError,
    VacuumError,
)
from .gas import (
    GasModel,
    GasState,
    eigenvalues,
    entropy_invariant,
    mach_number,
    mirror_state,
    sound_speed,
)
from .stationary import (
    SONIC_TOL,
    SourceCoefficients,
    StationaryWavePair,
    critical_machs,
    forward_curve,
    backward_curve,
    jump_residual,
    satisfies_criterion,
    state_ratios,
)
from .waves import (
    ClassicalWave,
    CRPSolution,
    Side,
    WaveFamily,
    WaveKind,
    build_wave,
    normal_shock_pressure,
    rh_residual,
    riemann_invariant,
    sample_crp,
    sample_waves,
    shock_state,
    solve_crp,
    wave_curve_velocity,
    wave_state,
)

__all__ = [
    "StructureTag",
    "StructureType",
    "SolveOptions",
    "RiemannProblem",
    "SingularSolution",
    "ResidualReport",
    "mirror",
    "solve",
    "classify",
    "sample",
    "residual_report",
    "table_verdict",
    "sample_profile",
    "verify_uniqueness_pair",
    "double_branches",
    "branches_agree",
]


class StructureTag(enum.Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    TYPE3 = "Type3"
    TYPE4 = "Type4"
    TYPE5 = "Type5"
    TYPE6 = "Type6"
    TYPE7 = "Type7"
    SOURCE_OFF_CLASSICAL = "SourceOffClassical"


# Wave pattern of every structure in the flow direction; "W" is a shock or
# rarefaction, "R" a rarefaction, "D" the stationary wave.
PATTERNS = {
    StructureTag.TYPE1: "W+D+C+W",
    StructureTag.TYPE2: "D+W+C+W",
    StructureTag.TYPE3: "W+D+R+C+W",
    StructureTag.TYPE4: "D+R+C+W",
    StructureTag.TYPE5: "R+D+C+W",
    StructureTag.TYPE6: "R+D+W+C+W",
    StructureTag.TYPE7: "R+D+R+C+W",
    StructureTag.SOURCE_OFF_CLASSICAL: "W+C+W",
}


@dataclass(frozen=True)
class StructureType:
    tag: StructureTag
    mirrored: bool = False

    @property
    def pattern(self) -> str:
        return PATTERNS[self.tag]


@dataclass(frozen=True)
class SolveOptions:
    root_tol: float = 1e-12
    max_iter: int = 200
    sonic_tol: float = SONIC_TOL
    residual_tol: float = 1e-9

    def __post_init__(self):
        for name in ("root_tol", "max_iter", "sonic_tol", "residual_tol"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v!r}")


@dataclass(frozen=True)
class RiemannProblem:
    left_state: GasState
    right_state: GasState
    coeffs: SourceCoefficients = field(default_factory=SourceCoefficients)
    model: GasModel = field(default_factory=GasModel)


@dataclass(frozen=True)
class SingularSolution:
    """Self-similar solution ``U(x/t)``.

    ``left_waves`` and ``right_waves`` are ordered left to right in the
    physical frame.  ``states`` maps the role names ``UL, U-, U+, U3, U4, UR``
    of the rightward construction to physical states; for a mirrored
    solution ``U-`` therefore sits at ``0+``.
    """

    structure: StructureType
    left_state: GasState
    right_state: GasState
    left_waves: tuple
    right_waves: tuple
    stationary: StationaryWavePair | None
    states: dict
    coeffs: SourceCoefficients
    model: GasModel
    diagnostics: tuple = ()
    classical: CRPSolution | None = None

    @property
    def tag(self) -> StructureTag:
        return self.structure.tag

    @property
    def origin_states(self):
        """``(U(0-), U(0+))``."""
        if self.stationary is not None:
            return self.stationary.left_state, self.stationary.right_state
        return sample_crp(self.classical, 0.0, "-"), sample_crp(self.classical, 0.0, "+")


# ---------------------------------------------------------------- mirroring


@functools.singledispatch
def mirror(obj):
    """Image under ``x -> -x, u -> -u``; an involution on every supported type."""
    raise TypeError(f"cannot mirror {type(obj).__name__}")


@mirror.register
def _(obj: GasState):
    return mirror_state(obj)


@mirror.register
def _(obj: ClassicalWave):
    fam = {WaveFamily.ONE: WaveFamily.THREE, WaveFamily.TWO: WaveFamily.TWO,
           WaveFamily.THREE: WaveFamily.ONE}[obj.family]
    return ClassicalWave(fam, obj.kind, mirror_state(obj.right_state), mirror_state(obj.left_state),
                         -obj.speed_hi, -obj.speed_lo)


@mirror.register
def _(obj: StationaryWavePair):
    return StationaryWavePair(mirror_state(obj.right_state), mirror_state(obj.left_state),
                              obj.coeffs, obj.choked, obj.model)


@mirror.register
def _(obj: CRPSolution):
    waves = tuple(mirror(w) for w in reversed(obj.waves))
    return CRPSolution(mirror_state(obj.right_state), mirror_state(obj.left_state), obj.p_star,
                       -obj.u_star, obj.rho_star_right, obj.rho_star_left, waves, obj.model)


@mirror.register
def _(obj: RiemannProblem):
    return RiemannProblem(mirror_state(obj.right_state), mirror_state(obj.left_state),
                          obj.coeffs, obj.model)


@mirror.register
def _(obj: SingularSolution):
    return SingularSolution(
        structure=StructureType(obj.structure.tag, not obj.structure.mirrored),
        left_state=mirror_state(obj.right_state),
        right_state=mirror_state(obj.left_state),
        left_waves=tuple(mirror(w) for w in reversed(obj.right_waves)),
        right_waves=tuple(mirror(w) for w in reversed(obj.left_waves)),
        stationary=None if obj.stationary is None else mirror(obj.stationary),
        states={k: mirror_state(v) for k, v in obj.states.items()},
        coeffs=obj.coeffs,
        model=obj.model,
        diagnostics=obj.diagnostics,
        classical=None if obj.classical is None else mirror(obj.classical),
    )


# ------------------------------------------------------------ the trace


class _AttemptFailed(Exception):
    def __init__(self, message, vacuum=False):
        super().__init__(message)
        self.vacuum = vacuum


@dataclass
class _Segment:
    """One piece of the downstream trace, parametrised by a decreasing pressure."""

    label: str
    p_start: float
    p_end: float
    evaluate: object  # p -> (U-, U+, U3 or None, p_T, u_T)
    open_end: bool = False  # True when p_end only approximates p -> 0


def _zero_velocity_pressure(UL, model):
    """Pressure on the 1-wave curve of ``UL`` where the velocity vanishes, or None."""
    g = model.gamma
    rho, u, p = UL.rho, UL.u, UL.p
    if u > 0.0:
        b = rho * u * u * (g + 1.0)
        q = (b + math.sqrt(b * b + 16.0 * g * rho * u * u * p)) / 4.0
        return p + q
    y = 1.0 + 0.5 * (g - 1.0) * u / sound_speed(UL, model)
    if y <= 0.0:
        return None
    return p * y ** (2.0 * g / (g - 1.0))


def _choke_pressure(UL, mc, p_zero, model, opts):
    """Pressure on the 1-wave curve of ``UL`` where the Mach number equals ``mc``."""
    g = model.gamma
    ml = mach_number(UL, model)
    if ml <= mc:
        c = 2.0 / (g - 1.0)
        y = min((ml + c) / (mc + c), 1.0)
        return UL.p * y ** (2.0 * g / (g - 1.0))

    def h(p):
        return mach_number(shock_state(WaveFamily.ONE, p, UL, model), model) - mc

    try:
        return brentq(h, UL.p, p_zero, xtol=1e-300, rtol=1e-15, maxiter=opts.max_iter)
    except RuntimeError as exc:
        raise ConvergenceError(f"choke pressure: {exc}") from exc


def _downstream(Um, mp, coeffs, model):
    mm = mach_number(Um, model)
    rr, ur, pr = state_ratios(mm, mp, coeffs, model)
    return GasState(Um.rho * rr, Um.u * ur, Um.p * pr)


def _subsonic_image(mm, k, model):
    """Subsonic branch, tolerant of rounding just past the choke point."""
    if k == 0.0:
        return mm
    g = model.gamma
    m2 = mm * mm
    r = ((mm - 1.0) * (mm + 1.0)) ** 2 - k * (g + 1.0) * m2 * ((g - 1.0) * m2 + 2.0)
    q = g * m2 + 1.0
    i = math.sqrt(max(r, 0.0)) / q
    # 1 - I in rationalised form, exact as mm -> 0
    one_minus_i = (1.0 + k) * (g + 1.0) * m2 * ((g - 1.0) * m2 + 2.0) / (q * q * (1.0 + i))
    return math.sqrt(one_minus_i / (1.0 + g * i))


def _build_trace(UL, coeffs, model, opts):
    """Ordered trace segments for flow to the right, plus a description of the end."""
    g = model.gamma
    k = coeffs.k
    tol = opts.sonic_tol
    p_zero = _zero_velocity_pressure(UL, model)
    if p_zero is None:
        raise _AttemptFailed("the left 1-wave curve never produces rightward flow")
    ml = mach_number(UL, model)
    if k > 0.0:
        crit = critical_machs(k, model)
        mc = crit.m1_star
    else:
        crit = critical_machs(k, model) if k < 0.0 else None
        mc = 1.0

    # can the flow at the origin be brought to the choke Mach number by a left wave?
    if ml <= 1.0 + tol:
        choke_reachable = True
    else:
        post = math.sqrt(((g - 1.0) * ml * ml + 2.0) / (2.0 * g * ml * ml - (g - 1.0)))
        choke_reachable = post > mc + tol
    if choke_reachable:
        p_lo = _choke_pressure(UL, mc, p_zero, model, opts)
    else:
        p_lo = normal_shock_pressure(UL, model)

    a2 = 1.0 + coeffs.k2

    def left_state_at(p):
        if p == UL.p:
            return UL
        return wave_state(WaveFamily.ONE, p, UL, model)

    choke_cache = {}

    def choke_states():
        if not choke_cache:
            Um = left_state_at(p_lo)
            if k > 0.0 or k == 0.0:
                choke_cache["plus"] = (_downstream(Um, 1.0, coeffs, model),)
            else:
                ups = [_downstream(Um, crit.m1_dstar, coeffs, model)]
                if math.isfinite(crit.m2_dstar):
                    ups.append(_downstream(Um, crit.m2_dstar, coeffs, model))
                choke_cache["plus"] = tuple(ups)
            choke_cache["minus"] = Um
        return choke_cache["minus"], choke_cache["plus"]

    def eval_subsonic(p):
        if p >= p_zero:
            return None, None, None, a2 * p, 0.0
        if choke_reachable and p == p_lo:
            Um, ups = choke_states()
            Up = ups[0]
            return Um, Up, None, Up.p, Up.u
        Um = left_state_at(p)
        if not Um.u > 0.0:
            return None, None, None, a2 * p, 0.0
        mm = min(mach_number(Um, model), mc)
        Up = _downstream(Um, _subsonic_image(mm, k, model), coeffs, model)
        return Um, Up, None, Up.p, Up.u

    segments = [_Segment("subsonic", p_zero, p_lo, eval_subsonic)]
    end_note = "vacuum"

    def chain(label, Um, base, p_top):
        def ev(p):
            U3 = base if p == base.p else wave_state(WaveFamily.ONE, p, base, model)
            return Um, base, U3, U3.p, U3.u

        return _Segment(label, p_top, 0.0, ev, open_end=True)

    if choke_reachable:
        Um, ups = choke_states()
        if k >= 0.0:
            segments.append(chain("choked", Um, ups[0], ups[0].p))
        elif len(ups) == 2:
            sup = ups[1]
            segments.append(chain("choked", Um, sup, normal_shock_pressure(sup, model)))
        else:
            end_note = "no supersonic branch at the choke point"
    elif ml > 1.0 + tol:
        try:
            pairs = forward_curve(UL, coeffs, model, tol)
        except NoSolutionError:
            pairs = ()
            end_note = "supersonic inflow outside the admissible upstream set"
        if pairs:
            Up = pairs[-1].right_state
            if abs(mach_number(Up, model) - 1.0) <= tol:
                segments.append(chain("supersonic", UL, Up, Up.p))
            else:
                segments.append(chain("supersonic", UL, Up, normal_shock_pressure(Up, model)))
    return segments, end_note


def _right_velocity(p, UR, model):
    return wave_curve_velocity(Side.FROM_RIGHT_STATE, p, UR, model)


def _solve_rightward(UL, UR, coeffs, model, opts):
    """Construct the solution with flow to the right at the origin, or raise ``_AttemptFailed``."""
    g = model.gamma
    segments, end_note = _build_trace(UL, coeffs, model, opts)
    scale = sound_speed(UL, model) + sound_speed(UR, model) + abs(UL.u) + abs(UR.u)
    jtol = 1e-12 * scale

    def residual(seg, p):
        *_, pt, ut = seg.evaluate(p)
        return ut - _right_velocity(pt, UR, model)

    g0 = residual(segments[0], segments[0].p_start)
    if g0 >= -jtol:
        raise _AttemptFailed("flow at the origin would not be directed to the right")

    found = None
    for seg in segments:
        if seg.open_end:
            base = seg.evaluate(seg.p_start)[1]
            limit = (base.u + 2.0 * sound_speed(base, model) / (g - 1.0)
                     - UR.u + 2.0 * sound_speed(UR, model) / (g - 1.0))
            if limit <= 0.0:
                continue
            p_end = seg.p_start
            g_end = residual(seg, p_end)
            for _ in range(opts.max_iter):
                if g_end > jtol:
                    break
                p_end *= 1e-3
                g_end = residual(seg, p_end)
            else:
                raise ConvergenceError("could not bracket the match near vacuum")
            seg.p_end = p_end
        else:
            g_end = residual(seg, seg.p_end)
        if g_end >= -jtol:
            if g_end <= jtol:
                found = (seg, seg.p_end)
            else:
                g_start = residual(seg, seg.p_start)
                if g_start >= 0.0:
                    found = (seg, seg.p_start)
                else:
                    try:
                        root = brentq(lambda p: residual(seg, p), seg.p_end, seg.p_start,
                                      xtol=1e-300, rtol=max(4.5e-16, opts.root_tol * 1e-3),
                                      maxiter=opts.max_iter)
                    except RuntimeError as exc:
                        raise ConvergenceError(f"trace matching: {exc}") from exc
                    found = (seg, root)
            break
    if found is None:
        last = segments[-1]
        if last.open_end or end_note == "vacuum":
            raise _AttemptFailed("the right state cannot be reached without a vacuum", vacuum=True)
        raise _AttemptFailed(f"trace ends before meeting the right wave curve ({end_note})")

    seg, p = found
    Um, Up, U3, pt, ut = seg.evaluate(p)
    if Um is None:
        raise _AttemptFailed("flow at the origin is at rest")
    rho4 = wave_state(WaveFamily.THREE, pt, UR, model).rho
    U4 = GasState(rho4, ut, pt)

    left_waves = ()
    if Um != UL:
        left_waves = (build_wave(WaveFamily.ONE, UL, Um, model),)
    right_waves = []
    states = {"UL": UL, "U-": Um, "U+": Up}
    last = Up
    if U3 is not None:
        if U3 != Up:
            right_waves.append(build_wave(WaveFamily.ONE, Up, U3, model))
        states["U3"] = U3
        last = U3
    right_waves.append(ClassicalWave(WaveFamily.TWO, WaveKind.CONTACT, last, U4, ut, ut))
    right_waves.append(build_wave(WaveFamily.THREE, U4, UR, model))
    states["U4"] = U4
    states["UR"] = UR
    choked = any(abs(abs(mach_number(s, model)) - 1.0) <= opts.sonic_tol for s in (Um, Up))
    pair = StationaryWavePair(Um, Up, coeffs, choked, model)
    sol = SingularSolution(
        structure=StructureType(StructureTag.TYPE1),
        left_state=UL,
        right_state=UR,
        left_waves=left_waves,
        right_waves=tuple(right_waves),
        stationary=pair,
        states=states,
        coeffs=coeffs,
        model=model,
        diagnostics=(f"matched on the {seg.label} segment at p = {p!r}",),
    )
    return sol


# ----------------------------------------------------------- classification


def _wave_kind(wave):
    if wave is None or wave.is_trivial:
        return None
    return wave.kind


def _pattern_verdict(m_minus, m_plus, left_kind, right_kind, tol):
    s_m = abs(m_minus - 1.0) <= tol
    s_p = abs(m_plus - 1.0) <= tol
    rare_or_none = (None, WaveKind.RAREFACTION)
    if s_m and s_p:
        if left_kind in rare_or_none and right_kind in rare_or_none:
            return StructureTag.TYPE7
    elif s_p:
        if m_minus < 1.0 and right_kind in rare_or_none:
            return StructureTag.TYPE3
        if m_minus > 1.0 and left_kind is None and right_kind in rare_or_none:
            return StructureTag.TYPE4
    elif s_m:
        if m_plus < 1.0 and left_kind in rare_or_none and right_kind is None:
            return StructureTag.TYPE5
        if m_plus > 1.0 and left_kind in rare_or_none:
            return StructureTag.TYPE6
    else:
        if m_minus < 1.0 and m_plus < 1.0 and right_kind is None:
            return StructureTag.TYPE1
        if m_minus > 1.0 and m_plus > 1.0 and left_kind is None:
            return StructureTag.TYPE2
    return None


def table_verdict(m_minus, m_plus, k, model, tol=SONIC_TOL, crit_tol=1e-8):
    """Structure implied by the Mach numbers on both sides of the origin, or None."""
    s_m = abs(m_minus - 1.0) <= tol
    s_p = abs(m_plus - 1.0) <= tol

    def near(a, b):
        return abs(a - b) <= crit_tol * max(1.0, b)

    if k == 0.0:
        if s_m and s_p:
            return StructureTag.TYPE7
        if m_minus < 1.0 and m_plus < 1.0 and not (s_m or s_p):
            return StructureTag.TYPE1
        if m_minus > 1.0 and m_plus > 1.0 and not (s_m or s_p):
            return StructureTag.TYPE2
        return None
    c = critical_machs(k, model)
    if k > 0.0:
        if s_p and near(m_minus, c.m1_star):
            return StructureTag.TYPE3
        if s_p and math.isfinite(c.m2_star) and near(m_minus, c.m2_star):
            return StructureTag.TYPE4
        if not s_p and m_minus < c.m1_star and m_plus < 1.0:
            return StructureTag.TYPE1
        if not s_p and m_minus > c.m2_star and 1.0 < m_plus < c.m3_star:
            return StructureTag.TYPE2
        return None
    if s_m and near(m_plus, c.m1_dstar):
        return StructureTag.TYPE5
    if s_m and math.isfinite(c.m2_dstar) and near(m_plus, c.m2_dstar):
        return StructureTag.TYPE6
    if not s_m and m_minus < 1.0 and m_plus < c.m1_dstar:
        return StructureTag.TYPE1
    if not s_m and 1.0 < m_minus < c.m3_dstar and m_plus > c.m2_dstar:
        return StructureTag.TYPE2
    return None


def _canonical(sol):
    """Solution in the frame where the flow at the origin is to the right."""
    if sol.stationary is not None and sol.stationary.left_state.u < 0.0:
        return mirror(sol), True
    return sol, False


def classify(sol: SingularSolution, model: GasModel | None = None, sonic_tol=SONIC_TOL) -> StructureType:
    """Structure type from the realised wave pattern, cross-checked with the Mach ranges.

    Raises
    ------
    ClassificationConflictError
        If the pattern and the Mach-range verdicts disagree or either is undetermined.
    """
    model = model or sol.model
    if sol.stationary is None:
        return StructureType(StructureTag.SOURCE_OFF_CLASSICAL, False)
    can, mirrored = _canonical(sol)
    Um, Up = can.stationary.left_state, can.stationary.right_state
    mm, mp = mach_number(Um, model), mach_number(Up, model)
    left = [w for w in can.left_waves if not w.is_trivial]
    if any(w.family is not WaveFamily.ONE for w in left) or len(left) > 1:
        raise ClassificationConflictError("unexpected waves upstream of the source")
    right1 = [w for w in can.right_waves if w.family is WaveFamily.ONE and not w.is_trivial]
    if len(right1) > 1:
        raise ClassificationConflictError("more than one 1-wave downstream of the source")
    pattern = _pattern_verdict(mm, mp, _wave_kind(left[0] if left else None),
                               _wave_kind(right1[0] if right1 else None), sonic_tol)
    table = table_verdict(mm, mp, can.coeffs.k, model, sonic_tol)
    if pattern is None or table is None or pattern is not table:
        raise ClassificationConflictError(
            f"pattern verdict {pattern} and Mach-range verdict {table} disagree "
            f"(M- = {mm!r}, M+ = {mp!r}, k = {can.coeffs.k!r})",
            pattern_verdict=pattern,
            table_verdict=table,
        )
    return StructureType(pattern, mirrored)


# ----------------------------------------------------------------- residuals


@dataclass(frozen=True)
class ResidualReport:
    """Named relative residuals of a solution; ``max_residual`` is the worst one."""

    entries: tuple
    speed_violations: int = 0

    @property
    def max_residual(self) -> float:
        return max((v for _, v in self.entries), default=0.0)

    def as_dict(self):
        return dict(self.entries)

    def get(self, prefix):
        """Largest residual whose label starts with ``prefix`` (None if absent)."""
        vals = [v for name, v in self.entries if name.startswith(prefix)]
        return max(vals) if vals else None


def _state_gap(a, b):
    vs = abs(a.u) + math.sqrt(a.p / a.rho)
    return max(abs(a.rho - b.rho) / a.rho, abs(a.u - b.u) / vs, abs(a.p - b.p) / a.p)


def _wave_residuals(w, model, name):
    out = []
    if w.is_trivial:
        return out
    l, r = w.left_state, w.right_state
    if w.kind is WaveKind.SHOCK:
        out.append((f"shock:{name}", rh_residual(l, r, w.speed_lo, model)))
    elif w.kind is WaveKind.RAREFACTION:
        jl = riemann_invariant(l, w.family, model)
        jr = riemann_invariant(r, w.family, model)
        vs = abs(jl) + sound_speed(l, model)
        out.append((f"rarefaction:{name}", abs(jl - jr) / vs))
        sl, sr = entropy_invariant(l, model), entropy_invariant(r, model)
        out.append((f"rarefaction_entropy:{name}", abs(sl - sr) / sl))
        lam = 0 if w.family is WaveFamily.ONE else 2
        out.append((f"rarefaction_speed:{name}",
                    max(abs(eigenvalues(l, model)[lam] - w.speed_lo),
                        abs(eigenvalues(r, model)[lam] - w.speed_hi)) / vs))
    else:
        vs = abs(l.u) + sound_speed(l, model)
        out.append((f"contact:{name}", max(abs(l.u - r.u) / vs, abs(l.p - r.p) / l.p,
                                           abs(w.speed_lo - l.u) / vs)))
    return out


def residual_report(sol: SingularSolution, model: GasModel | None = None,
                    sonic_tol=SONIC_TOL) -> ResidualReport:
    """Jump, invariant, continuity and wave-speed-sign residuals of ``sol``."""
    model = model or sol.model
    entries = []
    violations = 0
    if sol.stationary is None:
        waves = sol.classical.waves
        for i, w in enumerate(waves):
            entries += _wave_residuals(w, model, f"classical[{i}]")
        chain = [sol.left_state]
        for w in waves:
            chain += [w.left_state, w.right_state]
        chain.append(sol.right_state)
        gap = max(_state_gap(chain[i], chain[i + 1]) for i in range(0, len(chain), 2))
        entries.append(("continuity", gap))
        return ResidualReport(tuple(entries), 0)

    pair = sol.stationary
    upstream = "left" if pair.left_state.u > 0.0 else "right"
    entries.append(("stationary", jump_residual(pair.left_state, pair.right_state,
                                                pair.coeffs, model, upstream)))
    crit_ok = satisfies_criterion(pair.left_state, pair.right_state, model, sonic_tol)
    entries.append(("criterion", 0.0 if crit_ok else 1.0))
    for i, w in enumerate(sol.left_waves):
        entries += _wave_residuals(w, model, f"left[{i}]")
    for i, w in enumerate(sol.right_waves):
        entries += _wave_residuals(w, model, f"right[{i}]")

    chain = [sol.left_state]
    for w in sol.left_waves:
        chain += [w.left_state, w.right_state]
    chain += [pair.left_state, pair.right_state]
    for w in sol.right_waves:
        chain += [w.left_state, w.right_state]
    chain.append(sol.right_state)
    gap = max(_state_gap(chain[i], chain[i + 1]) for i in range(0, len(chain), 2))
    entries.append(("continuity", gap))

    vscale = max(sound_speed(s, model) for s in (sol.left_state, sol.right_state,
                                                 pair.left_state, pair.right_state))
    worst = 0.0
    for w in sol.left_waves:
        if not w.is_trivial and w.speed_hi > sonic_tol * vscale:
            violations += 1
            worst = max(worst, w.speed_hi / vscale)
    for w in sol.right_waves:
        if not w.is_trivial and w.speed_lo < -sonic_tol * vscale:
            violations += 1
            worst = max(worst, -w.speed_lo / vscale)
    entries.append(("speed_sign", worst))
    if pair.left_state.u * pair.right_state.u <= 0.0:
        entries.append(("velocity_sign", 1.0))
    return ResidualReport(tuple(entries), violations)


# ------------------------------------------------------------------- solve


def _classical_solution(UL, UR, coeffs, model, opts, crp, note):
    if crp is None:
        crp = solve_crp(UL, UR, model, opts.root_tol, opts.max_iter)
    return SingularSolution(
        structure=StructureType(StructureTag.SOURCE_OFF_CLASSICAL, False),
        left_state=UL,
        right_state=UR,
        left_waves=(),
        right_waves=(),
        stationary=None,
        states={"UL": UL, "U1": crp.star_left, "U2": crp.star_right, "UR": UR},
        coeffs=coeffs,
        model=model,
        diagnostics=(note,),
        classical=crp,
    )


def _attempt(UL, UR, coeffs, model, opts, mirrored):
    if mirrored:
        sol = _solve_rightward(mirror_state(UR), mirror_state(UL), coeffs, model, opts)
    else:
        sol = _solve_rightward(UL, UR, coeffs, model, opts)
    st = classify(sol, model, opts.sonic_tol)
    sol = replace(sol, structure=StructureType(st.tag, False))
    report = residual_report(sol, model, opts.sonic_tol)
    if report.max_residual > opts.residual_tol or report.speed_violations:
        raise _AttemptFailed(
            f"verification failed: max residual {report.max_residual:.3e}, "
            f"{report.speed_violations} wave-speed sign violations"
        )
    return mirror(sol) if mirrored else sol


def solve(UL: GasState, UR: GasState, coeffs: SourceCoefficients, model: GasModel,
          opts: SolveOptions | None = None) -> SingularSolution:
    """Exact self-similar solution of the Riemann problem with a point source at the origin.

    Raises
    ------
    VacuumError
        If every failed attempt failed because of a vacuum.
    NoAdmissibleStructureError
        If neither flow direction yields a verified solution.
    ConvergenceError
        If a root finder exhausts its budget.
    """
    opts = opts or SolveOptions()
    if coeffs.is_zero:
        return _classical_solution(UL, UR, coeffs, model, opts, None, "source coefficients vanish")
    try:
        probe = solve_crp(UL, UR, model, opts.root_tol, opts.max_iter)
    except VacuumError:
        probe = None
    probe_u = None
    if probe is not None:
        um = sample_crp(probe, 0.0, "-").u
        up = sample_crp(probe, 0.0, "+").u
        if um * up <= 0.0:
            return _classical_solution(UL, UR, coeffs, model, opts, probe,
                                       "flow at the origin changes sign; source is off")
        probe_u = um

    results, failures = {}, []
    for mirrored in (False, True):
        name = "leftward" if mirrored else "rightward"
        try:
            results[mirrored] = _attempt(UL, UR, coeffs, model, opts, mirrored)
        except _AttemptFailed as exc:
            failures.append((name, str(exc), exc.vacuum))
        except NoSolutionError as exc:
            failures.append((name, str(exc), False))
    if not results:
        attempts = tuple(f"{n}: {m}" for n, m, _ in failures)
        if probe is None or any(v for *_, v in failures):
            raise VacuumError("; ".join(attempts))
        raise NoAdmissibleStructureError("no admissible structure: " + "; ".join(attempts), attempts)
    if len(results) == 1:
        sol = next(iter(results.values()))
        notes = tuple(f"{n} attempt failed: {m}" for n, m, _ in failures)
    else:
        if probe_u is not None:
            pick = probe_u < 0.0
        else:
            res = {m: residual_report(s, model).max_residual for m, s in results.items()}
            pick = res[True] < res[False]
        sol = results[pick]
        notes = ("both flow directions produced a solution; kept the one matching the "
                 "direction of the source-free flow at the origin",)
    return replace(sol, diagnostics=sol.diagnostics + notes)


# ---------------------------------------------------------------- sampling


def sample(sol: SingularSolution, xi: float, side="+") -> GasState:
    """State at ``x/t = xi``; at ``xi == 0`` ``side`` picks ``0-`` or ``0+``."""
    if sol.stationary is None:
        return sample_crp(sol.classical, xi, side)
    Um, Up = sol.stationary.left_state, sol.stationary.right_state
    if xi < 0.0 or (xi == 0.0 and side == "-"):
        if xi == 0.0:
            return Um
        return sample_waves(sol.left_waves, xi, sol.left_state, Um, sol.model, side)
    if xi == 0.0:
        return Up
    return sample_waves(sol.right_waves, xi, Up, sol.right_state, sol.model, side)


def sample_profile(sol: SingularSolution, xis) -> np.ndarray:
    """``(n, 3)`` array of ``(rho, u, p)`` at the given similarity coordinates."""
    return np.array([sample(sol, float(x)).as_tuple() for x in xis])


# -------------------------------------------------------------- uniqueness


def _half_plane_waves(crp, sign, tol):
    """Waves of a classical solution that carry a jump above rounding level.

    Returns None if any of them runs into the wrong half-plane.
    """
    waves = [w for w in crp.waves if _state_gap(w.left_state, w.right_state) > 1e-9]
    scale = max(sound_speed(crp.left_state, crp.model), sound_speed(crp.right_state, crp.model))
    for w in waves:
        if sign < 0 and w.speed_hi > tol * scale:
            return None
        if sign > 0 and w.speed_lo < -tol * scale:
            return None
    return tuple(waves)


def _assemble(UL, UR, Um, Up, coeffs, model, opts):
    left = _half_plane_waves(solve_crp(UL, Um, model, opts.root_tol, opts.max_iter), -1, opts.sonic_tol)
    right = _half_plane_waves(solve_crp(Up, UR, model, opts.root_tol, opts.max_iter), +1, opts.sonic_tol)
    if left is None or right is None:
        return None
    return SingularSolution(
        structure=StructureType(StructureTag.TYPE1),
        left_state=UL, right_state=UR, left_waves=left, right_waves=right,
        stationary=StationaryWavePair(Um, Up, coeffs, True, model),
        states={"UL": UL, "U-": Um, "U+": Up, "UR": UR},
        coeffs=coeffs, model=model,
    )


def double_branches(sol: SingularSolution, opts: SolveOptions | None = None):
    """Global solutions built along both stationary branches of a double case.

    ``sol`` is a solution returned by ``solve``.  For ``k > 0`` the sonic
    downstream state has two upstream pre-images; for ``k < 0`` the sonic
    upstream state has two downstream images.  Each branch is completed with
    classical Riemann solutions confined to the proper half-plane.  The two
    returned solutions live in the rightward frame.

    Returns None when ``sol`` is not a double case.

    Raises
    ------
    ValueError
        If a branch cannot be completed.
    """
    opts = opts or SolveOptions()
    if sol.stationary is None:
        return None
    model, coeffs = sol.model, sol.coeffs
    can = mirror(sol) if sol.stationary.left_state.u < 0.0 else sol
    cUL, cUR = can.left_state, can.right_state
    Um, Up = can.stationary.left_state, can.stationary.right_state
    k = coeffs.k
    if k > 0.0 and abs(mach_number(Up, model) - 1.0) <= opts.sonic_tol:
        candidates = [(p.left_state, Up) for p in backward_curve(Up, coeffs, model, opts.sonic_tol)]
    elif k < 0.0 and abs(mach_number(Um, model) - 1.0) <= opts.sonic_tol:
        candidates = [(Um, p.right_state) for p in forward_curve(Um, coeffs, model, opts.sonic_tol)]
    else:
        return None
    if len(candidates) != 2:
        return None
    built = [_assemble(cUL, cUR, a, b, coeffs, model, opts) for a, b in candidates]
    if any(b is None for b in built):
        raise ValueError("one of the stationary branches cannot be completed")
    return tuple(built)


def branches_agree(a: SingularSolution, b: SingularSolution, n_samples=100, rtol=1e-8) -> bool:
    """Compare two solutions at ``n_samples`` nonzero values of ``x/t``."""
    model = a.model
    speeds = [abs(w.speed_lo) for s in (a, b) for w in s.left_waves + s.right_waves]
    span = 1.5 * max(speeds + [sound_speed(a.left_state, model), sound_speed(a.right_state, model)])
    xis = np.linspace(-span, span, n_samples + 1)
    xis = xis[xis != 0.0][:n_samples]
    for xi in xis:
        sa = sample(a, float(xi))
        sb = sample(b, float(xi))
        vs = abs(sa.u) + sound_speed(sa, model)
        if (abs(sa.rho - sb.rho) > rtol * sa.rho or abs(sa.p - sb.p) > rtol * sa.p
                or abs(sa.u - sb.u) > rtol * vs):
            return False
    return True


def verify_uniqueness_pair(UL: GasState, UR: GasState, coeffs: SourceCoefficients,
                           model: GasModel, opts: SolveOptions | None = None,
                           n_samples=100, rtol=1e-8) -> bool:
    """Check that both stationary branches of a double case give the same global solution.

    Raises
    ------
    ValueError
        If the data do not produce a double case or a branch cannot be completed.
    """
    opts = opts or SolveOptions()
    sol = solve(UL, UR, coeffs, model, opts)
    pair = double_branches(sol, opts)
    if pair is None:
        raise ValueError("the data do not produce a double-branch case")
    first, second = pair
    return branches_agree(first, second, n_samples, rtol)
