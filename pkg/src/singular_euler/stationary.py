"""Stationary discontinuity generated by a flux-proportional point source.

A state ``U-`` (``u- > 0``) on the left of the origin is joined to ``U+`` by

    F(U+) = diag(1 + k1, 1 + k2, 1 + k3) F(U-),

and the admissible solution is selected by the monotonicity criterion
``lambda_k(U-) * lambda_k(U+) >= 0``.  Everything reduces to the Mach
numbers on both sides and the composite gain

    k = (1 + k1)(1 + k3) / (1 + k2)**2 - 1.

The closed forms here are written in cancellation-free variants of the
textbook expressions (see ``critical_machs``).  ``oracle_jump_solutions``
solves the jump relation by brute force and is kept independent of all
branch formulas so the two can be cross-checked.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BranchUndefinedError,
    NegativeVelocityError,
    NoSolutionError,
    OutsideAdmissibleError,
)
from .gas import GasModel, GasState, flux, mach_number, sound_speed, total_energy

__all__ = [
    "K_ZERO_TOL",
    "SONIC_TOL",
    "CRITICAL_SNAP_TOL",
    "SourceCoefficients",
    "composite_k",
    "transform_k",
    "i_value",
    "Branch",
    "branch_mach",
    "downstream_mach",
    "upstream_mach",
    "state_ratios",
    "StationaryWavePair",
    "forward_curve",
    "backward_curve",
    "jump_residual",
    "CriticalMachNumbers",
    "critical_machs",
    "Interval",
    "AdmissibleSets",
    "admissible_sets",
    "CriterionCheck",
    "satisfies_criterion",
    "is_choked",
    "MachRegion",
    "region_of",
    "oracle_jump_solutions",
]

# |k| below this is treated as an exactly vanishing composite gain.
K_ZERO_TOL = 1e-12
# |M - 1| below this is treated as sonic.
SONIC_TOL = 1e-9
# Relative distance to M1* or M2* below which the downstream flow is taken
# as exactly sonic; the sonic image is square-root sensitive to M- there.
CRITICAL_SNAP_TOL = 1e-12


@dataclass(frozen=True)
class SourceCoefficients:
    """Gains ``k1, k2, k3`` of the mass, momentum and energy source."""

    k1: float = 0.0
    k2: float = 0.0
    k3: float = 0.0

    def __post_init__(self):
        for name in ("k1", "k2", "k3"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if not (math.isfinite(v) and v > -1.0):
                raise ValueError(f"{name} > -1 required, got {v!r}")

    @property
    def k(self) -> float:
        return composite_k(self)

    @property
    def is_zero(self) -> bool:
        return self.k1 == 0.0 and self.k2 == 0.0 and self.k3 == 0.0

    def gains(self):
        return np.array([1.0 + self.k1, 1.0 + self.k2, 1.0 + self.k3])

    def transformed(self) -> "SourceCoefficients":
        """Coefficients ``-ki / (1 + ki)`` of the inverse stationary map."""
        return SourceCoefficients(
            -self.k1 / (1.0 + self.k1), -self.k2 / (1.0 + self.k2), -self.k3 / (1.0 + self.k3)
        )


def composite_k(coeffs: SourceCoefficients) -> float:
    k = (1.0 + coeffs.k1) * (1.0 + coeffs.k3) / (1.0 + coeffs.k2) ** 2 - 1.0
    return 0.0 if abs(k) <= K_ZERO_TOL else k


def transform_k(k: float) -> float:
    """Composite gain of the transformed coefficients."""
    return -k / (1.0 + k)


def _check_k(k):
    if not (math.isfinite(k) and k > -1.0):
        raise ValueError(f"k > -1 required, got {k!r}")


def _check_mach(m):
    if not (math.isfinite(m) and m > 0.0):
        raise ValueError(f"Mach number must be finite and positive, got {m!r}")


def _radicand(m, k, g):
    m2 = m * m
    return ((m - 1.0) * (m + 1.0)) ** 2 - k * (g + 1.0) * m2 * ((g - 1.0) * m2 + 2.0)


def i_value(m_minus, k, model: GasModel) -> float:
    """Discriminant-like quantity ``I`` of the downstream Mach equation, in ``[0, 1]``.

    Raises
    ------
    NoSolutionError
        If the radicand is negative, i.e. no stationary wave exists at ``m_minus``.
    """
    _check_mach(m_minus)
    _check_k(k)
    g = model.gamma
    scale = g * m_minus * m_minus + 1.0
    r = _radicand(m_minus, k, g)
    if r < 0.0:
        # rounding at an exact critical Mach number
        if r >= -1e-13 * scale * scale:
            r = 0.0
        else:
            raise NoSolutionError(f"no stationary wave at M- = {m_minus!r} for k = {k!r}")
    return math.sqrt(r) / scale


def _one_minus_i(m, k, g, i):
    """``1 - I`` without cancellation at small ``m``.

    Uses ``(gM^2+1)^2 - R = (1+k)(g+1)M^2((g-1)M^2+2)``.
    """
    m2 = m * m
    q = g * m2 + 1.0
    return (1.0 + k) * (g + 1.0) * m2 * ((g - 1.0) * m2 + 2.0) / (q * q * (1.0 + i))


class Branch(enum.Enum):
    SUBSONIC = "subsonic"
    SUPERSONIC = "supersonic"


def branch_mach(branch: Branch, m_minus, k, model: GasModel) -> float:
    """Downstream Mach number on the requested branch.

    The supersonic branch returns ``inf`` at ``gamma * I == 1``.
    """
    i = i_value(m_minus, k, model)
    g = model.gamma
    if branch is Branch.SUBSONIC:
        return math.sqrt(_one_minus_i(m_minus, k, g, i) / (1.0 + g * i))
    gi = g * i
    if gi > 1.0:
        raise BranchUndefinedError(f"gamma * I = {gi!r} > 1 at M- = {m_minus!r}")
    if gi == 1.0:
        return math.inf
    return math.sqrt((1.0 + i) / (1.0 - gi))


def downstream_mach(m_minus, k, model: GasModel, sonic_tol=SONIC_TOL) -> tuple:
    """Admissible downstream Mach numbers, subsonic candidate first.

    Returns a single value except for ``k < 0`` with sonic upstream flow, where
    both the subsonic and the (finite) supersonic branch are admissible.
    """
    _check_mach(m_minus)
    _check_k(k)
    if abs(k) <= K_ZERO_TOL:
        return (m_minus,)
    if abs(m_minus - 1.0) <= sonic_tol:
        if k > 0.0:
            raise NoSolutionError(f"sonic upstream flow has no stationary wave for k = {k!r} > 0")
        crit = critical_machs(k, model)
        if math.isinf(crit.m2_dstar):
            return (crit.m1_dstar,)
        return (crit.m1_dstar, crit.m2_dstar)
    if k > 0.0:
        crit = critical_machs(k, model)
        for mc in (crit.m1_star, crit.m2_star):
            if math.isfinite(mc) and abs(m_minus - mc) <= CRITICAL_SNAP_TOL * mc:
                return (1.0,)
    if m_minus < 1.0:
        return (branch_mach(Branch.SUBSONIC, m_minus, k, model),)
    try:
        mp = branch_mach(Branch.SUPERSONIC, m_minus, k, model)
    except BranchUndefinedError as exc:
        raise NoSolutionError(str(exc)) from exc
    if math.isinf(mp):
        raise NoSolutionError(f"downstream Mach number is unbounded at M- = {m_minus!r}")
    return (mp,)


def upstream_mach(m_plus, k, model: GasModel, sonic_tol=SONIC_TOL) -> tuple:
    """Admissible upstream Mach numbers for a given downstream Mach number.

    The inverse map is the forward map with the transformed gain ``-k/(1+k)``.
    """
    _check_k(k)
    kt = transform_k(k)
    if abs(kt) <= K_ZERO_TOL:
        kt = 0.0
    return downstream_mach(m_plus, kt, model, sonic_tol)


def state_ratios(m_minus, m_plus, coeffs: SourceCoefficients, model: GasModel):
    """``(rho+/rho-, u+/u-, p+/p-)`` for the given Mach pair."""
    g = model.gamma
    a1, a2 = 1.0 + coeffs.k1, 1.0 + coeffs.k2
    qm = g * m_minus * m_minus + 1.0
    qp = g * m_plus * m_plus + 1.0
    s = (m_minus / m_plus) ** 2
    rho_ratio = s * qp / qm * a1 * a1 / a2
    u_ratio = qm / (s * qp) * a2 / a1
    p_ratio = qm / qp * a2
    return rho_ratio, u_ratio, p_ratio


@dataclass(frozen=True)
class StationaryWavePair:
    """Equilibrium states on both sides of the origin."""

    left_state: GasState
    right_state: GasState
    coeffs: SourceCoefficients
    choked: bool
    model: GasModel = field(default_factory=GasModel)


def _sonic(m, tol):
    return abs(abs(m) - 1.0) <= tol


def forward_curve(u_minus: GasState, coeffs: SourceCoefficients, model: GasModel,
                  sonic_tol=SONIC_TOL) -> tuple:
    """Downstream states reachable from ``u_minus`` (``u > 0``) through the source.

    Raises
    ------
    NegativeVelocityError
        If ``u_minus.u <= 0``; mirror the problem first.
    NoSolutionError
        If the upstream Mach number is outside the admissible set.
    """
    if not u_minus.u > 0.0:
        raise NegativeVelocityError(f"upstream velocity must be positive, got {u_minus.u!r}")
    if coeffs.is_zero:
        return (StationaryWavePair(u_minus, u_minus, coeffs, _sonic(mach_number(u_minus, model), sonic_tol), model),)
    m = mach_number(u_minus, model)
    pairs = []
    for mp in downstream_mach(m, coeffs.k, model, sonic_tol):
        rr, ur, pr = state_ratios(m, mp, coeffs, model)
        right = GasState(u_minus.rho * rr, u_minus.u * ur, u_minus.p * pr)
        choked = _sonic(m, sonic_tol) or _sonic(mp, sonic_tol)
        pairs.append(StationaryWavePair(u_minus, right, coeffs, choked, model))
    return tuple(pairs)


def backward_curve(u_plus: GasState, coeffs: SourceCoefficients, model: GasModel,
                   sonic_tol=SONIC_TOL) -> tuple:
    """Upstream states that the source maps onto ``u_plus`` (``u > 0``)."""
    if not u_plus.u > 0.0:
        raise NegativeVelocityError(f"downstream velocity must be positive, got {u_plus.u!r}")
    inverse = forward_curve(u_plus, coeffs.transformed(), model, sonic_tol)
    return tuple(
        StationaryWavePair(p.right_state, u_plus, coeffs, p.choked, model) for p in inverse
    )


def jump_residual(left: GasState, right: GasState, coeffs: SourceCoefficients,
                  model: GasModel, upstream="left") -> float:
    """Largest componentwise relative defect of the stationary jump relation.

    ``upstream`` names the side the flow comes from: ``"left"`` checks
    ``F(right) = G F(left)``, ``"right"`` checks ``F(left) = G F(right)``.
    """
    if upstream == "left":
        up, down = left, right
    elif upstream == "right":
        up, down = right, left
    else:
        raise ValueError(f"upstream must be 'left' or 'right', got {upstream!r}")
    lhs = flux(down, model).as_array()
    rhs = coeffs.gains() * flux(up, model).as_array()
    scale = np.maximum(np.abs(lhs), np.abs(rhs))
    scale = np.where(scale > 0.0, scale, 1.0)
    return float(np.max(np.abs(lhs - rhs) / scale))


@dataclass(frozen=True)
class CriticalMachNumbers:
    """Boundaries of the admissible Mach ranges for a composite gain ``k``.

    ``m*_star`` values are set for ``k >= 0`` and ``m*_dstar`` values for
    ``k <= 0``; the other group is ``None``.
    """

    k: float
    gamma: float
    m1_star: float | None = None
    m2_star: float | None = None
    m3_star: float | None = None
    m1_dstar: float | None = None
    m2_dstar: float | None = None
    m3_dstar: float | None = None


def critical_machs(k, model: GasModel) -> CriticalMachNumbers:
    """Critical Mach numbers in rationalised closed form.

    For ``k > 0`` the sonic pre-images ``M1* < 1 < M2*`` and the supersonic
    limit ``M3*``; for ``k < 0`` the sonic images ``M1** < 1 < M2**`` and the
    supersonic upstream bound ``M3**``.  The expressions are multiplied
    through by their conjugates so that none of them loses accuracy near
    ``k = 1/(gamma^2 - 1)`` or ``k = -1/gamma^2``.
    """
    _check_k(k)
    g = model.gamma
    out = {}
    if k >= 0.0:
        q = k * (g + 1.0) + 1.0 + (g + 1.0) * math.sqrt(k * (k + 1.0))
        den = 1.0 - k * (g * g - 1.0)
        out["m1_star"] = math.sqrt(1.0 / q)
        if den > 0.0:
            s = math.sqrt(den)
            out["m2_star"] = math.sqrt(q / den)
            d3 = g * k * (g * g - 1.0)
            out["m3_star"] = math.sqrt((g + s) * (1.0 + s) / d3) if d3 > 0.0 else math.inf
        else:
            out["m2_star"] = math.inf
            out["m3_star"] = math.inf
    if k <= 0.0:
        r = math.sqrt(-k)
        out["m1_dstar"] = math.sqrt((1.0 - r) / (1.0 + g * r))
        out["m2_dstar"] = math.sqrt((1.0 + r) / (1.0 - g * r)) if g * r < 1.0 else math.inf
        if k == 0.0:
            out["m3_dstar"] = math.inf
        elif 1.0 + k * g * g > 0.0:
            a = math.sqrt(1.0 + k)
            b = math.sqrt(1.0 + k * g * g)
            diff = -k * (g * g - 1.0) / (a + b)
            d3 = g * diff
            out["m3_dstar"] = math.sqrt((g * a + b) / d3) if d3 > 0.0 else math.inf
        else:
            out["m3_dstar"] = 1.0
    return CriticalMachNumbers(k=k, gamma=g, **out)


@dataclass(frozen=True)
class Interval:
    """Real interval with independently open or closed ends; ``hi`` may be ``inf``."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = False

    @property
    def empty(self) -> bool:
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def contains(self, x, tol=0.0) -> bool:
        if self.empty:
            return False
        lo_ok = x >= self.lo - tol if self.lo_closed else x > self.lo
        hi_ok = x <= self.hi + tol if self.hi_closed else x < self.hi
        return lo_ok and hi_ok


@dataclass(frozen=True)
class AdmissibleSets:
    """Upstream and downstream Mach sets, each split into (subsonic, supersonic) branch."""

    k: float
    gamma_minus: tuple
    gamma_plus: tuple

    def contains_minus(self, m, tol=SONIC_TOL) -> bool:
        return any(iv.contains(m, tol) for iv in self.gamma_minus)

    def contains_plus(self, m, tol=SONIC_TOL) -> bool:
        return any(iv.contains(m, tol) for iv in self.gamma_plus)


def admissible_sets(k, model: GasModel) -> AdmissibleSets:
    """Admissible upstream/downstream Mach sets keyed by the sign of ``k``.

    When the supersonic branch does not exist at all (``k >= 1/(gamma^2-1)``
    or ``k <= -1/gamma^2``) the corresponding supersonic interval is empty
    on both sides.
    """
    _check_k(k)
    inf = math.inf
    sub = Interval(0.0, 1.0, False, True)
    if k == 0.0:
        sup = Interval(1.0, inf, True, False)
        return AdmissibleSets(k, (sub, sup), (sub, sup))
    c = critical_machs(k, model)
    if k > 0.0:
        m_sub = Interval(0.0, c.m1_star, False, True)
        if math.isinf(c.m2_star):
            m_sup = Interval(inf, inf, True, False)
            p_sup = Interval(1.0, 1.0, True, False)
        else:
            m_sup = Interval(c.m2_star, inf, True, False)
            p_sup = Interval(1.0, c.m3_star, True, False)
        return AdmissibleSets(k, (m_sub, m_sup), (sub, p_sup))
    m_sup = Interval(1.0, c.m3_dstar, True, False)
    p_sub = Interval(0.0, c.m1_dstar, False, True)
    p_sup = Interval(c.m2_dstar, inf, True, False)
    return AdmissibleSets(k, (sub, m_sup), (p_sub, p_sup))


@dataclass(frozen=True)
class CriterionCheck:
    """Outcome of the admissibility test for a pair of equilibrium states.

    ``products`` are the eigenvalue products ``lambda_k(U-) lambda_k(U+)``;
    ``eigen_form`` and ``mach_form`` are the two equivalent verdicts.
    """

    satisfied: bool
    eigen_form: bool
    mach_form: bool
    products: tuple

    def __bool__(self):
        return bool(self.satisfied)


def satisfies_criterion(u_minus: GasState, u_plus: GasState, model: GasModel,
                        tol=0.0) -> CriterionCheck:
    """Monotonicity criterion in eigenvalue form and in Mach form.

    Characteristic speeds (and ``|M| - 1``) within ``tol`` of zero, measured in
    units of the local sound speed, count as zero.
    """
    am, ap = sound_speed(u_minus, model), sound_speed(u_plus, model)
    lm = (u_minus.u - am, u_minus.u, u_minus.u + am)
    lp = (u_plus.u - ap, u_plus.u, u_plus.u + ap)
    products = tuple(a * b for a, b in zip(lm, lp))

    def snap(x, a):
        return 0.0 if abs(x) <= tol * a else x

    eigen_form = all(snap(a, am) * snap(b, ap) >= 0.0 for a, b in zip(lm, lp))
    # sign(|u| - a) is the sign of (|M| - 1), computed without division
    mach_form = (snap(u_minus.u, am) * snap(u_plus.u, ap) >= 0.0) and (
        snap(abs(u_minus.u) - am, am) * snap(abs(u_plus.u) - ap, ap) >= 0.0
    )
    return CriterionCheck(bool(eigen_form and mach_form), bool(eigen_form), bool(mach_form), products)


def is_choked(pair: StationaryWavePair, tol=SONIC_TOL) -> bool:
    """True when a characteristic speed vanishes on either side of the source."""
    worst = math.inf
    for s in (pair.left_state, pair.right_state):
        a = sound_speed(s, pair.model)
        worst = min(worst, abs(s.u - a) / a, abs(s.u + a) / a)
    return worst <= tol


class MachRegion(enum.Enum):
    OMEGA1 = "Omega1"
    OMEGA2 = "Omega2"
    OMEGA3 = "Omega3"
    OMEGA4 = "Omega4"
    BOUNDARY = "Boundary"


def region_of(m_minus, m_plus, tol=0.0) -> MachRegion:
    """Sub-area of the admissible Mach quadrants containing ``(m_minus, m_plus)``."""
    _check_mach(m_minus)
    if not m_plus > 0.0:
        raise ValueError(f"Mach number must be positive, got {m_plus!r}")
    sub = m_minus <= 1.0 + tol and m_plus <= 1.0 + tol
    sup = m_minus >= 1.0 - tol and m_plus >= 1.0 - tol
    if not (sub or sup):
        raise OutsideAdmissibleError(f"({m_minus!r}, {m_plus!r}) straddles the sonic line")
    if abs(m_plus - m_minus) <= tol or abs(m_minus - 1.0) <= tol or abs(m_plus - 1.0) <= tol:
        return MachRegion.BOUNDARY
    if sub:
        return MachRegion.OMEGA1 if m_plus > m_minus else MachRegion.OMEGA2
    return MachRegion.OMEGA3 if m_plus > m_minus else MachRegion.OMEGA4


def oracle_jump_solutions(u_minus: GasState, coeffs: SourceCoefficients, model: GasModel,
                          n_grid=40000) -> list:
    """All positive-pressure solutions of the stationary jump relation, by brute force.

    The mass and momentum rows give ``rho+ = m/u`` and ``p+ = P - m u`` for
    the unknown downstream velocity ``u``; the energy row leaves a scalar
    residual that is scanned on a dense grid over ``0 < u < P/m`` and
    bisected on every sign change.  No admissibility criterion is applied.
    Intended for verification only.
    """
    if not u_minus.u > 0.0:
        raise NegativeVelocityError(f"upstream velocity must be positive, got {u_minus.u!r}")
    g = model.gamma
    k1, k2, k3 = coeffs.k1, coeffs.k2, coeffs.k3
    mass = (1.0 + k1) * u_minus.rho * u_minus.u
    mom = (1.0 + k2) * (u_minus.rho * u_minus.u ** 2 + u_minus.p)
    enr = (1.0 + k3) * (total_energy(u_minus, model) + u_minus.p) * u_minus.u
    u_max = mom / mass

    def resid(u):
        return g / (g - 1.0) * (mom - mass * u) * u + 0.5 * mass * u * u - enr

    half = n_grid // 2
    grid = np.unique(np.concatenate([
        [0.0],
        np.geomspace(1e-12 * u_max, u_max, half, endpoint=False),
        np.linspace(0.0, u_max, n_grid - half, endpoint=False),
    ]))
    r = resid(grid)

    def bisect(a, b):
        ra = resid(a)
        for _ in range(200):
            c = 0.5 * (a + b)
            if b - a <= 1e-13 * b or c in (a, b):
                break
            rc = resid(c)
            if (rc > 0.0) == (ra > 0.0):
                a, ra = c, rc
            else:
                b = c
        return 0.5 * (a + b)

    roots = []
    sign_change = np.nonzero(np.sign(r[:-1]) * np.sign(r[1:]) < 0.0)[0]
    for i in sign_change:
        roots.append(bisect(grid[i], grid[i + 1]))
    exact = np.nonzero(r == 0.0)[0]
    roots.extend(float(grid[i]) for i in exact if grid[i] > 0.0)

    if not len(sign_change):
        # both roots may hide inside one cell: refine around the largest sample
        j = int(np.argmax(r))
        lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, len(grid) - 1)]
        for _ in range(200):
            a = lo + (hi - lo) / 3.0
            b = hi - (hi - lo) / 3.0
            if resid(a) < resid(b):
                lo = a
            else:
                hi = b
            if hi - lo <= 1e-15 * hi:
                break
        top = 0.5 * (lo + hi)
        rt = resid(top)
        if rt > 0.0:
            roots.append(bisect(grid[max(j - 1, 0)], top))
            roots.append(bisect(top, grid[min(j + 1, len(grid) - 1)]))
        elif rt >= -1e-14 * enr:
            roots.append(top)

    states = []
    for u in sorted(set(roots)):
        p = mom - mass * u
        if u > 0.0 and p > 0.0:
            states.append(GasState(float(mass / u), float(u), float(p)))
    return states
