"""Classical elementary waves and the exact Riemann solver for the
homogeneous Euler equations.

The 1-family curves are parametrised by pressure and anchored at the state
on their left; the 3-family curves are anchored at the state on their
right.  ``solve_crp`` intersects the two composite curves in the
pressure-velocity plane.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, InconsistentStatesError, VacuumError
from .gas import (
    GasModel,
    GasState,
    conserved_from_primitive,
    eigenvalues,
    flux,
    sound_speed,
)

__all__ = [
    "WaveFamily",
    "WaveKind",
    "Side",
    "ClassicalWave",
    "CRPSolution",
    "shock_state",
    "rarefaction_state",
    "contact_state",
    "wave_state",
    "wave_curve_velocity",
    "shock_speed",
    "rh_residual",
    "normal_shock_pressure",
    "riemann_invariant",
    "build_wave",
    "solve_crp",
    "sample_crp",
    "sample_waves",
    "fan_state",
]


class WaveFamily(enum.IntEnum):
    ONE = 1
    TWO = 2
    THREE = 3


class WaveKind(enum.Enum):
    SHOCK = "shock"
    RAREFACTION = "rarefaction"
    CONTACT = "contact"


class Side(enum.Enum):
    """Which end of the Riemann fan the anchor state sits on."""

    FROM_LEFT_STATE = "left"
    FROM_RIGHT_STATE = "right"


@dataclass(frozen=True)
class ClassicalWave:
    """A shock, rarefaction or contact between two constant states.

    For discontinuities ``speed_lo == speed_hi``; for a rarefaction they are
    the slowest and fastest characteristic speeds of the fan.
    """

    family: WaveFamily
    kind: WaveKind
    left_state: GasState
    right_state: GasState
    speed_lo: float
    speed_hi: float

    @property
    def is_trivial(self) -> bool:
        return self.left_state == self.right_state

    @property
    def speed(self) -> float:
        return self.speed_lo


@dataclass(frozen=True)
class CRPSolution:
    """Exact solution of a classical Riemann problem."""

    left_state: GasState
    right_state: GasState
    p_star: float
    u_star: float
    rho_star_left: float
    rho_star_right: float
    waves: tuple
    model: GasModel

    @property
    def star_left(self) -> GasState:
        return self.waves[0].right_state

    @property
    def star_right(self) -> GasState:
        return self.waves[2].left_state


def _check_nonlinear(family):
    if family not in (WaveFamily.ONE, WaveFamily.THREE):
        raise ValueError(f"family must be 1 or 3, got {family!r}")
    return WaveFamily(family)


def shock_state(family, p, anchor: GasState, model: GasModel) -> GasState:
    """State on the Lax shock curve of ``anchor`` at pressure ``p >= anchor.p``."""
    family = _check_nonlinear(family)
    if not p >= anchor.p:
        raise DomainError(f"shock branch needs p >= {anchor.p!r}, got {p!r}")
    if p == anchor.p:
        return anchor
    g = model.gamma
    rho0, u0, p0 = anchor.rho, anchor.u, anchor.p
    rho = rho0 * ((g - 1.0) * p0 + (g + 1.0) * p) / ((g - 1.0) * p + (g + 1.0) * p0)
    du = (p - p0) * math.sqrt(2.0 / (rho0 * ((g + 1.0) * p + (g - 1.0) * p0)))
    u = u0 - du if family is WaveFamily.ONE else u0 + du
    return GasState(rho, u, p)


def rarefaction_state(family, p, anchor: GasState, model: GasModel) -> GasState:
    """State on the rarefaction curve of ``anchor`` at pressure ``0 < p <= anchor.p``."""
    family = _check_nonlinear(family)
    if not (0.0 < p <= anchor.p):
        raise DomainError(f"rarefaction branch needs 0 < p <= {anchor.p!r}, got {p!r}")
    if p == anchor.p:
        return anchor
    g = model.gamma
    ratio = p / anchor.p
    a0 = sound_speed(anchor, model)
    du = 2.0 * a0 / (g - 1.0) * (ratio ** ((g - 1.0) / (2.0 * g)) - 1.0)
    u = anchor.u - du if family is WaveFamily.ONE else anchor.u + du
    return GasState(anchor.rho * ratio ** (1.0 / g), u, p)


def contact_state(anchor: GasState, rho_other: float) -> GasState:
    return GasState(rho_other, anchor.u, anchor.p)


def wave_state(family, p, anchor: GasState, model: GasModel) -> GasState:
    """Composite 1- or 3-wave curve: shock above the anchor pressure, rarefaction below."""
    if p >= anchor.p:
        return shock_state(family, p, anchor, model)
    return rarefaction_state(family, p, anchor, model)


def wave_curve_velocity(side: Side, p, anchor: GasState, model: GasModel) -> float:
    """Velocity on the composite wave curve through ``anchor``.

    ``FROM_LEFT_STATE`` follows the 1-family curve (decreasing in ``p``),
    ``FROM_RIGHT_STATE`` the 3-family curve (increasing in ``p``).
    """
    if not p > 0.0:
        raise DomainError(f"p > 0 required, got {p!r}")
    g = model.gamma
    p0 = anchor.p
    if p > p0:
        f = (p - p0) * math.sqrt(2.0 / (anchor.rho * ((g + 1.0) * p + (g - 1.0) * p0)))
    else:
        a0 = sound_speed(anchor, model)
        f = 2.0 * a0 / (g - 1.0) * ((p / p0) ** ((g - 1.0) / (2.0 * g)) - 1.0)
    if side is Side.FROM_LEFT_STATE:
        return anchor.u - f
    return anchor.u + f


def riemann_invariant(state: GasState, family, model: GasModel) -> float:
    """``u + 2a/(gamma-1)`` (family 1) or ``u - 2a/(gamma-1)`` (family 3)."""
    family = _check_nonlinear(family)
    term = 2.0 * sound_speed(state, model) / (model.gamma - 1.0)
    return state.u + term if family is WaveFamily.ONE else state.u - term


def normal_shock_pressure(state: GasState, model: GasModel) -> float:
    """Post-shock pressure of the 1-shock that is stationary in the frame of the origin.

    Only meaningful for supersonic ``state`` (``u > a``).
    """
    g = model.gamma
    m2 = (state.u / sound_speed(state, model)) ** 2
    return state.p * (2.0 * g * m2 - (g - 1.0)) / (g + 1.0)


def rh_residual(left: GasState, right: GasState, sigma: float, model: GasModel) -> float:
    """Max-norm Rankine-Hugoniot residual relative to the local flux scale."""
    fl = flux(left, model).as_array()
    fr = flux(right, model).as_array()
    ul = conserved_from_primitive(left, model).as_array()
    ur = conserved_from_primitive(right, model).as_array()
    res = fr - fl - sigma * (ur - ul)
    scale = max(
        np.abs(fl).max(),
        np.abs(fr).max(),
        abs(sigma) * max(np.abs(ul).max(), np.abs(ur).max()),
        left.p,
        right.p,
    )
    return float(np.abs(res).max() / scale)


def shock_speed(family, left: GasState, right: GasState, model: GasModel, rh_tol=1e-9) -> float:
    """Speed of the 1- or 3-shock joining ``left`` and ``right``.

    The speed comes from the pre-shock state (left for a 1-shock, right for a
    3-shock); the full Rankine-Hugoniot system is then checked.
    """
    family = _check_nonlinear(family)
    if left == right:
        lam = eigenvalues(left, model)
        return lam[0] if family is WaveFamily.ONE else lam[2]
    g = model.gamma
    if family is WaveFamily.ONE:
        pre, post = left, right
        sigma = pre.u - sound_speed(pre, model) * math.sqrt(
            (g + 1.0) / (2.0 * g) * post.p / pre.p + (g - 1.0) / (2.0 * g)
        )
    else:
        pre, post = right, left
        sigma = pre.u + sound_speed(pre, model) * math.sqrt(
            (g + 1.0) / (2.0 * g) * post.p / pre.p + (g - 1.0) / (2.0 * g)
        )
    res = rh_residual(left, right, sigma, model)
    if res > rh_tol:
        raise InconsistentStatesError(
            f"states are not joined by a {int(family)}-shock (RH residual {res:.3e})"
        )
    return sigma


def build_wave(family, left: GasState, right: GasState, model: GasModel) -> ClassicalWave:
    """Wrap two states already joined by a 1- or 3-wave into a ``ClassicalWave``.

    Equal pressures give a zero-strength wave tagged as a rarefaction.
    """
    family = _check_nonlinear(family)
    k = 0 if family is WaveFamily.ONE else 2
    if family is WaveFamily.ONE:
        is_shock = right.p > left.p
    else:
        is_shock = left.p > right.p
    if is_shock:
        sigma = shock_speed(family, left, right, model)
        return ClassicalWave(family, WaveKind.SHOCK, left, right, sigma, sigma)
    lo = eigenvalues(left, model)[k]
    hi = eigenvalues(right, model)[k]
    return ClassicalWave(family, WaveKind.RAREFACTION, left, right, lo, max(lo, hi))


def _contact(left: GasState, right: GasState) -> ClassicalWave:
    return ClassicalWave(WaveFamily.TWO, WaveKind.CONTACT, left, right, left.u, left.u)


def solve_crp(UL: GasState, UR: GasState, model: GasModel, tol=1e-12, maxiter=200) -> CRPSolution:
    """Exact solution of the classical Riemann problem with data ``UL | UR``."""
    g = model.gamma
    aL = sound_speed(UL, model)
    aR = sound_speed(UR, model)
    if UR.u - UL.u >= 2.0 * (aL + aR) / (g - 1.0):
        raise VacuumError(
            f"pressure positivity violated: du = {UR.u - UL.u!r} >= {2.0 * (aL + aR) / (g - 1.0)!r}"
        )

    if UL == UR:
        p_star, u_star = UL.p, UL.u
    else:
        def f(p):
            return (
                wave_curve_velocity(Side.FROM_LEFT_STATE, p, UL, model)
                - wave_curve_velocity(Side.FROM_RIGHT_STATE, p, UR, model)
            )

        p_lo = 1e-12 * min(UL.p, UR.p)
        if f(p_lo) <= 0.0:
            raise VacuumError("star pressure falls below the bracket floor")
        p_hi = max(UL.p, UR.p)
        for _ in range(maxiter):
            if f(p_hi) <= 0.0:
                break
            p_lo, p_hi = p_hi, 2.0 * p_hi
        else:
            raise ConvergenceError("could not bracket the star pressure")
        try:
            p_star = brentq(f, p_lo, p_hi, xtol=1e-300, rtol=max(tol, 4.5e-16), maxiter=maxiter)
        except RuntimeError as exc:
            raise ConvergenceError(str(exc)) from exc
        u_star = 0.5 * (
            wave_curve_velocity(Side.FROM_LEFT_STATE, p_star, UL, model)
            + wave_curve_velocity(Side.FROM_RIGHT_STATE, p_star, UR, model)
        )

    star_l = wave_state(WaveFamily.ONE, p_star, UL, model)
    star_r = wave_state(WaveFamily.THREE, p_star, UR, model)
    star_l = GasState(star_l.rho, u_star, p_star) if star_l != UL else star_l
    star_r = GasState(star_r.rho, u_star, p_star) if star_r != UR else star_r
    waves = (
        build_wave(WaveFamily.ONE, UL, star_l, model),
        _contact(star_l, star_r),
        build_wave(WaveFamily.THREE, star_r, UR, model),
    )
    return CRPSolution(UL, UR, p_star, u_star, star_l.rho, star_r.rho, waves, model)


def fan_state(wave: ClassicalWave, xi: float, model: GasModel) -> GasState:
    """State inside a centred rarefaction fan at similarity coordinate ``xi``."""
    g = model.gamma
    c = 2.0 / (g + 1.0)
    if wave.family is WaveFamily.ONE:
        anchor = wave.left_state
        a0 = sound_speed(anchor, model)
        u = c * (a0 + 0.5 * (g - 1.0) * anchor.u + xi)
        a = c * (a0 + 0.5 * (g - 1.0) * (anchor.u - xi))
    else:
        anchor = wave.right_state
        a0 = sound_speed(anchor, model)
        u = c * (-a0 + 0.5 * (g - 1.0) * anchor.u + xi)
        a = c * (a0 - 0.5 * (g - 1.0) * (anchor.u - xi))
    ratio = a / a0
    return GasState(
        anchor.rho * ratio ** (2.0 / (g - 1.0)),
        u,
        anchor.p * ratio ** (2.0 * g / (g - 1.0)),
    )


def sample_waves(waves, xi, first_state, last_state, model, side="+"):
    """Sample a left-to-right ordered wave list at ``xi``.

    ``side`` picks the one-sided limit when ``xi`` sits exactly on a
    discontinuity: ``"-"`` for the left limit, ``"+"`` for the right one.
    Zero-strength waves are skipped.
    """
    state = first_state
    for w in waves:
        if w.is_trivial:
            continue
        if w.kind is WaveKind.RAREFACTION:
            if xi < w.speed_lo or (xi == w.speed_lo and side == "-"):
                return w.left_state
            if xi < w.speed_hi:
                return fan_state(w, xi, model)
        elif xi < w.speed_lo or (xi == w.speed_lo and side == "-"):
            return w.left_state
        state = w.right_state
    return state if waves else last_state


def sample_crp(sol: CRPSolution, xi: float, side="+") -> GasState:
    return sample_waves(sol.waves, xi, sol.left_state, sol.right_state, sol.model, side)
