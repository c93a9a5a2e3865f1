"""Ideal-gas states, equation of state, eigenstructure and flux.

Primitive variables ``(rho, u, p)`` are canonical; the conserved vector is
derived on demand.  Every function is pure and takes the gas model
explicitly so several ratios of specific heats can coexist in one process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPhysicalStateError

__all__ = [
    "GasModel",
    "GasState",
    "ConservedVector",
    "FluxVector",
    "sound_speed",
    "mach_number",
    "total_energy",
    "flux",
    "eigenvalues",
    "conserved_from_primitive",
    "primitive_from_conserved",
    "entropy_invariant",
    "mirror_state",
]


@dataclass(frozen=True)
class GasModel:
    """Polytropic ideal gas, ``p = (gamma - 1) rho e``."""

    gamma: float = 1.4

    def __post_init__(self):
        object.__setattr__(self, "gamma", float(self.gamma))
        if not (math.isfinite(self.gamma) and self.gamma > 1.0):
            raise ValueError(f"gamma > 1 required, got {self.gamma!r}")


@dataclass(frozen=True)
class GasState:
    """Primitive state; vacuum (``rho <= 0`` or ``p <= 0``) is rejected."""

    rho: float
    u: float
    p: float

    def __post_init__(self):
        for name in ("rho", "u", "p"):
            object.__setattr__(self, name, float(getattr(self, name)))
            if not math.isfinite(getattr(self, name)):
                raise NonPhysicalStateError(f"{name} must be finite, got {getattr(self, name)!r}")
        if self.rho <= 0.0:
            raise NonPhysicalStateError(f"rho > 0 required, got {self.rho!r}")
        if self.p <= 0.0:
            raise NonPhysicalStateError(f"p > 0 required, got {self.p!r}")

    def as_tuple(self):
        return (self.rho, self.u, self.p)


@dataclass(frozen=True)
class ConservedVector:
    mass: float
    momentum: float
    energy: float

    def as_array(self):
        return np.array([self.mass, self.momentum, self.energy])


@dataclass(frozen=True)
class FluxVector:
    mass_flux: float
    momentum_flux: float
    energy_flux: float

    def as_array(self):
        return np.array([self.mass_flux, self.momentum_flux, self.energy_flux])


def sound_speed(state: GasState, model: GasModel) -> float:
    return math.sqrt(model.gamma * state.p / state.rho)


def mach_number(state: GasState, model: GasModel) -> float:
    """Signed Mach number ``u / a``."""
    return state.u / sound_speed(state, model)


def total_energy(state: GasState, model: GasModel) -> float:
    return state.p / (model.gamma - 1.0) + 0.5 * state.rho * state.u * state.u


def flux(state: GasState, model: GasModel) -> FluxVector:
    rho, u, p = state.rho, state.u, state.p
    energy = total_energy(state, model)
    return FluxVector(rho * u, rho * u * u + p, (energy + p) * u)


def eigenvalues(state: GasState, model: GasModel) -> tuple[float, float, float]:
    a = sound_speed(state, model)
    return (state.u - a, state.u, state.u + a)


def conserved_from_primitive(state: GasState, model: GasModel) -> ConservedVector:
    return ConservedVector(state.rho, state.rho * state.u, total_energy(state, model))


def primitive_from_conserved(v: ConservedVector, model: GasModel) -> GasState:
    if not v.mass > 0.0:
        raise NonPhysicalStateError(f"mass > 0 required, got {v.mass!r}")
    u = v.momentum / v.mass
    p = (model.gamma - 1.0) * (v.energy - 0.5 * v.momentum * u)
    if not p > 0.0:
        raise NonPhysicalStateError(f"recovered pressure {p!r} is not positive")
    return GasState(v.mass, u, p)


def entropy_invariant(state: GasState, model: GasModel) -> float:
    """``p / rho**gamma``, a monotone function of the specific entropy."""
    return state.p / state.rho**model.gamma


def mirror_state(state: GasState) -> GasState:
    """Image of a state under ``x -> -x, u -> -u``."""
    return GasState(state.rho, -state.u, state.p)
