"""Sod shock tube with a point source at the diaphragm.

The same initial data are solved with a heating source (k > 0), with no
source, and with a cooling source (k < 0).  The structure changes from a
left rarefaction plus subsonic jump to a sonic jump with a second
rarefaction downstream.
"""

import numpy as np

from singular_euler import (
    GasModel,
    GasState,
    SourceCoefficients,
    mach_number,
    residual_report,
    sample,
    solve,
)

model = GasModel(1.4)
UL = GasState(1.0, 0.0, 1.0)
UR = GasState(0.125, 0.0, 0.1)


def show(label, coeffs):
    sol = solve(UL, UR, coeffs, model)
    print(f"\n{label}: k = {coeffs.k:+.3f}")
    print(f"  structure {sol.tag.value:<20} pattern {sol.structure.pattern}")
    if sol.stationary is not None:
        um, up = sol.origin_states
        print(f"  M(0-) = {mach_number(um, model):.6f}   M(0+) = {mach_number(up, model):.6f}")
        print(f"  p(0-) = {um.p:.6f}   p(0+) = {up.p:.6f}")
    else:
        print(f"  p* = {sol.classical.p_star:.6f}   u* = {sol.classical.u_star:.6f}")
    print(f"  max residual {residual_report(sol).max_residual:.1e}")
    print("      xi      rho        u        p")
    for xi in np.linspace(-1.5, 2.0, 8):
        s = sample(sol, xi)
        print(f"  {xi:+6.2f}  {s.rho:8.5f} {s.u:8.5f} {s.p:8.5f}")


show("no source", SourceCoefficients())
show("heating", SourceCoefficients(0.0, 0.0, 0.2))
show("cooling", SourceCoefficients(0.0, 0.0, -0.2))
show("balanced coefficients", SourceCoefficients(0.1, 0.1, 0.1))
