"""A choked stationary wave admits two branches, both giving the same solution.

With k > 0 and sonic flow just downstream of the source, the upstream Mach
number may be M1* or M2*.  The subsonic branch needs a left shock, the
supersonic one does not, and the sampled solutions coincide.
"""

import math

from singular_euler import (
    GasModel,
    GasState,
    SourceCoefficients,
    contact_state,
    critical_machs,
    double_branches,
    forward_curve,
    mach_number,
    rarefaction_state,
    solve,
    verify_uniqueness_pair,
)
from singular_euler.waves import WaveFamily

model = GasModel(1.4)
coeffs = SourceCoefficients(0.0, 0.0, 0.2)
crit = critical_machs(coeffs.k, model)
print(f"k = {coeffs.k:.3g}: M1* = {crit.m1_star:.8f}, M2* = {crit.m2_star:.8f}")
partner = math.sqrt((1 + 0.2 * crit.m1_star**2) / (1.4 * crit.m1_star**2 - 0.2))
print(f"normal-shock partner of M1* = {partner:.8f}")

UL = GasState(1.0, crit.m2_star * math.sqrt(1.4), 1.0)
Up = forward_curve(UL, coeffs, model)[0].right_state
U3 = rarefaction_state(WaveFamily.ONE, 0.7 * Up.p, Up, model)
UR = contact_state(U3, 1.3 * U3.rho)

sol = solve(UL, UR, coeffs, model)
print(f"\nsolver picks {sol.tag.value} ({sol.structure.pattern})")
for i, branch in enumerate(double_branches(sol)):
    um = branch.stationary.left_state
    waves = ", ".join(w.kind.value for w in branch.left_waves) or "none"
    print(f"  branch {i}: M(0-) = {mach_number(um, model):.8f}, waves left of the source: {waves}")
print("branches agree at 100 samples:", verify_uniqueness_pair(UL, UR, coeffs, model))
