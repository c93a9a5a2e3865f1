"""Critical Mach numbers and admissible Mach ranges as the source gain varies.

For k > 0 no stationary wave exists for upstream Mach numbers between M1*
and M2*; for k < 0 the supersonic upstream range is capped at M3**.
"""

from singular_euler import GasModel, SourceCoefficients, admissible_sets, critical_machs
from singular_euler.cli import critical_report


def fmt(x):
    return "inf" if x == float("inf") else f"{x:.6f}"


for gamma in (1.2, 1.4, 1.67):
    model = GasModel(gamma)
    print(f"\ngamma = {gamma}")
    print("      k        M1          M2          M3")
    for k in (-0.5, -0.2, -0.05, 0.05, 0.2, 0.5, 1.2):
        c = critical_machs(k, model)
        trio = (c.m1_star, c.m2_star, c.m3_star) if k > 0 else (c.m1_dstar, c.m2_dstar, c.m3_dstar)
        print(f"  {k:+6.2f}  " + "  ".join(f"{fmt(v):>10}" for v in trio))

rep = critical_report(SourceCoefficients(0.0, 0.0, 0.2), GasModel(1.4))
print("\nadmissible sets, gamma = 1.4, k = 0.2")
print("  upstream:  ", " U ".join(rep["gamma_minus"]))
print("  downstream:", " U ".join(rep["gamma_plus"]))
sets = admissible_sets(0.2, GasModel(1.4))
for m in (0.5, 1.0, 1.5, 2.5):
    print(f"  M- = {m}: {'admissible' if sets.contains_minus(m) else 'no stationary wave'}")
