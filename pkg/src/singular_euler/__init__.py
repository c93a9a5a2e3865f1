"""Exact Riemann solutions of the 1D Euler equations with a point source at ``x = 0``.

The source term ``delta(x) diag(k1, k2, k3) F(U)`` produces a stationary
discontinuity at the origin; the global solution couples it with classical
waves on each half-line.
"""

from .coupled import (
    PATTERNS,
    ResidualReport,
    RiemannProblem,
    SingularSolution,
    SolveOptions,
    StructureTag,
    StructureType,
    branches_agree,
    classify,
    double_branches,
    mirror,
    residual_report,
    sample,
    sample_profile,
    solve,
    table_verdict,
    verify_uniqueness_pair,
)
from .errors import (
    BranchUndefinedError,
    ClassificationConflictError,
    ConfigError,
    ConvergenceError,
    DomainError,
    InconsistentStatesError,
    NegativeVelocityError,
    NoAdmissibleStructureError,
    NonPhysicalStateError,
    NoSolutionError,
    OutsideAdmissibleError,
    ParseError,
    SingularEulerError,
    VacuumError,
    ValidationError,
)
from .gas import (
    ConservedVector,
    FluxVector,
    GasModel,
    GasState,
    conserved_from_primitive,
    eigenvalues,
    entropy_invariant,
    flux,
    mach_number,
    mirror_state,
    primitive_from_conserved,
    sound_speed,
    total_energy,
)
from .stationary import (
    AdmissibleSets,
    Branch,
    CriticalMachNumbers,
    CriterionCheck,
    Interval,
    MachRegion,
    SourceCoefficients,
    StationaryWavePair,
    admissible_sets,
    backward_curve,
    branch_mach,
    composite_k,
    critical_machs,
    downstream_mach,
    forward_curve,
    i_value,
    is_choked,
    jump_residual,
    oracle_jump_solutions,
    region_of,
    satisfies_criterion,
    state_ratios,
    transform_k,
    upstream_mach,
)
from .waves import (
    ClassicalWave,
    CRPSolution,
    Side,
    WaveFamily,
    WaveKind,
    contact_state,
    rarefaction_state,
    sample_crp,
    shock_speed,
    shock_state,
    solve_crp,
    wave_curve_velocity,
)

__version__ = "0.1.0"
