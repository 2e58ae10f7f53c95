"""Minimum spanning acycles and persistence lifetimes on filtered complexes,
with Monte Carlo experiments over random simplicial complex processes."""

from .acycles import (
    PreconditionError,
    SpanningAcycleResult,
    StructuralError,
    det_expansion_check,
    gamma,
    is_spanning_acycle,
    kalai_census,
    kalai_sum,
    lifetime_via_msa,
    max_complement_weight,
    min_spanning_acycle,
    rank_bound_check,
    shadow,
    torsion_order,
)
from .asymptotics import (
    LimitEvaluation,
    c_star,
    frieze_constant_by_substitution,
    h,
    janson_sigma2,
    limit_constant,
    psi,
    t_c,
    t_star,
    zeta,
)
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    IdentityViolationError,
    estimate_rho,
    run_trials,
    scaling_study,
    verify_identity,
)
from .linalg import RankOracle, SmithForm, SparseColumnMatrix, determinant, rank, smith_normal_form
from .morse import AcyclicMatching, critical_count, expected_critical, lex_matching, verify_acyclic
from .persistence import (
    BettiCurve,
    PersistenceDiagram,
    betti_curve,
    compute_persistence,
    integrate_betti,
    l2_norm_sq,
    l2_via_integral,
    lifetime_sum,
    persistent_betti,
)
from .processes import ProcessSpec, SeedSpec, clique_process, lm_process, uniform_complex
from .simplicial import (
    BoundaryMatrix,
    DomainError,
    Filtration,
    SimplicialComplex,
    boundary_matrix,
    build_skeleton,
    filtration_events,
    read_filtration,
    write_filtration,
)

__version__ = "0.1.0"
