"""Projection-free convex optimization over polytopes through a linear oracle.

The library keeps every iterate as an explicit convex combination of polytope
vertices and answers restricted linear subproblems through a local linear
oracle built on a single linear-minimization call. On top of that primitive
sit a linearly convergent solver for smooth strongly convex objectives, the
classic O(1/t) conditional gradient baseline, online solvers for convex /
strongly convex / bandit losses and a reduction to stochastic minimization.
The ``llocg`` command line runs reproducible benchmark experiments from JSON
configs and writes CSV traces, summaries and figures.
"""

from .polytopes import (
    Vertex,
    PolytopeSpec,
    DagGraph,
    OracleCounter,
    simplex,
    hypercube,
    flow_polytope,
    centered_simplex,
    custom_polytope,
    membership_check,
)
from .llo import (
    ConvexDecomposition,
    LLOResult,
    llo_query,
    llo_query_simplex,
    blend,
    reduce_decomposition,
    approx_reduction_budget,
    GeneralLLO,
    SimplexFastLLO,
    default_llo,
    default_redecompose_threshold,
)
from .objectives import (
    Objective,
    LossStream,
    make_lower_bound_objective,
    make_quadratic,
    make_linear_loss_stream,
    make_strongly_convex_stream,
    make_fixed_target_stream,
    make_target_mixture_stream,
    finite_diff_check,
)
from .offline import (
    OfflineConfig,
    IterationRecord,
    RunTrace,
    frank_wolfe,
    solve_smooth_strongly_convex,
    certify_linear_rate,
)
from .online import (
    OnlineConfig,
    RoundRecord,
    RegretReport,
    oco_general,
    oco_strongly_convex,
    stochastic_minimize,
    bandit_oco,
    compute_comparator,
    sample_unit_sphere,
)
from .bench import (
    ExperimentConfig,
    SummaryReport,
    run_experiment,
    projected_subgradient_baseline,
    project_to_simplex,
)

__version__ = "0.1.0"
