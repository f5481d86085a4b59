"""Sharp upper bounds on G_n/A_n when some of the n numbers are known."""

from .bounds import (
    BoundReport,
    Completion,
    Formula,
    extremal_completion,
    extremal_completion_am,
    extremal_completion_gm,
    mean_ratio,
    objective_f,
    objective_g,
    optimal_lambdas_am,
    optimal_lambdas_gm,
    tung_bound,
    tung_bound_am,
    tung_bound_gm,
    tung_gap,
    xia_bound,
    xia_bound_am,
    xia_bound_gm,
)
from .instance import (
    FEASIBILITY_TOL,
    BoundsError,
    DegenerateError,
    DomainError,
    FeasibilityError,
    InvalidLambdaError,
    KnownRatios,
    Mode,
    ModeError,
    Verdict,
    validate,
)
from .oracle import (
    DominanceRecord,
    OracleConfig,
    OracleResult,
    SoundnessReport,
    dominance_grid,
    maximize_ratio,
    soundness_sweep,
)
from .sampling import random_completions, random_instance

__version__ = "0.1.0"
