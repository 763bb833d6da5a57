"""Three-point finite-difference scheme for the 1D acoustic wave equation.

Includes numerical checks of its convergence order, discrete energy
identities and support cone.
"""

from .analysis import (
    ErrorField,
    ErrorKind,
    RefinementReport,
    convergence_error,
    max_norm_over_time,
    nonzero_count_bound,
    refinement_study,
    truncation_error,
)
from .continuous import (
    CauchyProblem,
    ExactSolution,
    continuous_energy,
    dalembert_eval,
    support_interval,
    traveling_bump_problem,
    zero_problem,
)
from .energy import (
    EnergyTrace,
    discrete_energy,
    energy_increment_residual,
    energy_lower_bound_gap,
    stability_bound_check,
)
from .errors import CFLViolation, ConfigError, InstabilityError, QuadratureError, WaveFDError
from .kernels import DEFAULT_BACKEND
from .scheme import (
    DiscreteSolution,
    GridSpec,
    check_cfl,
    sample_inputs,
    solve,
    solve_unchecked,
    space_index,
    support_cone,
    time_index,
)
from .seqspace import SupportSeq, apply_Ah, dot, dot_dx, norm_dx, seq_combine, seq_shift

__version__ = "0.1.0"
