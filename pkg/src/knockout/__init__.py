"""Random knockout tournaments under the Bradley-Terry match model.

Exact win and reach probabilities, analytic bounds, exhaustive format search
and seeded Monte Carlo estimation.
"""

__version__ = "0.1.0"

from .core import (
    BalancedDecomposition,
    Format,
    FormatError,
    GuardExceeded,
    InstanceError,
    KnockoutError,
    PlayerValues,
    balanced_decomposition,
    balanced_format,
    count_formats,
    enumerate_formats,
    match_win_prob,
    mean_opponent_win_prob,
    parse_format,
    parse_instance,
    sequential_format,
    validate_format,
)
from .exact import (
    EXACT_GUARD,
    ReachMatrix,
    TournamentEngine,
    joint_reach_probabilities,
    reach_matrix,
    reach_probabilities,
    round_transition,
    special_case_win_prob,
    weight_process_check,
    win_probabilities,
)
from .bounds import (
    BoundsReport,
    bounds_report,
    poisson_binomial_pmf,
    theorem1_bounds,
    thm2_upper,
    thm3_lower,
    universal_upper,
    weak_lower,
)
from .montecarlo import EstimateReport, SplitMix64, estimate, simulate_once
from .optimize import (
    SearchResult,
    VerificationReport,
    reproduce_counterexamples,
    search_formats,
    verify_special_case_theorems,
    verify_weakest_player_theorem,
)
