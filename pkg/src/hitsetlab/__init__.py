"""Random hitting set laboratory.

Bernoulli random instances A in {0,1}^(m x n), solved four ways: greedy,
shuffled block greedy with analytic pick schedules, exact integer
programming, and the LP relaxation via a bounded-variable simplex.  The
theory module carries the closed-form estimates the schedules and tests
lean on; the experiments module sweeps parameter grids and emits the
sparse/dense phase-diagram data.
"""

from ._rng import split_seed
from .errors import (
    ConfigError,
    DegenerateError,
    DimensionOverflowError,
    DomainError,
    EmptyInputError,
    HitSetError,
    IndexOutOfRangeError,
    InfeasibleError,
    InvalidProbabilityError,
    ParseError,
    RegimeViolationError,
    TooLargeError,
)
from .experiments import (
    ExperimentConfig,
    ExperimentRecord,
    GridPoint,
    conjecture_probe,
    emit_plot_data,
    gap_report,
    load_config,
    run_sweep,
)
from .greedy import (
    AlgorithmTag,
    CoverSolution,
    Schedule,
    ScheduleCase,
    block_greedy,
    block_greedy_best_of,
    build_schedule,
    greedy,
    trivial_cover,
)
from .instance import (
    AssumptionClause,
    GenMeta,
    HSInstance,
    RegimeKind,
    RegimeLabel,
    RegimeThresholds,
    assumption_check,
    classify_regime,
    degree,
    dmax,
    from_dense,
    from_rows,
    generate,
    is_hitting_set,
    load,
    parse,
    save,
    serialize,
)
from .ip import (
    FirstMomentReport,
    IPResult,
    count_feasible_k,
    expected_Zk_log,
    first_moment_thresholds,
    solve_ip_bruteforce,
    solve_ip_exact,
)
from .lp import (
    LPSolution,
    LPStatus,
    lp_lower_bound,
    solve_lp,
    uniform_upper_bound,
)
from .theory import (
    BoundVariant,
    DmaxEstimate,
    DmaxFormula,
    binom_pmf_log,
    binom_pmf_lower_bound_log,
    binomial_monotonicity_check,
    chernoff_upper_tail,
    dmax_variance_bound,
    expected_dmax_estimate,
    g_n,
    lambert_w0,
    lambert_w0_bracket,
    sparse_target_degree,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmTag",
    "AssumptionClause",
    "BoundVariant",
    "ConfigError",
    "CoverSolution",
    "DegenerateError",
    "DimensionOverflowError",
    "DmaxEstimate",
    "DmaxFormula",
    "DomainError",
    "EmptyInputError",
    "ExperimentConfig",
    "ExperimentRecord",
    "FirstMomentReport",
    "GenMeta",
    "GridPoint",
    "HSInstance",
    "HitSetError",
    "IPResult",
    "IndexOutOfRangeError",
    "InfeasibleError",
    "InvalidProbabilityError",
    "LPSolution",
    "LPStatus",
    "ParseError",
    "RegimeKind",
    "RegimeLabel",
    "RegimeThresholds",
    "RegimeViolationError",
    "Schedule",
    "ScheduleCase",
    "TooLargeError",
    "assumption_check",
    "binom_pmf_log",
    "binom_pmf_lower_bound_log",
    "binomial_monotonicity_check",
    "block_greedy",
    "block_greedy_best_of",
    "build_schedule",
    "chernoff_upper_tail",
    "classify_regime",
    "conjecture_probe",
    "count_feasible_k",
    "degree",
    "dmax",
    "dmax_variance_bound",
    "emit_plot_data",
    "expected_Zk_log",
    "expected_dmax_estimate",
    "first_moment_thresholds",
    "from_dense",
    "from_rows",
    "g_n",
    "gap_report",
    "generate",
    "greedy",
    "is_hitting_set",
    "lambert_w0",
    "lambert_w0_bracket",
    "load",
    "load_config",
    "lp_lower_bound",
    "parse",
    "run_sweep",
    "save",
    "serialize",
    "solve_ip_bruteforce",
    "solve_ip_exact",
    "solve_lp",
    "sparse_target_degree",
    "split_seed",
    "trivial_cover",
    "uniform_upper_bound",
]
