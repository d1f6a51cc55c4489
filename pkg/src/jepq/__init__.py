"""Juggling exclusion chains with geometric throws: exact stationary laws
built from q-analogues and rook placements, brute-force verification, and
seeded Monte Carlo simulation.
"""

from .qcomb import (
    Scalar,
    euler_phi,
    gould_stirling,
    parse_scalar,
    partition_z,
    q_int,
    q_pochhammer,
    q_stirling,
)
from .jep import (
    BoundedGeometric,
    BoundedUniform,
    SteadyStats,
    ThrowModel,
    UnboundedGeometric,
    balance_residual,
    closed_form_stats,
    enumerate_states,
    stationary_distribution,
    stationary_prob,
    stationary_weight,
    step_kernel_row,
    theta,
    throw_pmf,
    throw_prob,
    truncated_geometric_pmf,
)
from .rook import (
    circ,
    enumerate_configs,
    extended_ground,
    extended_kernel_row,
    extended_prob,
    extended_weight,
    extensions,
    row_projection,
)
from .oracle import (
    ConvergenceRow,
    LimitRow,
    TransitionMatrix,
    build_extended_matrix,
    build_transition_matrix,
    coupling_bound,
    limit_rows_fixed_n,
    limit_rows_growing_n,
    solve_stationary,
    total_variation,
    tv_to_unbounded,
)
from .mc import (
    CoupledRun,
    RngStream,
    Trajectory,
    coupled_simulate,
    coupled_throw_pair,
    empirical_distribution,
    sample_throw,
    simulate,
)
from .verify import CheckResult, run_checks

__version__ = "0.1.0"
