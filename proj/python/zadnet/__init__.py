"""Sparse distributed estimation over diffusion adaptive networks.

Thin Python surface over the C++ core: network construction, the ZA-ATC
diffusion simulator, Monte Carlo sweep harness, and the closed-form
steady-state expressions.
"""

from ._core import (
    AssumptionReport,
    CombinationMatrix,
    EnsembleResult,
    MomentEstimates,
    MsdTrace,
    OptimalRho,
    SimulationConfig,
    SparsityProfile,
    SteadyExtract,
    SweepResult,
    SystemModel,
    TheoryReport,
    Topology,
    __version__,
    build_metropolis,
    build_uniform,
    compare_to_theory,
    estimate_moments_from_states,
    extract_steady_state,
    generate_geometric_topology,
    ib_residual_of,
    make_sparse_model,
    make_theory_report,
    msd_floor_oracle,
    msd_floor_structured,
    phi_curve,
    phi_value,
    rho_opt_heterogeneous,
    rho_opt_homogeneous,
    run_ensemble,
    run_moment_pilot,
    run_realization,
    select_sparsity_set,
    sweep_ns_rho,
    topology_from_edges,
    validate_assumption_I,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
