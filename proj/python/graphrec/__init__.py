"""Recovery of sparse symmetric graph matrices from A = B Y + Z."""

from ._graphrec import (
    ConfigError,
    Error,
    NumericalError,
    SizeGuardError,
    entropy_er,
    entropy_uniform_trees,
    er_sparsity_profile,
    fano_floor,
    ingest,
    metrics,
    min_measurements,
    read_matrix_csv,
    recover,
    ric,
    run_trials,
    sample_graph,
    solve_l1,
    spark,
    sufficient_m_noiseless,
    sweep_csv,
    synthetic_problem,
    write_matrix_csv,
    xi,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Error",
    "NumericalError",
    "SizeGuardError",
    "entropy_er",
    "entropy_uniform_trees",
    "er_sparsity_profile",
    "fano_floor",
    "ingest",
    "metrics",
    "min_measurements",
    "read_matrix_csv",
    "recover",
    "ric",
    "run_trials",
    "sample_graph",
    "solve_l1",
    "spark",
    "sufficient_m_noiseless",
    "sweep_csv",
    "synthetic_problem",
    "write_matrix_csv",
    "xi",
]
