"""Overlapping Schwarz iterations over sine-network collocation solvers."""

from aspinn._core import (
    Box,
    CollocationBatch,
    ConfigError,
    ContractError,
    IterationRecord,
    Level,
    MlpNet,
    OracleHistory,
    OverlapPartition,
    PoissonProblem,
    RunReport,
    SchwarzConfig,
    SchwarzState,
    TrainingSets,
    asymptotic_ratio,
    build_partition,
    evaluate,
    fd_schwarz_run,
    fd_solve,
    init_net,
    laplacian,
    loss_and_grad,
    loss_value,
    optimal_tau,
    problem_by_id,
    rate_bound,
    relative_l2_error,
    run_schwarz,
    sample_training_sets,
    train,
)
from aspinn._core import __version__

__all__ = [
    "Box",
    "CollocationBatch",
    "ConfigError",
    "ContractError",
    "IterationRecord",
    "Level",
    "MlpNet",
    "OracleHistory",
    "OverlapPartition",
    "PoissonProblem",
    "RunReport",
    "SchwarzConfig",
    "SchwarzState",
    "TrainingSets",
    "asymptotic_ratio",
    "build_partition",
    "evaluate",
    "fd_schwarz_run",
    "fd_solve",
    "init_net",
    "laplacian",
    "loss_and_grad",
    "loss_value",
    "optimal_tau",
    "problem_by_id",
    "rate_bound",
    "relative_l2_error",
    "run_schwarz",
    "sample_training_sets",
    "train",
    "__version__",
]
