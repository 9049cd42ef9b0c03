from .config import ExperimentConfig
from .reference import ReferenceResult, compute_reference_d
from .scenarios import (
    SCHEMA_VERSION,
    SWEEP_COLUMNS,
    SweepRow,
    resolve_constants,
    run_anchoring_selection,
    run_column,
    run_droplet,
    run_flat_member,
    run_gamma_sweep,
    run_scenario,
    write_sweep_csv,
)

__all__ = [
    "ExperimentConfig",
    "ReferenceResult",
    "compute_reference_d",
    "SCHEMA_VERSION",
    "SWEEP_COLUMNS",
    "SweepRow",
    "resolve_constants",
    "run_anchoring_selection",
    "run_column",
    "run_droplet",
    "run_flat_member",
    "run_gamma_sweep",
    "run_scenario",
    "write_sweep_csv",
]
