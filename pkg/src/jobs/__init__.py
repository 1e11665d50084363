"""
Jobs for active-exclusion

Each job is independent and can be run separately:
- simulate: initial profile → lattice dynamics → field snapshots
- pde: initial profile → hydrodynamic equation → trajectory
- selfdiff: tagged-particle runs → DsTable
- compare: simulator vs PDE over several N
- exactcheck: exact identities on tiny systems

Run jobs via CLI:
    aep simulate --side 64
    python -m src.jobs.pde
    python -m src.jobs.compare --sides 32 64 96
"""

from .common import EXIT_ASSERTION, EXIT_ERROR, EXIT_OK
from .compare import coarsen, l1_distance, log_log_slope, run_compare, time_averaged_distance
from .exactcheck import run_exactcheck
from .pde import run_pde
from .selfdiff import run_selfdiff
from .simulate import SimulationResult, run_simulate, simulate

__all__ = [
    # Exit codes
    "EXIT_OK",
    "EXIT_ASSERTION",
    "EXIT_ERROR",
    # Simulate
    "run_simulate",
    "simulate",
    "SimulationResult",
    # PDE
    "run_pde",
    # Selfdiff
    "run_selfdiff",
    # Compare
    "run_compare",
    "coarsen",
    "l1_distance",
    "time_averaged_distance",
    "log_log_slope",
    # Exactcheck
    "run_exactcheck",
]
