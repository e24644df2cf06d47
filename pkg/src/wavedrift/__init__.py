"""Steady periodic water waves with vorticity, solved in hodograph variables,
with tools for particle drift and numerical checks of monotonicity properties."""

from .core import HeightField, HodographGrid, VorticitySpec, WaveParameters
from .errors import (ConfigError, DomainError, NoBifurcationError, OutsideFluidError,
                     SolverError, StagnationError, WaveError)
from .fields import PhysicalFrame, derive_frame
from .kinematics import drift_profile, integrate_trajectory, traversal_and_drift
from .laminar import Bifurcation, LaminarProfile, find_bifurcation, solve_laminar
from .solver import BranchState, WaveSolution, continue_branch, newton_solve, residual
from .verify import VerificationReport, run_all

__version__ = "0.1.0"

__all__ = [
    "Bifurcation", "BranchState", "ConfigError", "DomainError", "HeightField", "HodographGrid",
    "LaminarProfile", "NoBifurcationError", "OutsideFluidError", "PhysicalFrame", "SolverError",
    "StagnationError", "VerificationReport", "VorticitySpec", "WaveError", "WaveParameters",
    "WaveSolution", "continue_branch", "derive_frame", "drift_profile", "find_bifurcation",
    "integrate_trajectory", "newton_solve", "residual", "run_all", "solve_laminar",
    "traversal_and_drift",
]
