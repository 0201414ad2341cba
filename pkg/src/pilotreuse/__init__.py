"""Priority-weighted pilot reuse for multi-cell massive MIMO.

Hexagonal-torus rate estimation, closed-form two-group optimizer, greedy
n-group allocation and brute-force oracles.
"""
from .assignment import PilotAssignmentVector, c_net, c_sum, chi, is_valid, n_pil, optimal_fixed_length
from .channel import ChannelParams, DepthRates, estimate_depth_rates, linear_rate_model
from .errors import FeasibilityWarning, PilotReuseError
from .kernels import BACKEND
from .lattice import CellCoord, CellGrid, build_grid
from .multigroup import MultiGroupConfig, MultiGroupSolution, greedy_allocate
from .wsr2 import TwoGroupConfig, TwoGroupSolution, optimize, rho, thresholds

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CellCoord",
    "CellGrid",
    "ChannelParams",
    "DepthRates",
    "FeasibilityWarning",
    "MultiGroupConfig",
    "MultiGroupSolution",
    "PilotAssignmentVector",
    "PilotReuseError",
    "TwoGroupConfig",
    "TwoGroupSolution",
    "build_grid",
    "c_net",
    "c_sum",
    "chi",
    "estimate_depth_rates",
    "greedy_allocate",
    "is_valid",
    "linear_rate_model",
    "n_pil",
    "optimal_fixed_length",
    "optimize",
    "rho",
    "thresholds",
]
