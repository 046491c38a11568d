"""Critical visibility of multi-setting GHZ correlations.

Finds the largest white-noise-free fraction ``V`` at which GHZ correlations
measured with given analyzer settings still admit a local hidden-variable
model, and searches the settings for the smallest such ``V``.
"""

from .lhv import CapExceededError, build_basis, enumerate_strategies, product_tensor
from .lp import LpSolution, build_problem, critical_visibility, solve_lp
from .optimizer import SimplexConfig, evaluate_fixed, minimize_vmax, nelder_mead, random_scan
from .quantum import AnalyzerDirection, SettingsGrid, correlation, correlation_tensor, joint_probability

__all__ = [
    "AnalyzerDirection",
    "CapExceededError",
    "LpSolution",
    "SettingsGrid",
    "SimplexConfig",
    "build_basis",
    "build_problem",
    "correlation",
    "correlation_tensor",
    "critical_visibility",
    "enumerate_strategies",
    "evaluate_fixed",
    "joint_probability",
    "minimize_vmax",
    "nelder_mead",
    "product_tensor",
    "random_scan",
    "solve_lp",
]

__version__ = "0.1.0"
