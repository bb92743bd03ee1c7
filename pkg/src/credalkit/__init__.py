"""
credalkit: decisions with imprecise probabilities.

Credal sets of joint distributions over an observation X and a target Y,
with tools for the Ignore, global-minimax, local-minimax and Bayesian
strategies, dilation detection, and exact enumeration of Bayesian error
rates.
"""

from credalkit.credal import CredalSet, detect_dilation, marginal_fixed_credal
from credalkit.decision import DecisionRule, LossSpec, expected_loss
from credalkit.errors import CredalError, NumericalFailure
from credalkit.experiments import Scenario, preset, run_scenario
from credalkit.minimax import global_minimax_rule, local_minimax_rule, solve_matrix_game
from credalkit.probspace import FiniteDistribution, JointDistribution

__version__ = "0.1.0"

__all__ = [
    "CredalError",
    "CredalSet",
    "DecisionRule",
    "FiniteDistribution",
    "JointDistribution",
    "LossSpec",
    "NumericalFailure",
    "Scenario",
    "__version__",
    "detect_dilation",
    "expected_loss",
    "global_minimax_rule",
    "local_minimax_rule",
    "marginal_fixed_credal",
    "preset",
    "run_scenario",
    "solve_matrix_game",
]
