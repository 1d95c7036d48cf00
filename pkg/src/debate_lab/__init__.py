"""Exact solvers and simulators for feature debates."""

from .answering import AnswerInterval, expected_payoff, second_mover_value, verify_nash
from .argumentation import ArgGameSpec, MinimaxResult, solve, stall_depth, truth_promotion_bound
from .engine import expected_error, last_mover_advantage, oscillation_profile, play_debate, worst_case_error
from .judge import Judge, belief_trajectory, biased_posterior_mean, posterior_mean
from .questions import Question, deviation, evaluate
from .worlds import PASS, ExplicitPrior, Marginal, ProductPrior, World, condition, run_experiment, sample_world

__version__ = "0.1.0"

__all__ = [
    "AnswerInterval",
    "ArgGameSpec",
    "ExplicitPrior",
    "Judge",
    "Marginal",
    "MinimaxResult",
    "PASS",
    "ProductPrior",
    "Question",
    "World",
    "belief_trajectory",
    "biased_posterior_mean",
    "condition",
    "deviation",
    "evaluate",
    "expected_error",
    "expected_payoff",
    "last_mover_advantage",
    "oscillation_profile",
    "play_debate",
    "posterior_mean",
    "run_experiment",
    "sample_world",
    "second_mover_value",
    "solve",
    "stall_depth",
    "truth_promotion_bound",
    "verify_nash",
    "worst_case_error",
]
