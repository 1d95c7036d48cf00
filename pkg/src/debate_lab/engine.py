"""Full debate playouts, transcripts and truth-promotion metrics."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .answering import AnswerInterval
from .argumentation import ArgGameSpec, MinimaxResult, solve, truth_promotion_bound
from .errors import AnswersOutsideLambda
from .judge import BeliefTrajectory, Judge, belief_trajectory, count_crossings
from .questions import Question, evaluate
from .worlds import PASS, ExplicitPrior, Prior, ProductPrior, World, as_world, make_reveals

AnswerPolicy = Union[str, tuple]
POLICIES = ("optimal-lo", "optimal-hi", "midpoint")


@dataclass(frozen=True)
class Transcript:
    question: str
    world: tuple[float, ...]
    answers: tuple[float, float]
    first_mover: int
    arguments: tuple[int, ...]
    final_belief: float
    utilities: tuple[float, float]
    outcome: float
    error: float
    experiment: Optional[int]
    experiment_result: Optional[float]
    seed: Optional[int]

    def as_record(self) -> dict:
        return {
            "question": self.question,
            "world": list(self.world),
            "a1": self.answers[0],
            "a2": self.answers[1],
            "first_mover": self.first_mover,
            "arguments": list(self.arguments),
            "final_belief": self.final_belief,
            "u1": self.utilities[0],
            "u2": self.utilities[1],
            "outcome": self.outcome,
            "error": self.error,
            "experiment": self.experiment,
            "experiment_result": self.experiment_result,
            "seed": self.seed,
        }


def _policy_answer(policy, lam: AnswerInterval) -> float:
    if policy == "optimal-lo":
        return lam.lo
    if policy == "optimal-hi":
        return lam.hi
    if policy == "midpoint":
        return lam.midpoint
    if isinstance(policy, (int, float)):
        return float(policy)
    raise ValueError(f"unknown answer policy {policy!r}")


def resolve_answers(answer_policy: AnswerPolicy, lam: AnswerInterval) -> tuple[float, float]:
    """``answer_policy`` is one policy name for both debaters, a pair of
    names, or ``("scripted", a1, a2)``."""
    if isinstance(answer_policy, str):
        a = _policy_answer(answer_policy, lam)
        return a, a
    policy = tuple(answer_policy)
    if len(policy) == 3 and policy[0] == "scripted":
        return float(policy[1]), float(policy[2])
    if len(policy) == 2:
        return _policy_answer(policy[0], lam), _policy_answer(policy[1], lam)
    raise ValueError(f"unknown answer policy {answer_policy!r}")


def utilities(belief: float, a1: float, a2: float) -> tuple[float, float]:
    u1 = abs(belief - a2) - abs(belief - a1)
    return u1, -u1


def play_debate(
    prior: Prior,
    q: Question,
    rounds: int,
    answer_policy: AnswerPolicy = "optimal-lo",
    seed: Optional[int] = None,
    world=None,
    pass_allowed: bool = True,
) -> Transcript:
    """Play one debate with optimal arguments for the realized answers.

    The world is drawn from ``prior`` unless given. The first mover and any
    outcome tie are decided by the seeded generator.
    """
    rng = np.random.default_rng(seed)
    w = prior.sample(rng) if world is None else as_world(world)
    spec = ArgGameSpec(prior, q, w, rounds, pass_allowed)
    judge = Judge(prior, q)
    result = solve(spec, judge)
    lam = AnswerInterval(result.value_up_down, result.value_down_up)
    a1, a2 = resolve_answers(answer_policy, lam)
    for a in (a1, a2):
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"answer {a} outside [0, 1]")
    first = 1 if rng.random() < 0.5 else 2
    # the debater with the higher answer pushes the belief up
    maximizer = 1 if a1 >= a2 else 2
    if first == maximizer:
        belief, line = result.value_up_down, result.line_up_down
    else:
        belief, line = result.value_down_up, result.line_down_up
    u1, u2 = utilities(belief, a1, a2)
    if u1 > u2:
        outcome = a1
    elif u2 > u1:
        outcome = a2
    else:
        outcome = a1 if rng.random() < 0.5 else a2
    revealed = [i for i in line if i != PASS]
    if revealed:
        experiment = int(revealed[int(rng.integers(len(revealed)))])
        experiment_result = w[experiment]
    else:
        experiment, experiment_result = None, None
    return Transcript(
        question=q.label,
        world=w.values,
        answers=(a1, a2),
        first_mover=first,
        arguments=line,
        final_belief=belief,
        utilities=(u1, u2),
        outcome=outcome,
        error=abs(evaluate(q, w) - outcome),
        experiment=experiment,
        experiment_result=experiment_result,
        seed=seed,
    )


def worst_case_error(prior: Prior, q: Question, rounds: int, w, pass_allowed: bool = True) -> float:
    return truth_promotion_bound(ArgGameSpec(prior, q, w, rounds, pass_allowed))


def relevant_worlds(prior: Prior, q: Question) -> list[tuple[World, float]]:
    """Worlds that differ in what the debate can depend on, with their mass.

    For a product prior only the relevant features are enumerated; the
    others sit at their first listed value (they are independent and never
    legal arguments).
    """
    if isinstance(prior, ExplicitPrior):
        return list(prior.atoms())
    if isinstance(prior, ProductPrior):
        feats = q.relevant_features
        base = [m.values[0] for m in prior.marginals]
        out = []
        margs = [prior.marginals[i] for i in feats]
        for combo in itertools.product(*(range(len(m.values)) for m in margs)):
            vals = list(base)
            p = 1.0
            for i, m, k in zip(feats, margs, combo):
                vals[i] = m.values[k]
                p *= m.probs[k]
            out.append((World(tuple(vals)), p))
        return out
    raise TypeError(f"unsupported prior type {type(prior).__name__}")


def selected_error(result: MinimaxResult, f_true: float, answer_selection: str) -> float:
    if answer_selection == "worst-in-lambda":
        return max(abs(result.value_up_down - f_true), abs(result.value_down_up - f_true))
    if answer_selection == "midpoint-of-lambda":
        return abs(0.5 * (result.value_up_down + result.value_down_up) - f_true)
    raise ValueError(f"unknown answer selection {answer_selection!r}")


def expected_error(
    prior: Prior,
    q: Question,
    rounds: int,
    answer_selection: str = "worst-in-lambda",
    pass_allowed: bool = True,
) -> float:
    judge = Judge(prior, q)
    total = 0.0
    for w, p in relevant_worlds(prior, q):
        result = solve(ArgGameSpec(prior, q, w, rounds, pass_allowed), judge)
        total += p * selected_error(result, evaluate(q, w), answer_selection)
    return total


@dataclass(frozen=True)
class PromotionReport:
    worlds: tuple[tuple[float, ...], ...]
    probabilities: tuple[float, ...]
    worst_case_error: tuple[float, ...]
    lambdas: tuple[AnswerInterval, ...]
    expected_error: float
    epsilon: float

    @property
    def max_error(self) -> float:
        return max(self.worst_case_error)

    @property
    def truth_promoting(self) -> bool:
        """epsilon-truth-promoting in every supported world."""
        return self.max_error <= self.epsilon + 1e-12

    @property
    def truth_promoting_in_expectation(self) -> bool:
        return self.expected_error <= self.epsilon + 1e-12


def promotion_report(
    prior: Prior,
    q: Question,
    rounds: int,
    epsilon: float = 0.0,
    answer_selection: str = "worst-in-lambda",
    pass_allowed: bool = True,
) -> PromotionReport:
    judge = Judge(prior, q)
    worlds, probs, errs, lams = [], [], [], []
    expected = 0.0
    for w, p in relevant_worlds(prior, q):
        result = solve(ArgGameSpec(prior, q, w, rounds, pass_allowed), judge)
        f = evaluate(q, w)
        worlds.append(w.values)
        probs.append(p)
        errs.append(selected_error(result, f, "worst-in-lambda"))
        lams.append(AnswerInterval(result.value_up_down, result.value_down_up))
        expected += p * selected_error(result, f, answer_selection)
    return PromotionReport(tuple(worlds), tuple(probs), tuple(errs), tuple(lams), expected, epsilon)


def last_mover_advantage(
    prior: Prior,
    q: Question,
    rounds: int,
    w,
    a1: float,
    a2: float,
    pass_allowed: bool = True,
    tol: float = 1e-12,
) -> float:
    """Average utility of whoever argues second, over both argument orders."""
    result = solve(ArgGameSpec(prior, q, w, rounds, pass_allowed))
    lo, hi = result.value_up_down, result.value_down_up
    for a in (a1, a2):
        if not lo - tol <= a <= hi + tol:
            raise AnswersOutsideLambda(f"answer {a} outside [{lo}, {hi}]")
    return second_mover_utility(result, a1, a2)


def second_mover_utility(result: MinimaxResult, a1: float, a2: float) -> float:
    maximizer = 1 if a1 >= a2 else 2
    second_utils = []
    for first in (1, 2):
        belief = result.value_up_down if first == maximizer else result.value_down_up
        u1, u2 = utilities(belief, a1, a2)
        second_utils.append(u2 if first == 1 else u1)
    return 0.5 * (second_utils[0] + second_utils[1])


@dataclass(frozen=True)
class OscillationProfile:
    trajectory_up_down: BeliefTrajectory
    trajectory_down_up: BeliefTrajectory
    prior_mean: float
    changes_up_down: int
    changes_down_up: int
    result: MinimaxResult

    @property
    def side_changes(self) -> int:
        return max(self.changes_up_down, self.changes_down_up)


def side_changes(trajectory: BeliefTrajectory, level: float) -> int:
    """Sign changes of ``belief - level`` along the arguments (prior entry excluded)."""
    return count_crossings(trajectory.beliefs[1:], level)


def oscillation_profile(
    prior: Prior, q: Question, rounds: int, w, pass_allowed: bool = True
) -> OscillationProfile:
    spec = ArgGameSpec(prior, q, w, rounds, pass_allowed)
    judge = Judge(prior, q)
    result = solve(spec, judge)
    mean = judge.posterior_mean(())
    up = belief_trajectory(judge, q, make_reveals(spec.world, result.line_up_down))
    down = belief_trajectory(judge, q, make_reveals(spec.world, result.line_down_up))
    return OscillationProfile(
        up, down, mean, side_changes(up, mean), side_changes(down, mean), result
    )


def scripted_profile(prior: Prior, q: Question, w, indices: Sequence[int]) -> tuple[BeliefTrajectory, int]:
    """Belief trajectory and side changes for a fixed argument order."""
    judge = Judge(prior, q)
    traj = belief_trajectory(judge, q, make_reveals(w, indices))
    return traj, side_changes(traj, judge.posterior_mean(()))
