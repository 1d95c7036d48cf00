"""Debates whose arguments are conditionally independent evidence about a hidden bit X.

Beliefs live in log-odds form, where each revealed feature adds its
evidence weight ``log P(W_j = w_j | X=1) / P(W_j = w_j | X=0)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import BoundInapplicable, UnsupportedValue
from .questions import Question
from .worlds import PASS, ExplicitPrior, Reveal, World, as_world, check_reveals


def logit(p: float) -> float:
    if p <= 0.0:
        return -math.inf
    if p >= 1.0:
        return math.inf
    return math.log(p) - math.log1p(-p)


def sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


@dataclass(frozen=True)
class FeatureTable:
    """Class-conditional distribution of one feature."""

    values: tuple[float, ...]
    p_given_x1: tuple[float, ...]
    p_given_x0: tuple[float, ...]

    def __post_init__(self):
        n = len(self.values)
        if n == 0 or len(self.p_given_x1) != n or len(self.p_given_x0) != n:
            raise ValueError("feature table columns must be non-empty and of equal length")
        for col in (self.p_given_x1, self.p_given_x0):
            if any(p < 0 for p in col) or abs(math.fsum(col) - 1.0) > 1e-12:
                raise ValueError("each class-conditional column must be a distribution")
        if any(not 0.0 <= v <= 1.0 for v in self.values):
            raise ValueError("feature values must lie in [0, 1]")
        for name in ("values", "p_given_x1", "p_given_x0"):
            object.__setattr__(self, name, tuple(float(x) for x in getattr(self, name)))

    def _index(self, value: float) -> int:
        for k, v in enumerate(self.values):
            if abs(v - value) <= 1e-12:
                return k
        raise UnsupportedValue(f"value {value} not in {self.values}")

    def weight(self, value: float) -> float:
        k = self._index(value)
        p1, p0 = self.p_given_x1[k], self.p_given_x0[k]
        if p1 <= 0.0 or p0 <= 0.0:
            raise UnsupportedValue(f"value {value} has zero probability under one class")
        return math.log(p1) - math.log(p0)

    @property
    def informative(self) -> bool:
        return any(abs(a - b) > 1e-15 for a, b in zip(self.p_given_x1, self.p_given_x0))


@dataclass(frozen=True)
class EvidenceModel:
    p_x1: float
    features: tuple[FeatureTable, ...]

    def __post_init__(self):
        if not 0.0 < self.p_x1 < 1.0:
            raise ValueError("P(X=1) must lie strictly between 0 and 1")
        object.__setattr__(self, "features", tuple(self.features))

    @property
    def dimension(self) -> int:
        return len(self.features)

    @property
    def prior_log_odds(self) -> float:
        return logit(self.p_x1)

    def weights(self, w) -> np.ndarray:
        w = as_world(w)
        return np.array([t.weight(v) for t, v in zip(self.features, w.values)])

    def joint_prior(self) -> ExplicitPrior:
        """Marginal distribution of the features (X summed out)."""
        items = []
        for combo in itertools.product(*(range(len(t.values)) for t in self.features)):
            p1, p0 = self.p_x1, 1.0 - self.p_x1
            for t, k in zip(self.features, combo):
                p1 *= t.p_given_x1[k]
                p0 *= t.p_given_x0[k]
            if p1 + p0 > 0.0:
                items.append((tuple(t.values[k] for t, k in zip(self.features, combo)), p1 + p0))
        return ExplicitPrior.normalized(items)

    def true_probability(self, w) -> float:
        """P(X=1 | W=w) by direct Bayes on the joint (no log-odds)."""
        w = as_world(w)
        p1, p0 = self.p_x1, 1.0 - self.p_x1
        for t, v in zip(self.features, w.values):
            k = t._index(v)
            p1 *= t.p_given_x1[k]
            p0 *= t.p_given_x0[k]
        return p1 / (p1 + p0)

    def question(self) -> Question:
        return Question(self.true_probability, tuple(range(self.dimension)), "P(X=1|w)")

    @classmethod
    def random(
        cls,
        rng: np.random.Generator,
        dimension: int,
        n_values: int = 2,
        p_x1: Optional[float] = None,
        irrelevant_prob: float = 0.15,
    ) -> "EvidenceModel":
        """Random model with strictly positive tables; some features uninformative."""
        if p_x1 is None:
            p_x1 = float(rng.uniform(0.1, 0.9))
        values = tuple(float(v) for v in np.linspace(0.0, 1.0, n_values))
        feats = []
        for _ in range(dimension):
            p1 = rng.dirichlet(np.ones(n_values)) * 0.9 + 0.1 / n_values
            if rng.random() < irrelevant_prob:
                p0 = p1.copy()
            else:
                p0 = rng.dirichlet(np.ones(n_values)) * 0.9 + 0.1 / n_values
            p1 = p1 / p1.sum()
            p0 = p0 / p0.sum()
            feats.append(FeatureTable(values, tuple(p1), tuple(p0)))
        return cls(float(p_x1), tuple(feats))


def log_odds_belief(model: EvidenceModel, reveals: Iterable[Reveal]) -> float:
    total = model.prior_log_odds
    for j, v in check_reveals(reveals):
        if j == PASS:
            continue
        if j >= model.dimension:
            raise UnsupportedValue(f"feature {j} outside model of dimension {model.dimension}")
        total += model.features[j].weight(v)
    return total


def strength_budget(weights: Sequence[float], n: int, direction: str) -> float:
    """Largest signed evidence total from ``n`` arguments; zero-padded when short."""
    if n < 0:
        raise ValueError("n must be non-negative")
    w = np.asarray(weights, dtype=float)
    if direction == "up":
        pile = np.sort(w[w > 0])[::-1]
    elif direction == "down":
        pile = np.sort(-w[w < 0])[::-1]
    else:
        raise ValueError("direction must be 'up' or 'down'")
    return float(math.fsum(pile[:n]))


def evidence_strength_budget(model: EvidenceModel, w, n: int, direction: str) -> float:
    return strength_budget(model.weights(w), n, direction)


class Piles(NamedTuple):
    up: tuple[int, ...]
    down: tuple[int, ...]
    irrelevant: tuple[int, ...]


def piles(model: EvidenceModel, w) -> Piles:
    weights = model.weights(w)
    return Piles(
        tuple(int(j) for j in np.flatnonzero(weights > 0)),
        tuple(int(j) for j in np.flatnonzero(weights < 0)),
        tuple(int(j) for j in np.flatnonzero(weights == 0)),
    )


def strongest_first(weights: Sequence[float], n: int, direction: str) -> tuple[int, ...]:
    """Indices one side reveals, strongest first, ties to the smaller index; PASS once exhausted."""
    w = np.asarray(weights, dtype=float)
    sign = 1.0 if direction == "up" else -1.0
    pile = [j for j in range(len(w)) if sign * w[j] > 0]
    pile.sort(key=lambda j: (-sign * w[j], j))
    chosen = pile[:n]
    return tuple(chosen) + (PASS,) * (n - len(chosen))


def optimal_answer(model: EvidenceModel, w, rounds: int) -> float:
    weights = model.weights(w)
    return sigmoid(
        model.prior_log_odds
        + strength_budget(weights, rounds, "up")
        - strength_budget(weights, rounds, "down")
    )


class Residual(NamedTuple):
    up: float
    down: float
    gap: float


def residual_error(model: EvidenceModel, w, rounds: int) -> Residual:
    """Evidence left unrevealed in each pile after ``rounds`` and its log-odds gap."""
    weights = model.weights(w)
    total_up = math.fsum(weights[weights > 0])
    total_down = math.fsum(-weights[weights < 0])
    r_up = total_up - strength_budget(weights, rounds, "up")
    r_down = total_down - strength_budget(weights, rounds, "down")
    return Residual(r_up, r_down, r_up - r_down)


@dataclass(frozen=True)
class StopDecision:
    stop: bool
    winner: Optional[int] = None  # 1 or 2; 0 for a tie

    @classmethod
    def go_on(cls) -> "StopDecision":
        return cls(False, None)


def _winner(belief_logit: float, a1: float, a2: float) -> int:
    mid = logit(0.5 * (a1 + a2))
    if belief_logit == mid:
        return 0
    higher = 1 if a1 > a2 else 2
    return higher if belief_logit > mid else 3 - higher


def _side_state(model: EvidenceModel, w, rounds: int, n: int):
    weights = model.weights(w)
    up_line = strongest_first(weights, rounds, "up")
    down_line = strongest_first(weights, rounds, "down")
    revealed = [j for j in up_line[:n] + down_line[:n] if j != PASS]
    belief = model.prior_log_odds + math.fsum(weights[j] for j in revealed)

    def strength(line):
        if n == 0:
            return math.inf
        j = line[n - 1]
        return 0.0 if j == PASS else abs(weights[j])

    return belief, strength(up_line), strength(down_line)


def early_stop_check(
    model: EvidenceModel, w, rounds: int, round_: int, answers: tuple[float, float]
) -> StopDecision:
    """Decide after ``round_`` full rounds whether the rest of the debate can change the winner.

    Both sides reveal their strongest evidence first, so each remaining
    argument of a side is no stronger than its latest one.
    """
    a1, a2 = answers
    if a1 == a2:
        raise ValueError("early stopping needs distinct answers")
    if not 0 <= round_ <= rounds:
        raise ValueError("round must lie in [0, rounds]")
    belief, s_up, s_down = _side_state(model, w, rounds, round_)
    if round_ == rounds:
        return StopDecision(True, _winner(belief, a1, a2))
    left = rounds - round_
    mid = logit(0.5 * (a1 + a2))
    higher = 1 if a1 > a2 else 2
    if belief > mid and belief - left * s_down > mid:
        return StopDecision(True, higher)
    if belief < mid and belief + left * s_up < mid:
        return StopDecision(True, 3 - higher)
    return StopDecision.go_on()


def early_stop_round(model: EvidenceModel, w, rounds: int, answers: tuple[float, float]) -> tuple[int, int]:
    """First round at which the debate may stop, and the declared winner."""
    for n in range(rounds + 1):
        decision = early_stop_check(model, w, rounds, n, answers)
        if decision.stop:
            return n, decision.winner
    raise AssertionError("unreachable: the last round always stops")


def full_winner(model: EvidenceModel, w, rounds: int, answers: tuple[float, float]) -> int:
    a1, a2 = answers
    return _winner(logit(optimal_answer(model, w, rounds)), a1, a2)


def k_feature_bound(model: EvidenceModel, w, rounds: int, k: int) -> float:
    """Bound on the log-odds distance between truth and the final belief.

    ``k`` is the number of features the model depends on. The bound assumes
    every one of the ``2 * rounds`` arguments revealed a relevant feature;
    when one side runs dry while the other still holds evidence it does not
    apply.
    """
    if 2 * rounds > k:
        raise BoundInapplicable(f"2N = {2 * rounds} exceeds K = {k}")
    informative = sum(1 for t in model.features if t.informative)
    if informative > k:
        raise BoundInapplicable(f"model depends on {informative} > K = {k} features")
    weights = model.weights(w)
    n_up = int(np.sum(weights > 0))
    n_down = int(np.sum(weights < 0))
    if (n_up < rounds and n_down > rounds) or (n_down < rounds and n_up > rounds):
        raise BoundInapplicable("one side runs out of evidence while the other has more")
    _, s_up, s_down = _side_state(model, w, rounds, rounds)
    return max(s_up, s_down) * (k - 2 * rounds)


def final_log_odds(model: EvidenceModel, w, rounds: int) -> float:
    return logit(optimal_answer(model, w, rounds))


def true_log_odds(model: EvidenceModel, w) -> float:
    return model.prior_log_odds + math.fsum(model.weights(w))


def induced_world_support(model: EvidenceModel) -> list[World]:
    return [w for w, _ in model.joint_prior().atoms()]
