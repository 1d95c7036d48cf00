"""Exact minimax solver for the argumentation phase of a feature debate."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import IndexOutOfRange, NotPromotedWithin
from .judge import Judge
from .questions import Question, evaluate
from .worlds import PASS, Prior, World, as_world, make_reveals

TIE_EPS = 1e-12
PROMOTION_TOL = 1e-9


@dataclass(frozen=True)
class ArgGameSpec:
    prior: Prior
    question: Question
    world: World
    rounds: int
    pass_allowed: bool = True
    legal_indices: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "world", as_world(self.world))
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if self.world.dimension != self.prior.dimension:
            raise ValueError("world and prior dimensions differ")
        if not self.prior.contains(self.world):
            raise ValueError("world is not in the support of the prior")
        legal = self.question.relevant_features if self.legal_indices is None else self.legal_indices
        legal = tuple(sorted(set(int(i) for i in legal if i != PASS)))
        for i in legal:
            if not 0 <= i < self.prior.dimension:
                raise IndexOutOfRange(f"legal index {i} for dimension {self.prior.dimension}")
        object.__setattr__(self, "legal_indices", legal)

    @property
    def f_true(self) -> float:
        return evaluate(self.question, self.world)


@dataclass(frozen=True)
class MinimaxResult:
    """Final beliefs under optimal play for both argumentation orders.

    ``value_up_down``: first mover maximizes the belief, second minimizes.
    """

    value_up_down: float
    value_down_up: float
    line_up_down: tuple = field(default=())
    line_down_up: tuple = field(default=())

    @property
    def width(self) -> float:
        return self.value_down_up - self.value_up_down


class _Search:
    def __init__(self, spec: ArgGameSpec, judge: Optional[Judge] = None):
        self.spec = spec
        self.judge = judge or Judge(spec.prior, spec.question)
        self.world = spec.world
        self.legal = spec.legal_indices
        self.memo: dict[tuple[frozenset, int, bool], tuple[float, int]] = {}

    def leaf(self, revealed: frozenset) -> float:
        return self.judge.posterior_mean(make_reveals(self.world, sorted(revealed)))

    def moves(self, revealed: frozenset) -> list[int]:
        moves = [i for i in self.legal if i not in revealed]
        if self.spec.pass_allowed or not moves:
            # nothing left to reveal forces a pass
            moves.append(PASS)
        return moves

    def value(self, revealed: frozenset, remaining: int, maximizing: bool) -> tuple[float, int]:
        if remaining == 0:
            return self.leaf(revealed), PASS
        key = (revealed, remaining, maximizing)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        best, best_move = None, PASS
        for move in self.moves(revealed):
            child = revealed if move == PASS else revealed | {move}
            v, _ = self.value(child, remaining - 1, not maximizing)
            if (
                best is None
                or (maximizing and v > best + TIE_EPS)
                or (not maximizing and v < best - TIE_EPS)
            ):
                best, best_move = v, move
        self.memo[key] = (best, best_move)
        return best, best_move

    def line(self, first_maximizes: bool) -> tuple[float, tuple[int, ...]]:
        revealed: frozenset = frozenset()
        maximizing = first_maximizes
        total = 2 * self.spec.rounds
        value, _ = self.value(revealed, total, maximizing)
        line = []
        for remaining in range(total, 0, -1):
            _, move = self.value(revealed, remaining, maximizing)
            line.append(move)
            if move != PASS:
                revealed = revealed | {move}
            maximizing = not maximizing
        return value, tuple(line)


def solve(spec: ArgGameSpec, judge: Optional[Judge] = None) -> MinimaxResult:
    """Alternating max/min over legal reveals, leaves scored by the judge.

    Ties go to the smallest feature index, PASS last. ``judge`` may be
    shared between specs with the same prior and question.
    """
    search = _Search(spec, judge)
    up, line_up = search.line(True)
    down, line_down = search.line(False)
    return MinimaxResult(up, down, line_up, line_down)


def truth_promotion_bound(spec: ArgGameSpec, result: Optional[MinimaxResult] = None) -> float:
    """Worst-case debate error in ``spec.world``; zero iff truth-promoting there."""
    result = result or solve(spec)
    f = spec.f_true
    return max(abs(result.value_up_down - f), abs(result.value_down_up - f))


def min_promoting_rounds(
    prior: Prior,
    question: Question,
    world,
    max_rounds: int,
    pass_allowed: bool = True,
    tol: float = PROMOTION_TOL,
) -> int:
    judge = Judge(prior, question)
    for n in range(1, max_rounds + 1):
        spec = ArgGameSpec(prior, question, world, n, pass_allowed)
        if truth_promotion_bound(spec, solve(spec, judge)) <= tol:
            return n
    raise NotPromotedWithin(max_rounds, question.label)


def stall_depth(
    base: Question,
    wrapped: Question,
    prior: Prior,
    w,
    max_rounds: int,
    pass_allowed: bool = True,
) -> tuple[int, int]:
    """Smallest truth-promoting round counts ``(N_base, N_wrapped)``."""
    if not set(base.relevant_features) <= set(wrapped.relevant_features):
        raise ValueError("wrapped question must extend the base question")
    n_base = min_promoting_rounds(prior, base, w, max_rounds, pass_allowed)
    n_wrapped = min_promoting_rounds(prior, wrapped, w, max_rounds, pass_allowed)
    return n_base, n_wrapped
