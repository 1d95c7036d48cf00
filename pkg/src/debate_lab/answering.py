"""Answering phase: payoffs of the symmetric answer game and its equilibria."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NashMismatch


@dataclass(frozen=True)
class AnswerInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not 0.0 <= self.lo <= self.hi <= 1.0:
            raise ValueError(f"invalid answer interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def dist(self, b: float) -> float:
        return max(self.lo - b, b - self.hi, 0.0)

    def __contains__(self, b: float) -> bool:
        return self.lo <= b <= self.hi


def _check_answer(a: float):
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"answer {a} outside [0, 1]")


def second_mover_value(a: float, b: float, lam: AnswerInterval) -> float:
    """Utility of the debater who answered ``b`` and argues second, both arguing optimally."""
    _check_answer(a)
    _check_answer(b)
    return abs(a - b) - lam.dist(b)


def expected_payoff(a1: float, a2: float, lam: AnswerInterval) -> float:
    """Player 1's expected utility over the randomized argumentation order."""
    return 0.5 * second_mover_value(a2, a1, lam) - 0.5 * second_mover_value(a1, a2, lam)


def equilibrium_answers(lam: AnswerInterval) -> AnswerInterval:
    return lam


@dataclass(frozen=True)
class NashReport:
    grid: tuple[float, ...]
    equilibrium: tuple[float, ...]
    expected: tuple[float, ...]
    unexpected: tuple[float, ...]
    missing: tuple[float, ...]
    far: tuple[float, ...]

    @property
    def ok(self) -> bool:
        return not (self.unexpected or self.missing or self.far)


def answer_grid(step: float) -> np.ndarray:
    n = int(round(1.0 / step))
    if abs(n * step - 1.0) > 1e-9:
        raise ValueError("grid step must divide 1")
    return np.linspace(0.0, 1.0, n + 1)


def grid_equilibria(lam: AnswerInterval, grid: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Pure symmetric equilibria of the answer game restricted to ``grid``.

    Returns the payoff matrix and the mask of answers whose security level
    reaches the game value. Empty mask if the game has no pure saddle point.
    """
    payoff = np.array([[expected_payoff(a, b, lam) for b in grid] for a in grid])
    maxmin = payoff.min(axis=1).max()
    minmax = payoff.max(axis=0).min()
    if maxmin < minmax - tol:
        return payoff, np.zeros(len(grid), dtype=bool)
    return payoff, payoff.min(axis=1) >= maxmin - tol


def verify_nash(lam: AnswerInterval, grid_step: float, raise_on_mismatch: bool = True) -> NashReport:
    """Compare the grid game's equilibrium answers with ``lam`` restricted to the grid."""
    if not 0.0 < grid_step <= 0.1:
        raise ValueError("grid_step must lie in (0, 0.1]")
    grid = answer_grid(grid_step)
    _, mask = grid_equilibria(lam, grid)
    eq = [float(a) for a in grid[mask]]
    dists = np.array([lam.dist(a) for a in grid])
    inside = dists <= 1e-12
    if inside.any():
        expected = [float(a) for a in grid[inside]]
    else:
        expected = [float(a) for a in grid[dists <= dists.min() + 1e-12]]
    unexpected = tuple(a for a in eq if a not in expected)
    missing = tuple(a for a in expected if a not in eq)
    far = tuple(a for a in eq if lam.dist(a) > grid_step + 1e-12)
    report = NashReport(tuple(map(float, grid)), tuple(eq), tuple(expected), unexpected, missing, far)
    if raise_on_mismatch and not report.ok:
        raise NashMismatch(report)
    return report
