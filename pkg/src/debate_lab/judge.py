"""Bayesian judge: posterior-mean beliefs given revealed features."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import IndexOutOfRange, ZeroProbabilityEvent
from .questions import Question
from .worlds import PASS, ExplicitPrior, Prior, ProductPrior, Reveal, canonical, check_reveals


class Judge:
    """Posterior means of one question under one prior, with a memo table.

    Strategically chosen evidence is treated as if it were neutrally
    generated. The memo is keyed by the order-free reveal set, so results
    are identical with or without it.
    """

    def __init__(self, prior: Prior, question: Question):
        if question.min_dimension > prior.dimension:
            raise ValueError(
                f"{question.label} reads feature {question.min_dimension - 1} "
                f"but the prior has dimension {prior.dimension}"
            )
        self.prior = prior
        self.question = question
        self._memo: dict[tuple[Reveal, ...], float] = {}
        self._lock = threading.Lock()
        if isinstance(prior, ProductPrior):
            self._init_product(prior, question)
        elif isinstance(prior, ExplicitPrior):
            self._init_explicit(prior, question)
        else:
            raise TypeError(f"unsupported prior type {type(prior).__name__}")

    def _init_product(self, prior: ProductPrior, q: Question):
        self._feats = q.relevant_features
        self._axis = {i: k for k, i in enumerate(self._feats)}
        margs = [prior.marginals[i] for i in self._feats]
        filler = [m.values[0] for m in prior.marginals]
        shape = tuple(len(m.values) for m in margs)
        table = np.empty(shape, dtype=float)
        for combo in itertools.product(*(range(n) for n in shape)):
            vals = list(filler)
            for i, m, k in zip(self._feats, margs, combo):
                vals[i] = m.values[k]
            table[combo] = q.evaluator(_FastWorld(vals))
        self._table = table
        self._probs = [np.array(m.probs) for m in margs]

    def _init_explicit(self, prior: ExplicitPrior, q: Question):
        self._worlds = np.array([w.values for w, _ in prior.support])
        self._p = np.array([p for _, p in prior.support])
        self._f = np.array([q.evaluator(w) for w, _ in prior.support], dtype=float)

    def posterior_mean(self, reveals: Iterable[Reveal]) -> float:
        key = canonical(check_reveals(reveals))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        value = self._compute(key)
        with self._lock:
            self._memo.setdefault(key, value)
        return value

    def _compute(self, key) -> float:
        for i, _ in key:
            if i >= self.prior.dimension:
                raise IndexOutOfRange(f"feature index {i} for dimension {self.prior.dimension}")
        if isinstance(self.prior, ProductPrior):
            return self._compute_product(key)
        return self._compute_explicit(key)

    def _compute_product(self, key) -> float:
        idx: list = [slice(None)] * len(self._feats)
        for i, v in key:
            k = self.prior.marginals[i].index_of(v)
            if k < 0:
                raise ZeroProbabilityEvent(f"feature {i} cannot take value {v}")
            if i in self._axis:
                idx[self._axis[i]] = k
        sub = self._table[tuple(idx)]
        for axis, p in enumerate(self._probs):
            if isinstance(idx[axis], slice):
                sub = np.tensordot(p, sub, axes=(0, 0))
        return float(sub)

    def _compute_explicit(self, key) -> float:
        mask = np.ones(len(self._p), dtype=bool)
        for i, v in key:
            mask &= np.abs(self._worlds[:, i] - v) <= 1e-12
        mass = self._p[mask].sum()
        if not mass > 0.0:
            raise ZeroProbabilityEvent(f"no supported world matches {list(key)}")
        return float(np.dot(self._p[mask], self._f[mask]) / mass)


class _FastWorld:
    """Minimal indexable stand-in for World used while tabulating ``f``."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = tuple(values)

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def dimension(self):
        return len(self.values)


def posterior_mean(prior: Prior, q: Question, reveals: Iterable[Reveal] = ()) -> float:
    return Judge(prior, q).posterior_mean(reveals)


def biased_posterior_mean(biased_prior: Prior, q: Question, reveals: Iterable[Reveal] = ()) -> float:
    """Belief of a judge who starts from ``biased_prior`` instead of the true prior.

    Raises ZeroProbabilityEvent when the biased prior rules out what was revealed.
    """
    return Judge(biased_prior, q).posterior_mean(reveals)


@dataclass(frozen=True)
class BeliefTrajectory:
    prefixes: tuple[tuple[Reveal, ...], ...]
    beliefs: tuple[float, ...]

    def __len__(self):
        return len(self.beliefs)

    def __iter__(self):
        return iter(zip(self.prefixes, self.beliefs))


def belief_trajectory(prior_or_judge, q: Question | None = None, reveals: Iterable[Reveal] = ()) -> BeliefTrajectory:
    judge = prior_or_judge if isinstance(prior_or_judge, Judge) else Judge(prior_or_judge, q)
    reveals = check_reveals(reveals)
    prefixes = tuple(reveals[:k] for k in range(len(reveals) + 1))
    return BeliefTrajectory(prefixes, tuple(judge.posterior_mean(p) for p in prefixes))


def count_crossings(values: Iterable[float], level: float, tol: float = 1e-12) -> int:
    """Number of times a sequence switches strictly from one side of ``level`` to the other.

    Values within ``tol`` of the level keep the previous side.
    """
    side = 0
    changes = 0
    for v in values:
        s = 1 if v > level + tol else (-1 if v < level - tol else 0)
        if s == 0:
            continue
        if side and s != side:
            changes += 1
        side = s
    return changes


__all__ = [
    "PASS",
    "BeliefTrajectory",
    "Judge",
    "belief_trajectory",
    "biased_posterior_mean",
    "count_crossings",
    "posterior_mean",
]
