"""Worlds, priors and one-feature experiments.

A world is a finite vector of feature values in [0, 1]. Feature indices are
0-based; ``PASS`` is a sentinel argument that reveals nothing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import IndexOutOfRange, ZeroProbabilityEvent

PASS = -1

MASS_TOL = 1e-12
VALUE_TOL = 1e-12

Reveal = tuple[int, float]
RevealSet = tuple[Reveal, ...]
Seed = Union[int, np.random.Generator, None]


def _same(a: float, b: float) -> bool:
    return abs(a - b) <= VALUE_TOL


@dataclass(frozen=True)
class World:
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("world must have positive dimension")
        for v in vals:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"feature value {v} outside [0, 1]")
        object.__setattr__(self, "values", vals)

    @property
    def dimension(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)


def as_world(w) -> World:
    return w if isinstance(w, World) else World(tuple(w))


def make_reveals(world, indices: Iterable[int]) -> RevealSet:
    """Truthful reveal set for ``indices`` in ``world`` (PASS entries kept)."""
    world = as_world(world)
    out = []
    for i in indices:
        if i == PASS:
            out.append((PASS, math.nan))
        else:
            out.append((i, run_experiment(world, i)))
    return check_reveals(out)


def check_reveals(reveals: Iterable[Reveal]) -> RevealSet:
    seen = set()
    out = []
    for i, v in reveals:
        i = int(i)
        if i != PASS:
            if i < 0:
                raise IndexOutOfRange(f"feature index {i}")
            if i in seen:
                raise ValueError(f"feature {i} revealed twice")
            seen.add(i)
        out.append((i, float(v)))
    return tuple(out)


def canonical(reveals: Iterable[Reveal]) -> tuple[Reveal, ...]:
    """Order-free key for a reveal set: sorted, PASS entries dropped."""
    return tuple(sorted((i, v) for i, v in reveals if i != PASS))


def run_experiment(world, index: int) -> float:
    world = as_world(world)
    if not 0 <= index < world.dimension:
        raise IndexOutOfRange(f"feature index {index} for dimension {world.dimension}")
    return world.values[index]


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _check_probs(probs: Sequence[float], what: str) -> tuple[float, ...]:
    probs = tuple(float(p) for p in probs)
    if any(not p > 0.0 for p in probs):
        raise ValueError(f"{what}: probabilities must be strictly positive")
    if abs(sum(probs) - 1.0) > MASS_TOL:
        raise ValueError(f"{what}: probabilities sum to {sum(probs)!r}, not 1")
    return probs


class Prior:
    """Discrete distribution over worlds of a fixed dimension."""

    dimension: int

    def atoms(self) -> Iterator[tuple[World, float]]:
        raise NotImplementedError

    def probability(self, world) -> float:
        raise NotImplementedError

    def condition(self, reveals: Iterable[Reveal]) -> "Prior":
        raise NotImplementedError

    def sample(self, seed: Seed = None) -> World:
        raise NotImplementedError

    def contains(self, world) -> bool:
        return self.probability(world) > 0.0


@dataclass(frozen=True)
class ExplicitPrior(Prior):
    """Prior given by its support: ``((world, p), ...)``."""

    support: tuple[tuple[World, float], ...]

    def __post_init__(self):
        items = tuple((as_world(w), float(p)) for w, p in self.support)
        if not items:
            raise ValueError("empty support")
        dims = {w.dimension for w, _ in items}
        if len(dims) != 1:
            raise ValueError("all worlds must share one dimension")
        if len({w for w, _ in items}) != len(items):
            raise ValueError("duplicate world in support")
        _check_probs([p for _, p in items], "explicit prior")
        object.__setattr__(self, "support", items)

    @classmethod
    def normalized(cls, weighted: Iterable[tuple[Sequence[float], float]]) -> "ExplicitPrior":
        items = [(as_world(w), float(p)) for w, p in weighted if p > 0]
        total = math.fsum(p for _, p in items)
        return cls(tuple((w, p / total) for w, p in items))

    @classmethod
    def uniform(cls, worlds: Iterable[Sequence[float]]) -> "ExplicitPrior":
        worlds = [as_world(w) for w in worlds]
        return cls(tuple((w, 1.0 / len(worlds)) for w in worlds))

    @property
    def dimension(self) -> int:
        return self.support[0][0].dimension

    def atoms(self):
        return iter(self.support)

    def probability(self, world) -> float:
        world = as_world(world)
        for w, p in self.support:
            if w.dimension == world.dimension and all(map(_same, w.values, world.values)):
                return p
        return 0.0

    def condition(self, reveals):
        reveals = [(i, v) for i, v in check_reveals(reveals) if i != PASS]
        for i, _ in reveals:
            if i >= self.dimension:
                raise IndexOutOfRange(f"feature index {i} for dimension {self.dimension}")
        if not reveals:
            return self
        kept = [(w, p) for w, p in self.support if all(_same(w.values[i], v) for i, v in reveals)]
        if not kept:
            raise ZeroProbabilityEvent(f"no supported world matches {reveals}")
        total = math.fsum(p for _, p in kept)
        return ExplicitPrior(tuple((w, p / total) for w, p in kept))

    def sample(self, seed=None):
        rng = _rng(seed)
        k = rng.choice(len(self.support), p=np.array([p for _, p in self.support]))
        return self.support[int(k)][0]


@dataclass(frozen=True)
class Marginal:
    """Categorical distribution of one feature."""

    values: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if len(values) != len(self.probs) or not values:
            raise ValueError("values and probs must be non-empty and of equal length")
        if any(not 0.0 <= v <= 1.0 for v in values):
            raise ValueError("feature values must lie in [0, 1]")
        if len(set(values)) != len(values):
            raise ValueError("duplicate feature value")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probs", _check_probs(self.probs, "marginal"))

    @classmethod
    def bernoulli(cls, p_one: float) -> "Marginal":
        if p_one <= 0.0:
            return cls((0.0,), (1.0,))
        if p_one >= 1.0:
            return cls((1.0,), (1.0,))
        return cls((0.0, 1.0), (1.0 - p_one, p_one))

    def index_of(self, value: float) -> int:
        for k, v in enumerate(self.values):
            if _same(v, value):
                return k
        return -1

    def prob_of(self, value: float) -> float:
        k = self.index_of(value)
        return self.probs[k] if k >= 0 else 0.0


@dataclass(frozen=True)
class ProductPrior(Prior):
    """Independent features, each with its own finite categorical marginal."""

    marginals: tuple[Marginal, ...]

    def __post_init__(self):
        if not self.marginals:
            raise ValueError("product prior needs at least one feature")
        object.__setattr__(self, "marginals", tuple(self.marginals))

    @classmethod
    def bernoulli(cls, p_ones: Sequence[float]) -> "ProductPrior":
        return cls(tuple(Marginal.bernoulli(p) for p in p_ones))

    @classmethod
    def iid_bernoulli(cls, dimension: int, p_one: float) -> "ProductPrior":
        return cls.bernoulli([p_one] * dimension)

    @classmethod
    def uniform_boolean(cls, dimension: int) -> "ProductPrior":
        return cls.iid_bernoulli(dimension, 0.5)

    @property
    def dimension(self) -> int:
        return len(self.marginals)

    def atoms(self):
        for combo in itertools.product(*(range(len(m.values)) for m in self.marginals)):
            p = 1.0
            vals = []
            for m, k in zip(self.marginals, combo):
                p *= m.probs[k]
                vals.append(m.values[k])
            yield World(tuple(vals)), p

    def probability(self, world) -> float:
        world = as_world(world)
        if world.dimension != self.dimension:
            return 0.0
        p = 1.0
        for m, v in zip(self.marginals, world.values):
            p *= m.prob_of(v)
        return p

    def condition(self, reveals):
        marginals = list(self.marginals)
        for i, v in check_reveals(reveals):
            if i == PASS:
                continue
            if i >= self.dimension:
                raise IndexOutOfRange(f"feature index {i} for dimension {self.dimension}")
            if marginals[i].prob_of(v) <= 0.0:
                raise ZeroProbabilityEvent(f"feature {i} cannot take value {v}")
            marginals[i] = Marginal((v,), (1.0,))
        return ProductPrior(tuple(marginals))

    def sample(self, seed=None):
        rng = _rng(seed)
        vals = []
        for m in self.marginals:
            k = rng.choice(len(m.values), p=np.array(m.probs))
            vals.append(m.values[int(k)])
        return World(tuple(vals))


def sample_world(prior: Prior, seed: Seed = None) -> World:
    return prior.sample(seed)


def condition(prior: Prior, reveals: Iterable[Reveal]) -> Prior:
    return prior.condition(reveals)
