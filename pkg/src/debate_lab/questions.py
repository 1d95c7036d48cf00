"""Questions about functions of the world and the counterexample families."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .worlds import PASS, World, as_world

ONE_TOL = 1e-12


def _is_one(x: float) -> bool:
    return abs(x - 1.0) <= ONE_TOL


@dataclass(frozen=True)
class Question:
    """A function ``f: worlds -> [0, 1]`` that only reads ``relevant_features``."""

    evaluator: Callable[[World], float] = field(compare=False)
    relevant_features: tuple[int, ...]
    label: str = "question"

    def __post_init__(self):
        feats = tuple(sorted(set(int(i) for i in self.relevant_features)))
        if any(i < 0 or i == PASS for i in feats):
            raise ValueError("relevant features must be non-negative indices")
        object.__setattr__(self, "relevant_features", feats)

    @property
    def min_dimension(self) -> int:
        return max(self.relevant_features, default=-1) + 1

    def __call__(self, w) -> float:
        return evaluate(self, w)


def evaluate(q: Question, w) -> float:
    w = as_world(w)
    if w.dimension < q.min_dimension:
        raise ValueError(f"world dimension {w.dimension} too small for {q.label}")
    return float(q.evaluator(w))


def deviation(q: Question, answer: float, w) -> float:
    """Distance between an answer and the true value of ``q`` in ``w``."""
    if not 0.0 <= answer <= 1.0:
        raise ValueError(f"answer {answer} outside [0, 1]")
    return abs(evaluate(q, w) - answer)


def stall_gate(x: float, y: float) -> int:
    """1 unless the unlikely problem ``x = 1`` shows up without its fix ``y = 1``."""
    if not _is_one(x):
        return 1
    return 1 if _is_one(y) else 0


def _features(k: int, features: Sequence[int] | None) -> tuple[int, ...]:
    if features is None:
        if k < 1:
            raise ValueError("need at least one feature")
        return tuple(range(k))
    features = tuple(int(i) for i in features)
    if k is not None and len(features) != k:
        raise ValueError(f"expected {k} features, got {len(features)}")
    return features


def conjunction(k: int, features: Sequence[int] | None = None) -> Question:
    feats = _features(k, features)
    return Question(
        lambda w: 1.0 if all(_is_one(w[i]) for i in feats) else 0.0,
        feats,
        f"conjunction({k})",
    )


def xor(k: int, features: Sequence[int] | None = None) -> Question:
    feats = _features(k, features)
    return Question(
        lambda w: float(sum(1 for i in feats if _is_one(w[i])) % 2),
        feats,
        f"xor({k})",
    )


def product(k: int, features: Sequence[int] | None = None) -> Question:
    feats = _features(k, features)
    return Question(lambda w: math.prod(w[i] for i in feats), feats, f"product({k})")


def constant(c: float) -> Question:
    if not 0.0 <= c <= 1.0:
        raise ValueError("constant must lie in [0, 1]")
    return Question(lambda w: c, (), f"constant({c})")


def table(
    features: Sequence[int],
    values: Mapping[tuple[float, ...], float],
    default: float | None = None,
    label: str = "table",
) -> Question:
    """Look up ``f`` from the tuple of relevant feature values.

    Missing keys fall back to ``default``; without one they raise ``KeyError``.
    """
    feats = tuple(int(i) for i in features)
    lookup = {tuple(float(x) for x in k): float(v) for k, v in values.items()}
    for v in list(lookup.values()) + ([default] if default is not None else []):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"table value {v} outside [0, 1]")

    def f(w):
        key = tuple(w[i] for i in feats)
        if key in lookup:
            return lookup[key]
        if default is None:
            raise KeyError(f"no table entry for {key}")
        return default

    return Question(f, feats, label)


def stall_wrapped(base: Question, pairs: Sequence[tuple[int, int]]) -> Question:
    """``base(w) * prod S(w_m, w_n)`` over the gate pairs."""
    pairs = tuple((int(m), int(n)) for m, n in pairs)
    gate_feats = [i for pair in pairs for i in pair]
    if set(gate_feats) & set(base.relevant_features):
        raise ValueError("gate features must not overlap the base question")

    def f(w):
        value = base.evaluator(w)
        for m, n in pairs:
            if value == 0.0:
                break
            value *= stall_gate(w[m], w[n])
        return value

    return Question(f, base.relevant_features + tuple(gate_feats), f"stall({base.label},{len(pairs)})")


def chain_stall(base: Question, m: int, fixes: Sequence[int]) -> Question:
    """``base(w) * S(w_m, w_y1 and ... and w_yk)``: one problem needs ``k`` fixes."""
    fixes = tuple(int(i) for i in fixes)
    if not fixes:
        raise ValueError("chain stall needs at least one fix feature")
    if ({m, *fixes} & set(base.relevant_features)) or m in fixes:
        raise ValueError("gate features must be distinct and outside the base question")

    def f(w):
        fixed = 1.0 if all(_is_one(w[i]) for i in fixes) else 0.0
        return base.evaluator(w) * stall_gate(w[m], fixed)

    return Question(f, base.relevant_features + (m,) + fixes, f"chain_stall({base.label},{len(fixes)})")


def weighted_linear(d: int) -> Question:
    """``sum_i 2**-(i+1) * w_i`` over the first ``d`` features; 1-Lipschitz for rho."""
    if d < 1:
        raise ValueError("need at least one feature")
    weights = [2.0 ** -(i + 1) for i in range(d)]
    return Question(
        lambda w: math.fsum(c * w[i] for i, c in enumerate(weights)),
        tuple(range(d)),
        f"weighted_linear({d})",
    )
