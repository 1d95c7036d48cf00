"""Debates where each argument reveals one binary digit of one feature.

Feature indices are 0-based; feature ``i`` carries weight ``2**-(i+1)`` in
the metric ``rho``. Bit positions are 1-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .argumentation import TIE_EPS, MinimaxResult
from .errors import OutOfOrderBit, UntruthfulBit
from .questions import Question
from .worlds import PASS, World, as_world


@dataclass(frozen=True)
class BitArgument:
    feature: int
    position: int
    bit: int

    def __post_init__(self):
        if self.position < 1:
            raise ValueError("bit positions start at 1")
        if self.bit not in (0, 1):
            raise ValueError("bit must be 0 or 1")


def bit_of(x: float, position: int) -> int:
    """``position``-th binary digit of ``x`` in [0, 1); x = 1 reads as all ones."""
    if x >= 1.0:
        return 1
    return int(math.floor(x * 2**position)) % 2


@dataclass(frozen=True)
class Cell:
    """Dyadic box around the sampled world: one half-open interval per feature."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    bits: tuple[int, ...]
    max_bits: Optional[int] = None

    @classmethod
    def fresh(cls, dimension: int, max_bits: Optional[int] = None) -> "Cell":
        return cls((0.0,) * dimension, (1.0,) * dimension, (0,) * dimension, max_bits)

    @property
    def dimension(self) -> int:
        return len(self.lo)

    def lengths(self) -> tuple[float, ...]:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    def contains(self, w) -> bool:
        w = as_world(w)
        for x, l, h in zip(w.values, self.lo, self.hi):
            if not (l <= x < h or (x == 1.0 and h == 1.0)):
                return False
        return True


def zoom(cell: Cell, arg: BitArgument, w) -> Cell:
    """Halve feature ``arg.feature``'s interval, keeping the half that holds ``w``."""
    w = as_world(w)
    i = arg.feature
    if not 0 <= i < cell.dimension:
        raise IndexError(f"feature {i} outside cell of dimension {cell.dimension}")
    if arg.position != cell.bits[i] + 1:
        raise OutOfOrderBit(f"feature {i}: expected bit {cell.bits[i] + 1}, got {arg.position}")
    if cell.max_bits is not None and arg.position > cell.max_bits:
        raise OutOfOrderBit(f"feature {i} has only {cell.max_bits} bits")
    if arg.bit != bit_of(w[i], arg.position):
        raise UntruthfulBit(f"bit {arg.position} of feature {i} is not {arg.bit}")
    mid = 0.5 * (cell.lo[i] + cell.hi[i])
    lo, hi, bits = list(cell.lo), list(cell.hi), list(cell.bits)
    if arg.bit:
        lo[i] = mid
    else:
        hi[i] = mid
    bits[i] += 1
    return Cell(tuple(lo), tuple(hi), tuple(bits), cell.max_bits)


def rho(w, v) -> float:
    return math.fsum(2.0 ** -(i + 1) * abs(a - b) for i, (a, b) in enumerate(zip(w, v)))


def cell_diameter(cell: Cell) -> float:
    """rho-diameter of the cell: ``sum_i 2**-(i+1) * length_i``."""
    return math.fsum(2.0 ** -(i + 1) * length for i, length in enumerate(cell.lengths()))


def triangular_sequence(k: int) -> list[int]:
    """First ``k`` terms of 1 | 1 2 | 1 2 3 | ... (1-based feature numbers)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out: list[int] = []
    block = 1
    while len(out) < k:
        out.extend(range(1, block + 1))
        block += 1
    return out[:k]


def triangular_diameter_bound(n: int) -> float:
    """Cell diameter guaranteed after ``1 + ... + n`` triangular reveals."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n + 2) / 2 ** (n + 1)


def lipschitz_error_bound(lipschitz: float, rounds: int) -> float:
    if lipschitz < 0:
        raise ValueError("Lipschitz constant must be non-negative")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    return lipschitz / 2 ** math.isqrt(rounds)


def triangular_move(cell: Cell, step: int) -> Optional[int]:
    """Feature the triangular player refines on its ``step``-th argument (0-based).

    Returns None (a pass) when that feature is outside the cell or exhausted.
    """
    i = triangular_sequence(step + 1)[-1] - 1
    if i >= cell.dimension:
        return None
    if cell.max_bits is not None and cell.bits[i] >= cell.max_bits:
        return None
    return i


def grid_points(bits: int) -> np.ndarray:
    """Cell midpoints of the ``bits``-bit dyadic grid on [0, 1]."""
    return (np.arange(2**bits) + 0.5) / 2**bits


def uniform_grid_worlds(dimension: int, bits: int) -> list[World]:
    pts = grid_points(bits)
    return [World(tuple(float(x) for x in c)) for c in itertools.product(pts, repeat=dimension)]


class BitDebate:
    """Exact solver for bit-revelation debates under the uniform grid prior.

    The judge's leaf belief is the mean of ``f`` over grid points of the
    final cell.
    """

    def __init__(self, question: Question, dimension: int, bits: int):
        if question.min_dimension > dimension:
            raise ValueError("question reads features beyond the debate dimension")
        self.question = question
        self.dimension = dimension
        self.bits = bits
        pts = grid_points(bits)
        shape = (2**bits,) * dimension
        table = np.empty(shape)
        for idx in itertools.product(range(2**bits), repeat=dimension):
            table[idx] = question.evaluator(World(tuple(float(pts[k]) for k in idx)))
        self.table = table

    def _prefixes(self, w: World) -> list[list[int]]:
        return [
            [int(math.floor(min(x, 1.0 - 1e-15) * 2**n)) for n in range(self.bits + 1)]
            for x in w.values
        ]

    def belief(self, w, counts: Sequence[int]) -> float:
        """Mean of ``f`` over the grid points of the cell after ``counts`` bits per feature."""
        w = as_world(w)
        prefixes = self._prefixes(w)
        return self._leaf(prefixes, tuple(counts))

    def _leaf(self, prefixes, counts) -> float:
        idx = []
        for i, c in enumerate(counts):
            width = 2 ** (self.bits - c)
            start = prefixes[i][c] * width
            idx.append(slice(start, start + width))
        return float(self.table[tuple(idx)].mean())

    def solve(self, w, rounds: int, pass_allowed: bool = True) -> MinimaxResult:
        w = as_world(w)
        if w.dimension != self.dimension:
            raise ValueError("world dimension differs from the debate dimension")
        prefixes = self._prefixes(w)
        memo: dict = {}
        leaves: dict = {}

        def moves(counts):
            out = [i for i in range(self.dimension) if counts[i] < self.bits]
            if pass_allowed or not out:
                out.append(PASS)
            return out

        def value(counts, remaining, maximizing):
            if remaining == 0:
                hit = leaves.get(counts)
                if hit is None:
                    hit = leaves[counts] = self._leaf(prefixes, counts)
                return hit, PASS
            key = (counts, remaining, maximizing)
            hit = memo.get(key)
            if hit is not None:
                return hit
            best, best_move = None, PASS
            for m in moves(counts):
                child = counts if m == PASS else counts[:m] + (counts[m] + 1,) + counts[m + 1 :]
                v, _ = value(child, remaining - 1, not maximizing)
                if (
                    best is None
                    or (maximizing and v > best + TIE_EPS)
                    or (not maximizing and v < best - TIE_EPS)
                ):
                    best, best_move = v, m
            memo[key] = (best, best_move)
            return best, best_move

        def line(first_max):
            counts = (0,) * self.dimension
            maximizing = first_max
            total = 2 * rounds
            v, _ = value(counts, total, maximizing)
            args = []
            for remaining in range(total, 0, -1):
                _, m = value(counts, remaining, maximizing)
                if m == PASS:
                    args.append(PASS)
                else:
                    pos = counts[m] + 1
                    args.append(BitArgument(m, pos, bit_of(w[m], pos)))
                    counts = counts[:m] + (counts[m] + 1,) + counts[m + 1 :]
                maximizing = not maximizing
            return v, tuple(args)

        up, line_up = line(True)
        down, line_down = line(False)
        return MinimaxResult(up, down, line_up, line_down)

    def truth_promotion_bound(self, w, rounds: int, pass_allowed: bool = True) -> float:
        w = as_world(w)
        r = self.solve(w, rounds, pass_allowed)
        f = self.question.evaluator(w)
        return max(abs(r.value_up_down - f), abs(r.value_down_up - f))


def solve_bit_debate(prior_bits_dims, q: Question, w, rounds: int, bits: Optional[int] = None) -> MinimaxResult:
    """Solve a bit debate.

    ``prior_bits_dims`` is either a prebuilt :class:`BitDebate` or the
    dimension of the uniform grid prior (then ``bits`` is required).
    """
    if isinstance(prior_bits_dims, BitDebate):
        return prior_bits_dims.solve(w, rounds)
    if bits is None:
        raise ValueError("bits is required when no BitDebate is given")
    return BitDebate(q, int(prior_bits_dims), bits).solve(w, rounds)


def play_triangular(w, rounds_n: int, opponent: Sequence[Optional[int]], bits: Optional[int] = None) -> Cell:
    """Cell after the triangular player makes ``1 + ... + n`` arguments.

    ``opponent`` lists the opponent's features (None = pass), interleaved
    after each triangular argument.
    """
    w = as_world(w)
    total = rounds_n * (rounds_n + 1) // 2
    cell = Cell.fresh(w.dimension, bits)
    for step in range(total):
        i = triangular_move(cell, step)
        if i is not None:
            pos = cell.bits[i] + 1
            cell = zoom(cell, BitArgument(i, pos, bit_of(w[i], pos)), w)
        j = opponent[step] if step < len(opponent) else None
        if j is not None and j < cell.dimension and (bits is None or cell.bits[j] < bits):
            pos = cell.bits[j] + 1
            cell = zoom(cell, BitArgument(j, pos, bit_of(w[j], pos)), w)
    return cell
