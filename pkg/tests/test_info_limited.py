import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from debate_lab.errors import OutOfOrderBit, UntruthfulBit
from debate_lab.info_limited import (
    BitArgument,
    BitDebate,
    Cell,
    bit_of,
    cell_diameter,
    grid_points,
    lipschitz_error_bound,
    play_triangular,
    solve_bit_debate,
    triangular_diameter_bound,
    triangular_sequence,
    zoom,
)
from debate_lab.questions import constant, weighted_linear
from debate_lab.worlds import PASS


def test_zoom_walkthrough():
    w = (0.6, 0.25)
    c = Cell.fresh(2)
    c = zoom(c, BitArgument(0, 1, 1), w)
    assert (c.lo[0], c.hi[0]) == (0.5, 1.0)
    c = zoom(c, BitArgument(0, 2, 0), w)
    assert (c.lo[0], c.hi[0]) == (0.5, 0.75)
    c = zoom(c, BitArgument(1, 1, 0), w)
    assert (c.lo[1], c.hi[1]) == (0.0, 0.5)
    assert c.contains(w)


def test_zoom_errors():
    w = (0.6, 0.25)
    with pytest.raises(OutOfOrderBit):
        zoom(Cell.fresh(2), BitArgument(0, 2, 0), w)
    with pytest.raises(UntruthfulBit):
        zoom(Cell.fresh(2), BitArgument(0, 1, 0), w)
    with pytest.raises(OutOfOrderBit):
        zoom(Cell((0.5, 0.0), (1.0, 1.0), (1, 0), 1), BitArgument(0, 2, 0), w)


def test_diameters():
    assert cell_diameter(Cell.fresh(2)) == 0.75
    c = zoom(Cell.fresh(2), BitArgument(0, 1, 1), (0.6, 0.25))
    assert cell_diameter(c) == 0.5
    b = 3
    full = Cell(tuple(0.0 for _ in range(2)), tuple(2.0**-b for _ in range(2)), (b, b), b)
    assert cell_diameter(full) == pytest.approx(sum(2.0 ** -(i + 1) * 2.0**-b for i in range(2)))


def test_triangular():
    assert triangular_sequence(1) == [1]
    assert triangular_sequence(3) == [1, 1, 2]
    assert triangular_sequence(6) == [1, 1, 2, 1, 2, 3]
    assert triangular_diameter_bound(1) == 0.75
    assert triangular_diameter_bound(2) == 0.5
    assert triangular_diameter_bound(3) == 5 / 16


def test_lipschitz_bound():
    assert lipschitz_error_bound(1, 1) == 0.5
    assert lipschitz_error_bound(1, 4) == 0.25
    assert lipschitz_error_bound(0, 3) == 0.0


def brute_bit_values(question, dims, bits, w, rounds):
    """Enumerate the argument tree directly, scoring leaves by filtering grid points."""
    pts = list(itertools.product(grid_points(bits), repeat=dims))

    def leaf(cell):
        inside = [question.evaluator(p) for p in pts if cell.contains(p)]
        return sum(inside) / len(inside)

    def rec(cell, remaining, maximizing):
        if remaining == 0:
            return leaf(cell)
        children = [cell]
        for i in range(dims):
            if cell.bits[i] < bits:
                pos = cell.bits[i] + 1
                children.append(zoom(cell, BitArgument(i, pos, bit_of(w[i], pos)), w))
        vals = [rec(c, remaining - 1, not maximizing) for c in children]
        return max(vals) if maximizing else min(vals)

    start = Cell.fresh(dims, bits)
    return rec(start, 2 * rounds, True), rec(start, 2 * rounds, False)


@pytest.mark.parametrize("x", list(grid_points(2)))
def test_weighted_linear_one_feature(x):
    q = weighted_linear(1)
    r = solve_bit_debate(1, q, (x,), 1, bits=2)
    up, down = brute_bit_values(q, 1, 2, (x,), 1)
    assert r.value_up_down == pytest.approx(up, abs=1e-12)
    assert r.value_down_up == pytest.approx(down, abs=1e-12)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6), rounds=st.integers(1, 2))
def test_solver_matches_tree_enumeration(seed, rounds):
    rng = np.random.default_rng(seed)
    pts = grid_points(2)
    w = tuple(float(rng.choice(pts)) for _ in range(2))
    q = weighted_linear(2)
    r = solve_bit_debate(2, q, w, rounds, bits=2)
    up, down = brute_bit_values(q, 2, 2, w, rounds)
    assert r.value_up_down == pytest.approx(up, abs=1e-12)
    assert r.value_down_up == pytest.approx(down, abs=1e-12)
    for line in (r.line_up_down, r.line_down_up):
        assert len(line) == 2 * rounds
        assert all(a == PASS or isinstance(a, BitArgument) for a in line)


def test_constant_question():
    r = solve_bit_debate(2, constant(0.3), (0.1, 0.9), 2, bits=2)
    assert r.value_up_down == pytest.approx(0.3) and r.value_down_up == pytest.approx(0.3)


def test_weighted_linear_three_rounds():
    debate = BitDebate(weighted_linear(2), 2, 3)
    rng = np.random.default_rng(5)
    pts = grid_points(3)
    for _ in range(10):
        w = tuple(float(rng.choice(pts)) for _ in range(2))
        assert debate.truth_promotion_bound(w, 3) <= 0.5 + 1e-12


@settings(max_examples=60, deadline=None)
@given(
    w=st.lists(st.floats(0, 1, exclude_max=True), min_size=4, max_size=4),
    n=st.integers(1, 3),
    opp=st.lists(st.one_of(st.none(), st.integers(0, 3)), min_size=6, max_size=6),
)
def test_triangular_player_shrinks_cell(w, n, opp):
    cell = play_triangular(w, n, opp)
    assert cell.contains(w)
    assert cell_diameter(cell) <= triangular_diameter_bound(n) + 1e-12
    # every refinement halves: lengths are powers of two matching the bit counts
    for length, b in zip(cell.lengths(), cell.bits):
        assert length == 2.0**-b


@settings(max_examples=60)
@given(w=st.lists(st.floats(0, 1, exclude_max=True), min_size=3, max_size=3), k=st.integers(0, 3))
def test_cell_mean_within_lipschitz_diameter(w, k):
    q = weighted_linear(3)
    cell = Cell.fresh(3)
    for i in range(3):
        for pos in range(1, k + 1):
            cell = zoom(cell, BitArgument(i, pos, bit_of(w[i], pos)), w)
    centre = tuple(0.5 * (a + b) for a, b in zip(cell.lo, cell.hi))
    assert abs(q.evaluator(centre) - q.evaluator(w)) <= cell_diameter(cell) + 1e-12
