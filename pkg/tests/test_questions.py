import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from debate_lab.info_limited import rho
from debate_lab.questions import (
    chain_stall,
    conjunction,
    constant,
    deviation,
    evaluate,
    product,
    stall_gate,
    stall_wrapped,
    table,
    weighted_linear,
    xor,
)


def test_examples():
    assert evaluate(conjunction(2), (1, 1)) == 1.0
    assert evaluate(xor(3), (1, 1, 0)) == 0.0
    assert evaluate(stall_wrapped(conjunction(1), [(1, 2)]), (1, 1, 1)) == 1.0
    assert evaluate(product(2), (0.5, 0.5)) == 0.25


def test_deviation_examples():
    assert deviation(constant(1.0), 0.0, (0,)) == 1.0
    assert deviation(constant(0.5), 0.5, (0,)) == 0.0
    assert deviation(xor(2), 0.25, (1, 0)) == 0.75
    with pytest.raises(ValueError):
        deviation(xor(2), 1.5, (1, 0))


def test_stall_gate_truth_table():
    assert [stall_gate(x, y) for x, y in itertools.product((0, 1), repeat=2)] == [1, 1, 0, 1]
    assert stall_gate(0.5, 0.0) == 1


def test_stall_wrapped_cases():
    q = stall_wrapped(conjunction(1), [(1, 2)])
    assert evaluate(q, (1, 1, 0)) == 0.0
    assert evaluate(q, (1, 0, 0)) == 1.0
    assert evaluate(q, (0, 1, 1)) == 0.0
    assert q.relevant_features == (0, 1, 2)
    with pytest.raises(ValueError):
        stall_wrapped(conjunction(2), [(1, 2)])


def test_chain_stall_needs_every_fix():
    q = chain_stall(conjunction(1), 1, [2, 3])
    assert evaluate(q, (1, 1, 1, 1)) == 1.0
    assert evaluate(q, (1, 1, 1, 0)) == 0.0
    assert evaluate(q, (1, 0, 0, 0)) == 1.0


def test_table_lookup_and_default():
    q = table([0, 2], {(0, 0): 0.3, (1, 1): 0.9}, default=0.5)
    assert evaluate(q, (0, 1, 0)) == 0.3
    assert evaluate(q, (1, 0, 1)) == 0.9
    assert evaluate(q, (1, 0, 0)) == 0.5
    with pytest.raises(KeyError):
        evaluate(table([0], {(0,): 0.1}), (1,))
    with pytest.raises(ValueError):
        table([0], {(0,): 1.1})


def test_world_too_short():
    with pytest.raises(ValueError):
        evaluate(conjunction(3), (1, 1))


bits = st.lists(st.sampled_from([0.0, 1.0]), min_size=4, max_size=4)


@given(w=bits, i=st.integers(0, 3))
def test_xor_flips_with_any_bit(w, i):
    q = xor(4)
    v = list(w)
    v[i] = 1.0 - v[i]
    assert evaluate(q, v) == 1.0 - evaluate(q, w)


@given(w=bits, i=st.integers(0, 3))
def test_conjunction_monotone(w, i):
    q = conjunction(4)
    v = list(w)
    v[i] = 1.0
    assert evaluate(q, v) >= evaluate(q, w)


@given(w=bits)
def test_stall_agrees_with_base_when_gate_open(w):
    base = conjunction(1)
    q = stall_wrapped(base, [(1, 2)])
    if w[1] != 1.0 or w[2] == 1.0:
        assert evaluate(q, w) == evaluate(base, w)
    else:
        assert evaluate(q, w) == 0.0


unit = st.floats(0.0, 1.0)


@settings(max_examples=200)
@given(w=st.lists(unit, min_size=5, max_size=5), v=st.lists(unit, min_size=5, max_size=5))
def test_weighted_linear_is_1_lipschitz(w, v):
    q = weighted_linear(5)
    assert abs(evaluate(q, w) - evaluate(q, v)) <= rho(w, v) + 1e-12
    assert 0.0 <= evaluate(q, w) <= 1.0
