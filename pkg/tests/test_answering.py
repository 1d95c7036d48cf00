import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from debate_lab.answering import (
    AnswerInterval,
    equilibrium_answers,
    expected_payoff,
    second_mover_value,
    verify_nash,
)
from debate_lab.errors import NashMismatch


def brute_symmetric_nash(lo, hi, step):
    """Grid answers a for which (a, a) is a pure Nash equilibrium.

    Payoffs are rebuilt from the case analysis of the argument game rather
    than from the library: the belief lands on lo or hi depending on who
    argues first and which answer is larger.
    """
    n = int(round(1 / step))
    grid = [k / n for k in range(n + 1)]

    def u1(a1, a2):
        total = 0.0
        for first in (1, 2):
            if a1 == a2:
                belief = lo
            elif (a1 > a2) == (first == 1):
                belief = lo  # the maximizer argues first and the minimizer answers last
            else:
                belief = hi
            total += 0.5 * (abs(belief - a2) - abs(belief - a1))
        return total

    out = []
    for a in grid:
        best_dev = max(u1(b, a) for b in grid)
        if best_dev <= u1(a, a) + 1e-12:
            out.append(a)
    return out


def test_second_mover_examples():
    assert second_mover_value(0.0, 0.5, AnswerInterval(0.4, 0.6)) == pytest.approx(0.5)
    lam = AnswerInterval(0.3, 0.4)
    assert second_mover_value(0.8, 0.8, lam) == pytest.approx(-0.4)
    assert second_mover_value(1.0, 0.0, AnswerInterval(0.5, 0.5)) == pytest.approx(0.5)


def test_expected_payoff_examples():
    lam = AnswerInterval(0.3, 0.7)
    assert expected_payoff(0.4, 0.6, lam) == pytest.approx(0.0)
    assert expected_payoff(0.5, 0.9, lam) == pytest.approx(0.1)
    assert expected_payoff(0.5, 0.0, AnswerInterval(0.2, 0.4)) == pytest.approx(0.05)


def test_equilibrium_answers_examples():
    assert equilibrium_answers(AnswerInterval(0.5, 0.5)) == AnswerInterval(0.5, 0.5)
    assert equilibrium_answers(AnswerInterval(0.0, 1.0)).width == 1.0
    assert equilibrium_answers(AnswerInterval(0.3, 0.7)) == AnswerInterval(0.3, 0.7)


@pytest.mark.parametrize(
    "lo,hi,step,expected",
    [
        (0.5, 0.5, 0.01, [0.5]),
        (0.0, 1.0, 0.25, [0.0, 0.25, 0.5, 0.75, 1.0]),
        (0.4, 0.6, 0.1, [0.4, 0.5, 0.6]),
    ],
)
def test_verify_nash_examples(lo, hi, step, expected):
    if step == 0.25:
        # outside the accepted step range; compare the brute-force oracle directly
        assert brute_symmetric_nash(lo, hi, step) == pytest.approx(expected)
        return
    report = verify_nash(AnswerInterval(lo, hi), step)
    assert list(report.equilibrium) == pytest.approx(expected)
    assert brute_symmetric_nash(lo, hi, step) == pytest.approx(expected)


def test_verify_nash_rejects_bad_step():
    with pytest.raises(ValueError):
        verify_nash(AnswerInterval(0.2, 0.3), 0.25)


def test_nash_mismatch_raises(monkeypatch):
    import debate_lab.answering as answering

    def broken(lam, grid, tol=1e-12):
        return None, np.zeros(len(grid), dtype=bool)

    monkeypatch.setattr(answering, "grid_equilibria", broken)
    with pytest.raises(NashMismatch):
        verify_nash(AnswerInterval(0.2, 0.3), 0.05)
    assert not verify_nash(AnswerInterval(0.2, 0.3), 0.05, raise_on_mismatch=False).ok


def test_midpoint_minimizes_worst_deviation():
    lam = AnswerInterval(0.2, 0.8)
    f = lam.midpoint
    assert max(abs(lam.lo - f), abs(lam.hi - f)) == pytest.approx(lam.width / 2)
    candidates = np.linspace(0, 1, 1001)
    worst = [max(abs(lam.lo - g), abs(lam.hi - g)) for g in candidates]
    assert min(worst) == pytest.approx(lam.width / 2, abs=1e-9)


interval = st.tuples(st.floats(0, 1), st.floats(0, 1)).map(lambda t: AnswerInterval(min(t), max(t)))
unit = st.floats(0, 1)


@settings(max_examples=200)
@given(lam=interval, a=unit, b=unit)
def test_payoff_invariants(lam, a, b):
    # zero-sum and antisymmetric
    assert expected_payoff(a, b, lam) == pytest.approx(-expected_payoff(b, a, lam), abs=1e-12)
    assert expected_payoff(a, a, lam) == pytest.approx(0.0, abs=1e-12)
    # closed form for the expected payoff
    assert expected_payoff(a, b, lam) == pytest.approx(0.5 * lam.dist(b) - 0.5 * lam.dist(a), abs=1e-12)
    # answers in the interval are never beaten
    if a in lam:
        assert expected_payoff(a, b, lam) >= -1e-12
    if a in lam and b in lam:
        assert second_mover_value(a, b, lam) == pytest.approx(abs(a - b), abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(lam=interval)
def test_verify_nash_matches_brute_force(lam):
    report = verify_nash(lam, 0.05, raise_on_mismatch=False)
    assert report.ok
    assert list(report.equilibrium) == pytest.approx(brute_symmetric_nash(lam.lo, lam.hi, 0.05))
