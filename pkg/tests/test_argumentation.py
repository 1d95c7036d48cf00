import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from debate_lab.argumentation import ArgGameSpec, min_promoting_rounds, solve, stall_depth, truth_promotion_bound
from debate_lab.errors import NotPromotedWithin
from debate_lab.judge import Judge
from debate_lab.questions import chain_stall, conjunction, stall_wrapped, table, xor
from debate_lab.worlds import PASS, Marginal, ProductPrior, make_reveals

from oracles import brute_minimax


def test_conjunction_skewed_one_round():
    prior = ProductPrior.iid_bernoulli(2, 0.01)
    r = solve(ArgGameSpec(prior, conjunction(2), (1, 1), 1))
    assert r.value_up_down == pytest.approx(0.01, abs=1e-12)
    assert r.value_down_up == pytest.approx(0.01, abs=1e-12)
    # maximizer reveals a conjunct, minimizer passes
    assert r.line_up_down[0] in (0, 1) and r.line_up_down[1] == PASS


@pytest.mark.parametrize("n", [1, 2, 3])
def test_xor_half(n):
    prior = ProductPrior.uniform_boolean(n + 1)
    for w in itertools.product((0, 1), repeat=n + 1):
        r = solve(ArgGameSpec(prior, xor(n + 1), w, n))
        assert r.value_up_down == pytest.approx(0.5, abs=1e-12)
        assert r.value_down_up == pytest.approx(0.5, abs=1e-12)


def test_conjunction_worst_case():
    for delta in (0.2, 0.05, 0.01):
        for n in (1, 2, 3):
            prior = ProductPrior.iid_bernoulli(n + 1, delta)
            spec = ArgGameSpec(prior, conjunction(n + 1), (1,) * (n + 1), n)
            assert truth_promotion_bound(spec) == pytest.approx(1 - delta, abs=1e-9)


def test_stall_depth_examples():
    prior = ProductPrior.bernoulli([0.5, 0.1, 0.1, 0.1])
    w = (1, 1, 1, 1)
    base = conjunction(1)
    assert min_promoting_rounds(prior, base, w, 4) == 1
    assert stall_depth(base, stall_wrapped(base, [(1, 2)]), prior, w, 4) == (1, 2)
    assert stall_depth(base, chain_stall(base, 1, [2, 3]), prior, w, 4) == (1, 3)
    with pytest.raises(NotPromotedWithin):
        min_promoting_rounds(prior, chain_stall(base, 1, [2, 3]), w, 2)


def random_instance(rng, max_d=4, max_n=2):
    d = int(rng.integers(1, max_d + 1))
    margs = []
    for _ in range(d):
        k = int(rng.integers(1, 3))
        vals = (0.0, 1.0) if k == 2 else (float(rng.integers(0, 2)),)
        p = rng.dirichlet(np.ones(k)) * 0.9 + 0.1 / k
        margs.append(Marginal(vals, tuple(p / p.sum())))
    prior = ProductPrior(tuple(margs))
    feats = sorted(rng.choice(d, int(rng.integers(1, d + 1)), replace=False).tolist())
    entries = {c: float(rng.random()) for c in itertools.product(*(prior.marginals[i].values for i in feats))}
    q = table(feats, entries)
    return prior, q, prior.sample(rng), int(rng.integers(1, max_n + 1))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), pass_allowed=st.booleans())
def test_solver_matches_brute_force(seed, pass_allowed):
    rng = np.random.default_rng(seed)
    prior, q, w, n = random_instance(rng)
    r = solve(ArgGameSpec(prior, q, w, n, pass_allowed))
    legal = q.relevant_features
    assert r.value_up_down == pytest.approx(brute_minimax(prior, q, w, n, legal, pass_allowed, True), abs=1e-12)
    assert r.value_down_up == pytest.approx(brute_minimax(prior, q, w, n, legal, pass_allowed, False), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), pass_allowed=st.booleans())
def test_solver_invariants(seed, pass_allowed):
    rng = np.random.default_rng(seed)
    prior, q, w, n = random_instance(rng)
    judge = Judge(prior, q)
    spec = ArgGameSpec(prior, q, w, n, pass_allowed)
    r = solve(spec, judge)
    assert r.value_up_down <= r.value_down_up + 1e-12
    assert 0.0 <= r.value_up_down and r.value_down_up <= 1.0
    for value, line in ((r.value_up_down, r.line_up_down), (r.value_down_up, r.line_down_up)):
        assert len(line) == 2 * n
        used = [i for i in line if i != PASS]
        assert len(used) == len(set(used))
        assert judge.posterior_mean(make_reveals(w, line)) == pytest.approx(value, abs=1e-12)
    if len(q.relevant_features) <= n:
        assert truth_promotion_bound(spec, r) == pytest.approx(0.0, abs=1e-9)


def test_pass_can_help_the_maximizer_too():
    # Without PASS the maximizer may be forced to reveal damaging evidence,
    # so the PASS option is not one-sided.
    rng = np.random.default_rng(0)
    prior, q, w, n = random_instance(rng)
    with_pass = solve(ArgGameSpec(prior, q, w, n, True))
    without = solve(ArgGameSpec(prior, q, w, n, False))
    assert with_pass.value_up_down > without.value_up_down + 1e-3


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_relabeling_features_keeps_values(seed):
    rng = np.random.default_rng(seed)
    prior, q, w, n = random_instance(rng)
    d = prior.dimension
    perm = rng.permutation(d).tolist()
    inv = {perm[i]: i for i in range(d)}
    prior2 = ProductPrior(tuple(prior.marginals[inv[j]] for j in range(d)))
    w2 = tuple(w[inv[j]] for j in range(d))
    feats2 = [perm[i] for i in q.relevant_features]

    def f2(v):
        return q.evaluator(tuple(v[perm[i]] for i in range(d)))

    from debate_lab.questions import Question

    q2 = Question(f2, feats2)
    a = solve(ArgGameSpec(prior, q, w, n))
    b = solve(ArgGameSpec(prior2, q2, w2, n))
    assert a.value_up_down == pytest.approx(b.value_up_down, abs=1e-12)
    assert a.value_down_up == pytest.approx(b.value_down_up, abs=1e-12)


def test_spec_validation():
    prior = ProductPrior.iid_bernoulli(2, 0.0)
    with pytest.raises(ValueError):
        ArgGameSpec(prior, conjunction(2), (1, 1), 1)
    with pytest.raises(ValueError):
        ArgGameSpec(ProductPrior.uniform_boolean(2), conjunction(2), (1, 1), 0)
