"""Builtin scenario suites and the generic feature-debate runner."""

from __future__ import annotations

import copy
import csv
import io
import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Optional

import numpy as np

from .argumentation import ArgGameSpec, MinimaxResult, solve
from .config import evidence_model_from_config, prior_from_config, question_from_config
from .engine import relevant_worlds, second_mover_utility, selected_error, side_changes
from .errors import ConfigError
from .evidence import EvidenceModel, early_stop_round, full_winner, optimal_answer
from .info_limited import BitDebate, grid_points, lipschitz_error_bound
from .judge import Judge, belief_trajectory
from .questions import Question, chain_stall, conjunction, evaluate, stall_wrapped, table, weighted_linear, xor
from .worlds import Marginal, Prior, ProductPrior, World, as_world, make_reveals

ROW_FIELDS = (
    "scenario",
    "N",
    "world_id",
    "f_true",
    "value_up_down",
    "value_down_up",
    "lambda_lo",
    "lambda_hi",
    "error_worst",
    "error_expected",
    "last_mover_advantage",
    "side_changes",
    "runtime_ms",
    "seed",
)


@dataclass
class ResultRow:
    scenario: str
    N: int
    world_id: str
    f_true: float
    value_up_down: float
    value_down_up: float
    lambda_lo: float
    lambda_hi: float
    error_worst: float
    error_expected: Optional[float]
    last_mover_advantage: float
    side_changes: int
    runtime_ms: Optional[float]
    seed: int
    # carried in JSON-lines output only
    notes: dict = field(default_factory=dict)

    def values(self) -> list:
        return [getattr(self, name) for name in ROW_FIELDS]


def make_row(
    scenario: str,
    rounds: int,
    world_id: str,
    f_true: float,
    result: MinimaxResult,
    seed: int,
    judge: Optional[Judge] = None,
    world=None,
    error_expected: Optional[float] = None,
    runtime_ms: Optional[float] = None,
    notes: Optional[dict] = None,
) -> ResultRow:
    lo, hi = result.value_up_down, result.value_down_up
    changes = 0
    if judge is not None and world is not None:
        mean = judge.posterior_mean(())
        changes = max(
            side_changes(belief_trajectory(judge, None, make_reveals(world, line)), mean)
            for line in (result.line_up_down, result.line_down_up)
        )
    return ResultRow(
        scenario=scenario,
        N=rounds,
        world_id=world_id,
        f_true=f_true,
        value_up_down=lo,
        value_down_up=hi,
        lambda_lo=lo,
        lambda_hi=hi,
        error_worst=max(abs(lo - f_true), abs(hi - f_true)),
        error_expected=error_expected,
        last_mover_advantage=second_mover_utility(result, lo, hi),
        side_changes=changes,
        runtime_ms=runtime_ms,
        seed=seed,
        notes=notes or {},
    )


class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.t0 = time.perf_counter()

    def lap(self) -> Optional[float]:
        if not self.enabled:
            return None
        now = time.perf_counter()
        ms = round((now - self.t0) * 1000.0, 3)
        self.t0 = now
        return ms


def _rounds(params: Mapping, path: str = "rounds") -> list[int]:
    rounds = params.get("rounds")
    if isinstance(rounds, int) and not isinstance(rounds, bool):
        rounds = [rounds]
    if not isinstance(rounds, list) or not rounds:
        raise ConfigError(path, "expected a positive integer or a non-empty list of them")
    for k, n in enumerate(rounds):
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigError(f"{path}[{k}]", f"invalid round count {n!r}")
    if max(rounds) > 6:
        raise ConfigError(path, "solver cap is 2N <= 12")
    return rounds


def _debate_rows(
    name: str,
    prior: Prior,
    q: Question,
    rounds: Iterable[int],
    worlds: list[tuple[str, World, Optional[float]]],
    seed: int,
    timing: bool,
    pass_allowed: bool = True,
    legal: Optional[tuple[int, ...]] = None,
    expected: str = "worst-in-lambda",
) -> list[ResultRow]:
    """Rows for every (N, world); ``worlds`` items are (id, world, prior mass or None)."""
    judge = Judge(prior, q)
    rows = []
    for n in rounds:
        clock = _Clock(timing)
        batch = []
        for wid, w, _ in worlds:
            spec = ArgGameSpec(prior, q, w, n, pass_allowed, legal)
            result = solve(spec, judge)
            batch.append(make_row(name, n, wid, evaluate(q, w), result, seed, judge, w, runtime_ms=clock.lap()))
        if worlds and all(p is not None for _, _, p in worlds):
            exp = sum(p * selected_error_from_row(r, expected) for r, (_, _, p) in zip(batch, worlds))
        else:
            exp = _expected_error(prior, q, n, judge, pass_allowed, legal, expected)
        for r in batch:
            r.error_expected = exp
        rows.extend(batch)
    return rows


def selected_error_from_row(row: ResultRow, selection: str) -> float:
    result = MinimaxResult(row.value_up_down, row.value_down_up)
    return selected_error(result, row.f_true, selection)


def _expected_error(prior, q, n, judge, pass_allowed, legal, selection) -> float:
    total = 0.0
    for w, p in relevant_worlds(prior, q):
        result = solve(ArgGameSpec(prior, q, w, n, pass_allowed, legal), judge)
        total += p * selected_error(result, evaluate(q, w), selection)
    return total


def _all_worlds(prior: Prior, q: Question) -> list[tuple[str, World, float]]:
    return [(f"w{k}", w, p) for k, (w, p) in enumerate(relevant_worlds(prior, q))]


def _select_worlds(prior: Prior, q: Question, spec, seed: int, path: str = "worlds"):
    if spec in (None, "all"):
        return _all_worlds(prior, q)
    if isinstance(spec, Mapping) and "explicit" in spec:
        out = []
        for k, w in enumerate(spec["explicit"]):
            try:
                w = as_world(w)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"{path}.explicit[{k}]", str(exc)) from exc
            if not prior.contains(w):
                raise ConfigError(f"{path}.explicit[{k}]", "world not in the support of the prior")
            out.append((f"x{k}", w, None))
        return out
    if isinstance(spec, Mapping) and "sample" in spec:
        count = spec["sample"]
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise ConfigError(f"{path}.sample", "expected a positive integer")
        rng = np.random.default_rng(seed)
        return [(f"s{k}", prior.sample(rng), None) for k in range(count)]
    raise ConfigError(path, "expected 'all', {'explicit': [...]} or {'sample': n}")


# --- builtin scenarios -------------------------------------------------------


def run_feature_debate(params: Mapping, seed: int, timing: bool) -> list[ResultRow]:
    name = params.get("name", "custom")
    prior = prior_from_config(params.get("prior", {}), "prior")
    q = question_from_config(params.get("question", {}), "question")
    if q.min_dimension > prior.dimension:
        raise ConfigError("question", "reads features beyond the prior dimension")
    worlds = _select_worlds(prior, q, params.get("worlds", "all"), seed)
    selection = params.get("answer_selection", "worst-in-lambda")
    if selection not in ("worst-in-lambda", "midpoint-of-lambda"):
        raise ConfigError("answer_selection", f"unknown selection {selection!r}")
    legal = params.get("legal_indices")
    if legal is not None:
        legal = tuple(int(i) for i in legal)
        if len(legal) > 12:
            raise ConfigError("legal_indices", "solver cap is 12 legal indices")
    elif len(q.relevant_features) > 12:
        raise ConfigError("question", "solver cap is 12 relevant features")
    return _debate_rows(
        name, prior, q, _rounds(params), worlds, seed, timing,
        bool(params.get("pass_allowed", True)), legal, selection,
    )


def _random_table(rng: np.random.Generator, dims: int, k: int, label: str) -> Question:
    feats = sorted(int(i) for i in rng.choice(dims, size=k, replace=False))
    entries = {}
    for bits in np.ndindex(*(2,) * k):
        entries[tuple(float(b) for b in bits)] = int(rng.integers(0, 65)) / 64
    return table(feats, entries, label=label)


def run_prop1(params, seed, timing):
    rng = np.random.default_rng(seed)
    dims = int(params.get("dims", 4))
    prior = ProductPrior.uniform_boolean(dims)
    rows = []
    for n in _rounds(params):
        for k in range(int(params.get("questions", 100))):
            q = _random_table(rng, dims, int(rng.integers(1, min(n, dims) + 1)), f"table{k}")
            for r in _debate_rows("prop1", prior, q, [n], _all_worlds(prior, q), seed, timing):
                r.world_id = f"q{k}/{r.world_id}"
                r.notes["features"] = list(q.relevant_features)
                rows.append(r)
    return rows


def run_prop2_worst(params, seed, timing):
    rows = []
    for delta in params.get("deltas", [params.get("delta", 0.01)]):
        if not 0.0 < float(delta) < 1.0:
            raise ConfigError("delta", "must lie in (0, 1)")
        for n in _rounds(params):
            prior = ProductPrior.iid_bernoulli(n + 1, float(delta))
            q = conjunction(n + 1)
            world = World((1.0,) * (n + 1))
            for r in _debate_rows("prop2-worst", prior, q, [n], [(f"ones/delta={delta}", world, None)], seed, timing):
                r.notes["delta"] = float(delta)
                rows.append(r)
    return rows


def run_prop2_expected(params, seed, timing):
    rows = []
    for n in _rounds(params):
        prior = ProductPrior.uniform_boolean(n + 1)
        q = xor(n + 1)
        rows.extend(_debate_rows("prop2-expected", prior, q, [n], _all_worlds(prior, q), seed, timing))
    return rows


def run_unfair_conjunction(params, seed, timing):
    k = int(params.get("k", 3))
    prior = ProductPrior.uniform_boolean(k)
    q = conjunction(k)
    return _debate_rows("unfair-conjunction", prior, q, _rounds(params), _all_worlds(prior, q), seed, timing)


def run_unstable_xor(params, seed, timing):
    k = int(params.get("k", 3))
    prior = ProductPrior.uniform_boolean(k)
    q = xor(k)
    return _debate_rows("unstable-xor", prior, q, _rounds(params), _all_worlds(prior, q), seed, timing)


def oscillation_setup(rounds: int, delta: float) -> tuple[Prior, Question, World]:
    """Skewed-xor debate: Xor over 2N rare-one features, all-ones world."""
    k = 2 * rounds
    return ProductPrior.iid_bernoulli(k, delta), xor(k), World((1.0,) * k)


def run_oscillation(params, seed, timing):
    delta = float(params.get("delta", 0.05))
    rows = []
    for n in _rounds(params):
        prior, q, world = oscillation_setup(n, delta)
        for r in _debate_rows(
            "oscillation", prior, q, [n], [("ones", world, None)], seed, timing,
            bool(params.get("pass_allowed", True)),
        ):
            r.notes["delta"] = delta
            rows.append(r)
    return rows


def stalling_setup(delta: float, base_p: float = 0.5):
    """Conjunction(1) on feature 0 and its stalled variants on rare features 1..3."""
    prior = ProductPrior((Marginal.bernoulli(base_p),) + tuple(Marginal.bernoulli(delta) for _ in range(3)))
    base = conjunction(1)
    variants = {
        "base": base,
        "stall": stall_wrapped(base, [(1, 2)]),
        "chain2": chain_stall(base, 1, [2, 3]),
    }
    return prior, variants, World((1.0,) * 4)


def run_stalling(params, seed, timing):
    prior, variants, world = stalling_setup(float(params.get("delta", 0.1)))
    rows = []
    for label, q in variants.items():
        for r in _debate_rows("stalling", prior, q, _rounds(params), [(f"{label}/ones", world, None)], seed, timing):
            r.notes["variant"] = label
            rows.append(r)
    return rows


def _models(params, rng) -> list[EvidenceModel]:
    if "models" in params:
        return [evidence_model_from_config(m, f"models[{k}]") for k, m in enumerate(params["models"])]
    dims = int(params.get("dims", 5))
    if dims > 8:
        raise ConfigError("dims", "at most 8 evidence features")
    return [EvidenceModel.random(rng, dims) for _ in range(int(params.get("n_models", 10)))]


def run_indep_evidence(params, seed, timing):
    rng = np.random.default_rng(seed)
    rows = []
    for m, model in enumerate(_models(params, rng)):
        prior = model.joint_prior()
        q = model.question()
        worlds = [(f"m{m}/s{k}", prior.sample(rng), None) for k in range(int(params.get("worlds_per_model", 3)))]
        by_id = {wid: w for wid, w, _ in worlds}
        for r in _debate_rows("indep-evidence", prior, q, _rounds(params), worlds, seed, timing):
            r.notes["optimal_answer"] = optimal_answer(model, by_id[r.world_id], r.N)
            rows.append(r)
    return rows


def run_early_stop(params, seed, timing):
    rng = np.random.default_rng(seed)
    dims = int(params.get("dims", 8))
    rows = []
    for k in range(int(params.get("debates", 200))):
        clock = _Clock(timing)
        model = EvidenceModel.random(rng, dims)
        n = int(rng.integers(1, _rounds(params)[-1] + 1))
        w = model.joint_prior().sample(rng)
        a1, a2 = (float(x) for x in rng.uniform(0.02, 0.98, size=2))
        stop, winner = early_stop_round(model, w, n, (a1, a2))
        final = optimal_answer(model, w, n)
        f = model.true_probability(w)
        result = MinimaxResult(final, final)
        rows.append(
            make_row(
                "early-stop", n, f"d{k}", f, result, seed, runtime_ms=clock.lap(),
                error_expected=None,
                notes={
                    "answers": [a1, a2],
                    "stop_round": stop,
                    "stopped_winner": winner,
                    "full_winner": full_winner(model, w, n, (a1, a2)),
                },
            )
        )
    return rows


def run_info_limited(params, seed, timing):
    rng = np.random.default_rng(seed)
    dims = int(params.get("dims", 4))
    bits = int(params.get("bits", 4))
    lip = float(params.get("lipschitz_L", 1.0))
    if dims * bits > 20:
        raise ConfigError("bits", "dims * bits must stay <= 20")
    q = weighted_linear(dims)
    debate = BitDebate(q, dims, bits)
    pts = grid_points(bits)
    worlds = [World(tuple(float(x) for x in rng.choice(pts, dims))) for _ in range(int(params.get("worlds", 20)))]
    rows = []
    for n in _rounds(params):
        for k, w in enumerate(worlds):
            clock = _Clock(timing)
            result = debate.solve(w, n)
            row = make_row("info-limited", n, f"s{k}", q.evaluator(w), result, seed, runtime_ms=clock.lap())
            row.notes["bound"] = lipschitz_error_bound(lip, n)
            rows.append(row)
    return rows


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    runner: Callable[[Mapping, int, bool], list]
    defaults: Mapping[str, Any]


BUILTINS: dict[str, Scenario] = {
    s.name: s
    for s in [
        Scenario("prop1", "random table questions on <= N features are debated truthfully", run_prop1,
                 {"rounds": [1, 2, 3, 4], "questions": 100, "dims": 4}),
        Scenario("prop2-worst", "Conjunction(N+1) under a rare-ones prior: worst-case error 1 - delta",
                 run_prop2_worst, {"rounds": [1, 2, 3, 4], "delta": 0.01}),
        Scenario("prop2-expected", "Xor(N+1) under a uniform prior: expected error 1/2", run_prop2_expected,
                 {"rounds": [1, 2, 3, 4]}),
        Scenario("unfair-conjunction", "Conjunction(K): the honest side needs K reveals", run_unfair_conjunction,
                 {"rounds": [1, 2, 3], "k": 3}),
        Scenario("unstable-xor", "Xor(K) under a uniform prior stays at 1/2 until fully revealed",
                 run_unstable_xor, {"rounds": [1, 2, 3], "k": 3}),
        Scenario("oscillation", "skewed Xor(2N): beliefs swing with every revealed one", run_oscillation,
                 {"rounds": [3], "delta": 0.05}),
        Scenario("stalling", "stall gates force the honest side to waste rounds", run_stalling,
                 {"rounds": [1, 2, 3], "delta": 0.1}),
        Scenario("indep-evidence", "independent evidence: both orders agree on the log-odds answer",
                 run_indep_evidence, {"rounds": [1, 2, 3], "n_models": 10, "dims": 5, "worlds_per_model": 3}),
        Scenario("early-stop", "stopping once the loser cannot cross the answer midpoint", run_early_stop,
                 {"rounds": [1, 2, 3, 4], "debates": 200, "dims": 8}),
        Scenario("info-limited", "bit-revelation debates on a 1-Lipschitz question", run_info_limited,
                 {"rounds": [1, 3, 4, 6], "dims": 4, "bits": 4, "lipschitz_L": 1.0, "worlds": 20}),
        Scenario("feature-debate", "generic debate from prior/question config", run_feature_debate,
                 {"rounds": [1]}),
    ]
}


def list_scenarios() -> list[tuple[str, str]]:
    return [(s.name, s.description) for s in BUILTINS.values()]


def run_scenario(name: str, overrides: Optional[Mapping] = None, seed: int = 0, timing: bool = False) -> list[ResultRow]:
    if name not in BUILTINS:
        raise ConfigError("scenario", f"unknown scenario {name!r}")
    scenario = BUILTINS[name]
    params = copy.deepcopy(dict(scenario.defaults))
    params.update(overrides or {})
    params.setdefault("name", name)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed", "expected a non-negative integer")
    try:
        return scenario.runner(params, seed, timing)
    except (KeyError, TypeError) as exc:
        raise ConfigError(name, f"bad parameter: {exc}") from exc


# --- output ------------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for r in rows:
        writer.writerow([_cell(v) for v in r.values()])
    return buf.getvalue()


def rows_to_jsonl(rows: Iterable[ResultRow]) -> str:
    lines = []
    for r in rows:
        record = dict(zip(ROW_FIELDS, r.values()))
        if r.notes:
            record["notes"] = r.notes
        lines.append(json.dumps(record))
    return "".join(line + "\n" for line in lines)
