"""Builders for priors, questions and evidence models from plain mappings."""

from __future__ import annotations

from typing import Any, Mapping

from .errors import ConfigError
from .evidence import EvidenceModel, FeatureTable
from .questions import (
    Question,
    chain_stall,
    conjunction,
    constant,
    product,
    stall_wrapped,
    table,
    weighted_linear,
    xor,
)
from .worlds import ExplicitPrior, Marginal, Prior, ProductPrior


def _get(d: Mapping, key: str, path: str) -> Any:
    if not isinstance(d, Mapping):
        raise ConfigError(path, "expected a mapping")
    if key not in d:
        raise ConfigError(f"{path}.{key}", "missing")
    return d[key]


def _int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ConfigError(path, f"expected an integer, got {x!r}")
    return x


def _wrap(path: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(path, str(exc)) from exc


def prior_from_config(d: Mapping, path: str = "prior") -> Prior:
    """``{"kind": "explicit", "support": [{"world": [...], "p": ...}]}`` or
    ``{"kind": "product", "features": [{"values": [...], "probs": [...]}]}``.

    A product prior may instead give ``"dims"`` and ``"p_one"`` for i.i.d.
    Bernoulli features.
    """
    kind = _get(d, "kind", path)
    if kind == "explicit":
        support = _get(d, "support", path)
        items = []
        for k, atom in enumerate(support):
            items.append((_get(atom, "world", f"{path}.support[{k}]"), _get(atom, "p", f"{path}.support[{k}]")))
        return _wrap(f"{path}.support", ExplicitPrior, tuple(items))
    if kind == "product":
        if "features" in d:
            margs = []
            for k, feat in enumerate(d["features"]):
                p = f"{path}.features[{k}]"
                margs.append(_wrap(p, Marginal, tuple(_get(feat, "values", p)), tuple(_get(feat, "probs", p))))
            return ProductPrior(tuple(margs))
        dims = _int(_get(d, "dims", path), f"{path}.dims")
        p_one = _get(d, "p_one", path)
        return _wrap(path, ProductPrior.iid_bernoulli, dims, float(p_one))
    raise ConfigError(f"{path}.kind", f"unknown prior kind {kind!r}")


def question_from_config(d: Mapping, path: str = "question") -> Question:
    family = _get(d, "family", path)
    feats = d.get("features")
    if family in ("conjunction", "xor", "product"):
        k = _int(_get(d, "k", path), f"{path}.k")
        ctor = {"conjunction": conjunction, "xor": xor, "product": product}[family]
        return _wrap(path, ctor, k, feats)
    if family == "table":
        features = _get(d, "features", path)
        entries = {}
        for k, e in enumerate(_get(d, "entries", path)):
            p = f"{path}.entries[{k}]"
            entries[tuple(_get(e, "key", p))] = _get(e, "value", p)
        return _wrap(path, table, features, entries, d.get("default"), d.get("label", "table"))
    if family == "stall":
        base = question_from_config(_get(d, "base", path), f"{path}.base")
        pairs = [tuple(p) for p in _get(d, "pairs", path)]
        return _wrap(path, stall_wrapped, base, pairs)
    if family == "chain_stall":
        base = question_from_config(_get(d, "base", path), f"{path}.base")
        return _wrap(path, chain_stall, base, _int(_get(d, "m", path), f"{path}.m"), _get(d, "fixes", path))
    if family == "weighted_linear":
        return _wrap(path, weighted_linear, _int(_get(d, "dims", path), f"{path}.dims"))
    if family == "constant":
        return _wrap(path, constant, float(_get(d, "value", path)))
    raise ConfigError(f"{path}.family", f"unknown question family {family!r}")


def evidence_model_from_config(d: Mapping, path: str = "model") -> EvidenceModel:
    p0 = _get(d, "p0_prob", path)
    feats = []
    for k, f in enumerate(_get(d, "features", path)):
        p = f"{path}.features[{k}]"
        feats.append(
            _wrap(
                p,
                FeatureTable,
                tuple(_get(f, "values", p)),
                tuple(_get(f, "p_given_x1", p)),
                tuple(_get(f, "p_given_x0", p)),
            )
        )
    return _wrap(path, EvidenceModel, float(p0), tuple(feats))
