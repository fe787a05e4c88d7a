"""Multi-seed parameter sweeps over the synthetic generator families."""

from __future__ import annotations

import dataclasses
import itertools
import math
from typing import Callable

import numpy as np

from . import corpus, measures, synth
from ._errors import DataError
from .markov import markov_accuracy

FAMILIES: dict[str, tuple[type, Callable]] = {
    "small-world": (synth.SmallWorldParams, synth.gen_small_world),
    "tsbm": (synth.TsbmParams, synth.gen_tsbm),
    "long-range": (synth.LongRangeParams, synth.gen_long_range),
}


def family(name):
    try:
        return FAMILIES[name]
    except KeyError:
        raise DataError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None


def coerce_params(name, raw: dict) -> dict:
    """Convert string values to the types of the family's parameter record."""
    cls, _ = family(name)
    types = {f.name: f.type for f in dataclasses.fields(cls)}
    out = {}
    for key, value in raw.items():
        if key not in types:
            raise DataError(f"{name} has no parameter {key!r}; known: {sorted(types)}")
        kind = types[key] if isinstance(types[key], type) else {"int": int, "float": float}[types[key]]
        try:
            out[key] = kind(float(value)) if kind is int and float(value).is_integer() else kind(value)
        except ValueError:
            raise DataError(f"bad value {value!r} for {key}") from None
    return out


def make_params(name, values: dict, seed: int):
    cls, _ = family(name)
    try:
        return cls(**{**values, "seed": seed})
    except TypeError as exc:
        raise DataError(str(exc)) from None


def generate(name, values: dict, seed: int):
    cls, gen = family(name)
    params = make_params(name, values, seed)
    return gen(params), params


@dataclasses.dataclass
class CorpusResult:
    point: dict
    seed: int
    ttp: float
    ttp_bl: float
    nttp: float
    tep: float | None
    ntep: float | None
    markov: float | None


def evaluate_corpus(
    name,
    values: dict,
    seed: int,
    baseline_runs: int = 40,
    with_tep: bool = True,
    tep_runs: int | None = None,
    with_markov: bool = False,
    markov_order: int = 1,
    filter_kwargs: dict | None = None,
) -> CorpusResult:
    """Generate one corpus and measure it. Baselines are skipped when ``baseline_runs`` is 0."""
    em, _ = generate(name, values, seed)
    filtered = corpus.filter_matrix(em, **(filter_kwargs or {}))
    res = measures.ttp(filtered, 1, seed)
    if baseline_runs > 0:
        bl, _ = measures.ttp_baseline(filtered, baseline_runs, seed + 1)
        nttp = measures.normalize(res.ttp, bl)
    else:
        bl, nttp = math.nan, math.nan
    tep = ntep = None
    if with_tep:
        runs = baseline_runs if tep_runs is None else tep_runs
        prof = measures.tep_profile(filtered, runs, seed + 2)
        tep, ntep = prof.tep, (prof.ntep if runs > 0 else None)
    acc = markov_accuracy(filtered, markov_order, 0.7, seed + 3)[0] if with_markov else None
    return CorpusResult(dict(values), seed, res.ttp, bl, nttp, tep, ntep, acc)


def expand_grid(grid: dict) -> list[dict]:
    """Cartesian product of grid axes; an axis key ``"a+b"`` sets a and b together."""
    keys = list(grid)
    points = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        point = {}
        for key, val in zip(keys, combo):
            for sub in key.split("+"):
                point[sub] = val
        points.append(point)
    return points


def _stats(xs):
    xs = [x for x in xs if x is not None and not (isinstance(x, float) and math.isnan(x))]
    if not xs:
        return math.nan, math.nan
    return float(np.mean(xs)), float(np.std(xs))


def run_sweep(
    name,
    grid: dict,
    seeds: int = 10,
    base_seed: int = 0,
    fixed: dict | None = None,
    **kwargs,
) -> tuple[list[dict], list[CorpusResult]]:
    """Evaluate every grid point over ``seeds`` corpora (seeds ``base_seed .. base_seed+seeds-1``).

    Returns one summary row per grid point and the raw per-corpus results.
    """
    if seeds < 1:
        raise DataError("seeds must be >= 1")
    rows, raw = [], []
    for point in expand_grid(grid):
        values = {**(fixed or {}), **point}
        results = [evaluate_corpus(name, values, base_seed + s, **kwargs) for s in range(seeds)]
        raw.extend(results)
        row = {"family": name, **point, "seeds": seeds}
        for metric in ("ttp", "ttp_bl", "nttp", "tep", "ntep", "markov"):
            mean, std = _stats([getattr(r, metric) for r in results])
            row[f"{metric}_mean"] = mean
            row[f"{metric}_std"] = std
        rows.append(row)
    return rows, raw
