"""Headline predictability measures.

TTP
    topological-temporal predictability: Fano bound of the 2-D entropy rate
    of the filtered matrix, generalized to non-square shapes by congruency.
TTP_bl, NTTP
    mean TTP of globally shuffled copies, and TTP normalized against it.
PIL, TeP, NPIL, NTeP
    per-link 1-D counterparts, their average, and their row-shuffle
    normalized versions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import corpus
from ._errors import DataError
from .congruency import CongruencyFit, SplitPlan, StagePoint, extrapolate_ttp, split_squares, stage_sequence
from .corpus import FilteredMatrix
from .entropy import entropy_rate_1d, entropy_rate_1d_rows, entropy_rate_2d, solve_fano


def _as_filtered(x) -> FilteredMatrix:
    if isinstance(x, FilteredMatrix):
        return x
    if isinstance(x, corpus.ExpandedMatrix):
        return FilteredMatrix(x, corpus.activation_rates(x), tuple(range(x.m)), "explicit permutation")
    return FilteredMatrix.from_array(x)


def _child_seeds(seed, n):
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


@dataclass(frozen=True)
class TtpResult:
    ttp: float
    plan: SplitPlan
    square_entropies: tuple[float, ...]
    square_preds: tuple[float, ...]
    stages: tuple[StagePoint, ...]
    fit: CongruencyFit
    alphabet_size: int
    order_ttps: tuple[float, ...] = ()
    best_order: int = 0


def _ttp_single(values: np.ndarray, N: int) -> TtpResult:
    m, T = values.shape
    plan = split_squares(m, T)
    ents, preds = [], []
    for sq in plan.squares:
        block = values[sq.row : sq.row + sq.size, sq.col : sq.col + sq.size]
        h = entropy_rate_2d(block).bits_per_cell
        ents.append(h)
        preds.append(solve_fano(h, N))
    stages = stage_sequence(preds, plan, N)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        fit = extrapolate_ttp(stages, plan, N)
    return TtpResult(fit.ttp, plan, tuple(ents), tuple(preds), tuple(stages), fit, N)


def ttp(filtered, row_orders: int = 1, seed=0) -> TtpResult:
    """Topological-temporal predictability of a filtered matrix.

    Arrangement 0 is the matrix's own row order; the other ``row_orders - 1``
    arrangements are seeded random row permutations. The maximum over
    arrangements is returned.
    """
    filtered = _as_filtered(filtered)
    if row_orders < 1:
        raise DataError("row_orders must be >= 1")
    N = filtered.alphabet.N
    results = [_ttp_single(filtered.values, N)]
    for s in _child_seeds(seed, row_orders - 1):
        results.append(_ttp_single(corpus.permute_rows(filtered, s).values, N))
    values = tuple(r.ttp for r in results)
    best = int(np.argmax(values))
    r = results[best]
    return TtpResult(r.ttp, r.plan, r.square_entropies, r.square_preds, r.stages, r.fit, N, values, best)


def ttp_baseline(filtered, realizations: int = 40, seed=0) -> tuple[float, np.ndarray]:
    """Mean TTP over globally shuffled copies."""
    filtered = _as_filtered(filtered)
    if realizations < 1:
        raise DataError("realizations must be >= 1")
    vals = np.array([ttp(corpus.shuffle_global(filtered, s)).ttp for s in _child_seeds(seed, realizations)])
    return float(vals.mean()), vals


def normalize(p: float, b: float) -> float:
    """``(p - b) / (1 - b)``, with 1 when both are 1 and NaN (undefined) when only b is."""
    if b >= 1.0 - 1e-12:
        return 1.0 if p >= 1.0 - 1e-12 else math.nan
    return (p - b) / (1.0 - b)


def pil(row) -> tuple[float, int]:
    """Predictability of an individual link and the number of distinct symbols in its row."""
    row = np.asarray(row).ravel()
    if row.size < 2:
        raise DataError("link series must have length >= 2")
    n_row = int(np.unique(row).size)
    if n_row == 1:
        return 1.0, 1
    return solve_fano(entropy_rate_1d(row).bits_per_cell, n_row), n_row


def pil_rows(values) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`pil` over matrix rows."""
    values = np.atleast_2d(np.asarray(values))
    if values.shape[1] < 2:
        raise DataError("link series must have length >= 2")
    srt = np.sort(values, axis=1)
    n_row = 1 + np.count_nonzero(np.diff(srt, axis=1), axis=1)
    h = entropy_rate_1d_rows(values)
    out = np.array([1.0 if n == 1 else solve_fano(hh, int(n)) for hh, n in zip(h, n_row)])
    return out, n_row


@dataclass(frozen=True)
class TepProfile:
    tep: float
    ntep: float
    pil: np.ndarray
    pil_bl: np.ndarray
    npil: np.ndarray
    n_row: np.ndarray


def tep_profile(filtered, realizations: int = 40, seed=0) -> TepProfile:
    """Per-link predictability against within-row shuffled baselines.

    NaN entries of NPIL (undefined normalization) are skipped in NTeP.
    """
    filtered = _as_filtered(filtered)
    p, n_row = pil_rows(filtered.values)
    if realizations > 0:
        bl = np.zeros_like(p)
        for s in _child_seeds(seed, realizations):
            bl += pil_rows(corpus.shuffle_within_rows(filtered, s).values)[0]
        bl /= realizations
    else:
        bl = np.full_like(p, np.nan)
    npil = np.array([normalize(a, b) if not math.isnan(b) else math.nan for a, b in zip(p, bl)])
    ntep = float(np.nanmean(npil)) if np.any(~np.isnan(npil)) else math.nan
    return TepProfile(float(p.mean()), ntep, p, bl, npil, n_row)


@dataclass(frozen=True)
class HammingSummary:
    pair_count: int
    h_values: np.ndarray
    mean_exp: float
    ttp_minus_npil: np.ndarray = field(default_factory=lambda: np.array([]))

    def to_dict(self):
        h = self.h_values
        return {
            "pair_count": self.pair_count,
            "h_mean": float(h.mean()),
            "h_quantiles": [float(q) for q in np.quantile(h, [0.0, 0.25, 0.5, 0.75, 1.0])],
            "mean_exp": self.mean_exp,
            "nttp_minus_npil_mean": float(np.nanmean(self.ttp_minus_npil)) if self.ttp_minus_npil.size else None,
        }


def _unrank_pairs(q: np.ndarray, m: int):
    # q indexes the upper-triangle pairs (i < j) in row-major order
    i = (m - 2 - np.floor(np.sqrt(-8.0 * q + 4.0 * m * (m - 1) - 7) / 2.0 - 0.5)).astype(np.int64)
    start = i * (2 * m - i - 1) // 2
    # guard the float sqrt against off-by-one
    i = np.where(q < start, i - 1, i)
    start = i * (2 * m - i - 1) // 2
    nxt = (i + 1) * (2 * m - i - 2) // 2
    i = np.where(q >= nxt, i + 1, i)
    start = i * (2 * m - i - 1) // 2
    j = q - start + i + 1
    return i, j


def hamming_analysis(filtered, max_pairs: int = 100_000, seed=0, nttp=None, npil=None) -> HammingSummary:
    """Normalized Hamming distance between link rows.

    All unordered pairs are used when there are at most ``max_pairs``,
    otherwise a seeded uniform sample without replacement.
    """
    values = _as_filtered(filtered).values
    m, T = values.shape
    if m < 2:
        raise DataError("hamming analysis needs at least two links")
    total = m * (m - 1) // 2
    if total <= max_pairs:
        i, j = np.triu_indices(m, k=1)
    else:
        q = np.sort(np.random.default_rng(seed).choice(total, size=max_pairs, replace=False))
        i, j = _unrank_pairs(q.astype(np.int64), m)
    h = np.empty(i.size)
    step = max(1, 2_000_000 // max(T, 1))
    for a in range(0, i.size, step):
        h[a : a + step] = np.count_nonzero(values[i[a : a + step]] != values[j[a : a + step]], axis=1) / T
    diff = np.array([])
    if nttp is not None and npil is not None:
        diff = nttp - np.asarray(npil, dtype=float)
    return HammingSummary(int(i.size), h, float(np.mean(np.exp(1.0 - h))), diff)


def pearson(xs, ys) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise DataError("pearson needs two equal-length sequences of length >= 2")
    dx, dy = x - x.mean(), y - y.mean()
    sx, sy = math.sqrt(np.dot(dx, dx)), math.sqrt(np.dot(dy, dy))
    if sx == 0 or sy == 0:
        raise DataError("zero variance")
    return float(np.clip(np.dot(dx, dy) / (sx * sy), -1.0, 1.0))


@dataclass
class PredictabilityReport:
    ttp: float
    ttp_bl: float
    nttp: float
    tep: float | None
    ntep: float | None
    ttp_result: TtpResult
    tep_result: TepProfile | None
    ttp_bl_values: np.ndarray
    link_ids: tuple
    hamming: HammingSummary | None = None
    params: dict = field(default_factory=dict)

    @property
    def nttp_undefined(self) -> bool:
        return math.isnan(self.nttp)

    def to_dict(self):
        def num(x):
            return None if x is None or (isinstance(x, float) and math.isnan(x)) else float(x)

        r = self.ttp_result
        per_link = []
        if self.tep_result is not None:
            t = self.tep_result
            for lid, a, b, c, n in zip(self.link_ids, t.pil, t.pil_bl, t.npil, t.n_row):
                per_link.append({"link": list(lid), "pil": num(a), "pil_bl": num(b), "npil": num(c), "n_row": int(n)})
        return {
            "ttp": num(self.ttp),
            "ttp_bl": num(self.ttp_bl),
            "nttp": num(self.nttp),
            "nttp_undefined": self.nttp_undefined,
            "tep": num(self.tep),
            "ntep": num(self.ntep),
            "alphabet_size": r.alphabet_size,
            "regression": {"k": r.fit.k, "b": r.fit.b, "r2": r.fit.r2, "clamped": r.fit.clamped},
            "split_plan": r.plan.to_dict(),
            "square_entropies": list(r.square_entropies),
            "square_predictabilities": list(r.square_preds),
            "stages": [{"N": s.N, "p": s.p} for s in r.stages],
            "row_order_ttps": list(r.order_ttps),
            "ttp_bl_values": [float(v) for v in self.ttp_bl_values],
            "per_link": per_link,
            "hamming": self.hamming.to_dict() if self.hamming is not None else None,
            "params": self.params,
        }


def profile(
    filtered,
    row_orders: int = 1,
    baseline_runs: int = 40,
    tep_runs: int | None = None,
    seed=0,
    with_tep: bool = True,
    hamming_pairs: int | None = None,
) -> PredictabilityReport:
    """TTP, baseline, NTTP and (optionally) TeP/NTeP and Hamming summary of one filtered matrix."""
    filtered = _as_filtered(filtered)
    s_ttp, s_bl, s_tep, s_ham = _child_seeds(seed, 4)
    res = ttp(filtered, row_orders, s_ttp)
    bl, bl_vals = ttp_baseline(filtered, baseline_runs, s_bl)
    nttp = normalize(res.ttp, bl)
    tep = None
    if with_tep:
        tep = tep_profile(filtered, baseline_runs if tep_runs is None else tep_runs, s_tep)
    ham = None
    if hamming_pairs:
        ham = hamming_analysis(filtered, hamming_pairs, s_ham, nttp, tep.npil if tep is not None else None)
    return PredictabilityReport(
        ttp=res.ttp,
        ttp_bl=bl,
        nttp=nttp,
        tep=tep.tep if tep else None,
        ntep=tep.ntep if tep else None,
        ttp_result=res,
        tep_result=tep,
        ttp_bl_values=bl_vals,
        link_ids=filtered.matrix.link_ids,
        hamming=ham,
        params={
            "row_orders": row_orders,
            "baseline_runs": baseline_runs,
            "tep_runs": baseline_runs if tep_runs is None else tep_runs,
            "seed": seed,
        },
    )
