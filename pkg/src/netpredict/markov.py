"""Order-l Markov baseline: each link is an independent symbol series."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from ._errors import DataError


def _argmax_symbol(counts: Counter) -> int:
    # highest count, lowest symbol on ties
    best = max(counts.values())
    return min(s for s, c in counts.items() if c == best)


@dataclass
class LinkTable:
    counts: dict = field(default_factory=lambda: defaultdict(Counter))
    fallback: int = 0

    def predict(self, history) -> int:
        c = self.counts.get(tuple(history))
        return _argmax_symbol(c) if c else self.fallback


@dataclass
class MarkovModel:
    order: int
    tables: list[LinkTable]
    tie_rule: str = "lowest-symbol"


def _windows(row, l):
    row = [int(v) for v in row]
    return [(tuple(row[i : i + l]), row[i + l]) for i in range(len(row) - l)]


def train_link(windows) -> LinkTable:
    table = LinkTable()
    targets = Counter()
    for hist, nxt in windows:
        table.counts[hist][nxt] += 1
        targets[nxt] += 1
    table.counts = dict(table.counts)
    if targets:
        table.fallback = _argmax_symbol(targets)
    return table


def _row_rng(seed, row):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(row,)))


def markov_accuracy(filtered, l: int = 1, train_frac: float = 0.7, seed=0) -> tuple[float, np.ndarray]:
    """Held-out accuracy of per-link order-``l`` transition tables.

    Each row is cut into ``T - l`` overlapping (history, next) windows, which
    are shuffled with a per-row stream derived from ``seed``; the first
    ``floor(train_frac * (T - l))`` train the table and the rest are predicted
    by the most frequent next symbol. Returns the unweighted mean over rows
    and the per-row accuracies.
    """
    values = filtered.values if hasattr(filtered, "values") else np.asarray(filtered)
    values = np.atleast_2d(values)
    m, T = values.shape
    if l < 1:
        raise DataError("order must be >= 1")
    if T <= l:
        raise DataError(f"series of length {T} too short for order {l}")
    if not 0 < train_frac < 1:
        raise DataError(f"train_frac must be in (0, 1), got {train_frac}")
    n_win = T - l
    n_train = int(np.floor(train_frac * n_win))

    acc = np.empty(m)
    for i in range(m):
        wins = _windows(values[i], l)
        perm = _row_rng(seed, i).permutation(n_win)
        train = [wins[j] for j in perm[:n_train]]
        test = [wins[j] for j in perm[n_train:]]
        table = train_link(train)
        if not train:
            table.fallback = int(min(values[i]))
        acc[i] = sum(table.predict(h) == y for h, y in test) / len(test)
    return float(acc.mean()), acc


def fit_markov(values, l: int = 1) -> MarkovModel:
    """Train one table per row on all of its windows."""
    values = np.atleast_2d(np.asarray(values))
    if values.shape[1] <= l:
        raise DataError(f"series of length {values.shape[1]} too short for order {l}")
    return MarkovModel(l, [train_link(_windows(row, l)) for row in values])
