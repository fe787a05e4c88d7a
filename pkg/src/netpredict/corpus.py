"""Temporal-network data model.

A temporal network is stored as an *expanded matrix*: one row per potential
link, one column per snapshot, integer symbols in the cells (0 = link absent).
This module covers everything from raw event lists to the filtered,
activation-sorted matrix the estimators run on, plus the randomization
transforms used to build baselines and robustness checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._errors import DataError

AGGREGATIONS = ("count", "sum", "max")


@dataclass(frozen=True)
class EventRecord:
    time: float
    src: int
    dst: int
    weight: float = 1.0

    def __post_init__(self):
        if not self.time >= 0:
            raise DataError(f"event time must be non-negative, got {self.time}")
        if self.weight < 0:
            raise DataError(f"negative weight {self.weight}")
        if int(self.src) != self.src or int(self.dst) != self.dst or self.src < 0 or self.dst < 0:
            raise DataError(f"node ids must be non-negative integers, got {self.src}, {self.dst}")


@dataclass(frozen=True)
class Alphabet:
    """Finite symbol set of link weights. Symbol 0 means "link absent"."""

    symbols: tuple[int, ...]

    def __post_init__(self):
        if len(self.symbols) == 0:
            raise DataError("alphabet must contain at least one symbol")
        if len(set(self.symbols)) != len(self.symbols) or list(self.symbols) != sorted(self.symbols):
            raise DataError("alphabet symbols must be distinct and sorted")

    @property
    def N(self) -> int:
        return len(self.symbols)

    @classmethod
    def from_values(cls, values, include_zero=False) -> "Alphabet":
        syms = set(int(v) for v in np.unique(np.asarray(values)))
        if include_zero:
            syms.add(0)
        return cls(tuple(sorted(syms)))

    def __contains__(self, item):
        return item in self.symbols


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ExpandedMatrix:
    """Links x snapshots symbol matrix.

    ``values[i, t]`` is the weight symbol of link ``link_ids[i]`` in snapshot ``t``.
    """

    values: np.ndarray
    alphabet: Alphabet
    link_ids: tuple[tuple[int, int], ...]
    directed: bool = True

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise DataError(f"expanded matrix must be 2-D and non-empty, got shape {values.shape}")
        if not np.issubdtype(values.dtype, np.integer):
            if not np.all(np.equal(np.mod(values, 1), 0)):
                raise DataError("matrix cells must be integer symbols")
        object.__setattr__(self, "values", _frozen_array(values))
        if len(self.link_ids) != values.shape[0]:
            raise DataError(f"{len(self.link_ids)} link ids for {values.shape[0]} rows")
        object.__setattr__(self, "link_ids", tuple((int(s), int(d)) for s, d in self.link_ids))
        present = np.unique(self.values)
        if not set(int(v) for v in present) <= set(self.alphabet.symbols):
            raise DataError("matrix contains symbols outside its alphabet")
        if present[0] < 0:
            raise DataError("symbols must be non-negative")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def T(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_array(cls, values, link_ids=None, directed=True, include_zero=False) -> "ExpandedMatrix":
        """Wrap a plain 2-D integer array; link ids default to ``(i, i)`` placeholders."""
        values = np.asarray(values)
        if values.ndim != 2:
            raise DataError(f"expected a 2-D array, got {values.ndim}-D")
        if link_ids is None:
            link_ids = tuple((i, i) for i in range(values.shape[0]))
        return cls(values, Alphabet.from_values(values, include_zero), tuple(link_ids), directed)

    def __eq__(self, other):
        if not isinstance(other, ExpandedMatrix):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.link_ids == other.link_ids
            and self.directed == other.directed
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class FilteredMatrix:
    """Filtered view of an expanded matrix.

    ``kept_rows`` indexes rows of the source matrix; ``activation`` holds the
    activation rate of each kept row in the current row order.
    """

    matrix: ExpandedMatrix
    activation: np.ndarray
    kept_rows: tuple[int, ...]
    order_policy: str = "descending-activation"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        act = np.array(self.activation, dtype=float)
        act.setflags(write=False)
        object.__setattr__(self, "activation", act)
        object.__setattr__(self, "kept_rows", tuple(int(r) for r in self.kept_rows))
        if len(set(self.kept_rows)) != len(self.kept_rows):
            raise DataError("kept_rows contains duplicates")
        if len(self.kept_rows) != self.matrix.m or act.shape != (self.matrix.m,):
            raise DataError("kept_rows/activation length does not match the matrix")
        if self.order_policy not in ("descending-activation", "explicit permutation"):
            raise DataError(f"unknown order policy {self.order_policy!r}")

    @property
    def values(self) -> np.ndarray:
        return self.matrix.values

    @property
    def alphabet(self) -> Alphabet:
        return self.matrix.alphabet

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @classmethod
    def from_array(cls, values) -> "FilteredMatrix":
        """Treat a raw symbol array as an already-filtered matrix (rows kept as given)."""
        em = ExpandedMatrix.from_array(values)
        return cls(em, activation_rates(em), tuple(range(em.m)), "explicit permutation")

    def with_values(self, values, order_policy=None, activation=None, kept_rows=None) -> "FilteredMatrix":
        """New view with replaced cells; the alphabet is recomputed from the cells."""
        values = np.asarray(values)
        link_ids = self.matrix.link_ids if kept_rows is None else None
        if kept_rows is None:
            kept_rows = self.kept_rows
        if link_ids is None:
            pos = {r: i for i, r in enumerate(self.kept_rows)}
            link_ids = tuple(self.matrix.link_ids[pos[r]] for r in kept_rows)
        em = ExpandedMatrix(values, Alphabet.from_values(values), link_ids, self.matrix.directed)
        if activation is None:
            activation = activation_rates(em)
        return replace(
            self,
            matrix=em,
            activation=activation,
            kept_rows=tuple(kept_rows),
            order_policy=order_policy or self.order_policy,
        )


def _canonical_link(src, dst, directed):
    if directed or src <= dst:
        return (src, dst)
    return (dst, src)


def _dense_ranks(x: np.ndarray) -> np.ndarray:
    _, inv = np.unique(x, return_inverse=True)
    return inv.reshape(x.shape) + 1


def _quantile_ranks(x: np.ndarray, levels: int) -> np.ndarray:
    """Map positive values to ranks 1..levels by equal-mass quantile cuts (lower convention)."""
    distinct = np.unique(x)
    if levels >= distinct.size:
        return _dense_ranks(x)
    qs = np.quantile(x, np.arange(1, levels) / levels, method="lower")
    bins = np.searchsorted(qs, x, side="left") + 1
    return _dense_ranks(bins)


def ingest_events(
    events: Iterable[EventRecord],
    bin_width: float,
    directed: bool = True,
    aggregation: str = "count",
    levels: int | None = None,
) -> ExpandedMatrix:
    """Bin an event list into an expanded matrix.

    Snapshots are left-closed bins of width ``bin_width`` anchored at the
    earliest event. Rows are the observed links in sorted ``(src, dst)`` order;
    for undirected networks each unordered pair is stored once as
    ``(min, max)``. Aggregated weights that are not integers require
    ``levels`` (quantile quantization).
    """
    events = list(events)
    if not events:
        raise DataError("empty corpus")
    if not bin_width > 0:
        raise DataError(f"bin_width must be positive, got {bin_width}")
    if aggregation not in AGGREGATIONS:
        raise DataError(f"aggregation must be one of {AGGREGATIONS}, got {aggregation!r}")
    for ev in events:
        if ev.weight < 0:
            raise DataError(f"negative weight {ev.weight}")

    t0 = min(ev.time for ev in events)
    links = sorted({_canonical_link(ev.src, ev.dst, directed) for ev in events})
    row_of = {link: i for i, link in enumerate(links)}
    cols = [int(math.floor((ev.time - t0) / bin_width)) for ev in events]
    T = max(cols) + 1

    grid = np.zeros((len(links), T), dtype=float)
    for ev, col in zip(events, cols):
        i = row_of[_canonical_link(ev.src, ev.dst, directed)]
        if aggregation == "count":
            grid[i, col] += 1
        elif aggregation == "sum":
            grid[i, col] += ev.weight
        else:
            grid[i, col] = max(grid[i, col], ev.weight)

    if levels is not None:
        if levels < 1:
            raise DataError("levels must be >= 1")
        nz = grid != 0
        out = np.zeros(grid.shape, dtype=np.int64)
        if nz.any():
            out[nz] = _quantile_ranks(grid[nz], levels)
        grid = out
    elif not np.all(grid == np.round(grid)):
        raise DataError("aggregated weights are not integers; pass levels to quantize them")

    values = grid.astype(np.int64)
    # Unobserved node pairs are implicit all-zero rows, so 0 is always a symbol of M.
    return ExpandedMatrix(values, Alphabet.from_values(values, include_zero=True), tuple(links), directed)


def quantize_weights(matrix: ExpandedMatrix, levels: int) -> ExpandedMatrix:
    """Replace nonzero weights by their quantile rank in ``1..levels``; zeros are kept."""
    if levels < 1:
        raise DataError("levels must be >= 1")
    values = np.array(matrix.values)
    nz = values != 0
    if nz.any():
        values[nz] = _quantile_ranks(values[nz], levels)
    include_zero = 0 in matrix.alphabet
    return ExpandedMatrix(values, Alphabet.from_values(values, include_zero), matrix.link_ids, matrix.directed)


def activation_rates(matrix) -> np.ndarray:
    """Fraction of snapshots in which each row is nonzero."""
    values = matrix.values if hasattr(matrix, "values") else np.asarray(matrix)
    return np.count_nonzero(values, axis=1) / values.shape[1]


def _activation_order(a: np.ndarray) -> np.ndarray:
    # descending rate, ties by original index
    return np.lexsort((np.arange(a.size), -a))


def filter_matrix(matrix, mass_frac: float = 0.6, act_thresh: float = 0.1, m_theta: int = 1000) -> FilteredMatrix:
    """Keep the most active links, sorted by descending activation rate.

    Let ``m60`` be the smallest prefix of the sorted rows holding ``mass_frac``
    of the total activation. If ``m60 < m_theta`` that prefix is kept;
    otherwise every row with rate ``>= act_thresh`` is kept. At least one row
    survives.

    A :class:`FilteredMatrix` produced with the same parameters is returned
    unchanged, so filtering is idempotent.
    """
    if not 0 < mass_frac <= 1:
        raise DataError(f"mass_frac must be in (0, 1], got {mass_frac}")
    if not 0 <= act_thresh <= 1:
        raise DataError(f"act_thresh must be in [0, 1], got {act_thresh}")
    if m_theta < 1:
        raise DataError(f"m_theta must be >= 1, got {m_theta}")
    params = {"mass_frac": mass_frac, "act_thresh": act_thresh, "m_theta": m_theta}

    if isinstance(matrix, FilteredMatrix):
        if matrix.params == params and matrix.order_policy == "descending-activation":
            return matrix
        source, source_rows = matrix.matrix, np.asarray(matrix.kept_rows)
    else:
        source, source_rows = matrix, np.arange(matrix.m)

    a = activation_rates(source)
    if not np.any(a > 0):
        raise DataError("no active links")
    order = _activation_order(a)
    a_sorted = a[order]
    cum = np.cumsum(a_sorted)
    target = mass_frac * cum[-1]
    m60 = int(np.argmax(cum >= target * (1 - 1e-12))) + 1
    if m60 < m_theta:
        keep = m60
    else:
        keep = max(1, int(np.count_nonzero(a_sorted >= act_thresh)))
    order = order[:keep]

    values = source.values[order]
    link_ids = tuple(source.link_ids[i] for i in order)
    em = ExpandedMatrix(values, Alphabet.from_values(values), link_ids, source.directed)
    return FilteredMatrix(em, a_sorted[:keep], tuple(source_rows[order]), "descending-activation", params)


def _rng(seed):
    return np.random.default_rng(seed)


def permute_rows(filtered: FilteredMatrix, seed) -> FilteredMatrix:
    perm = _rng(seed).permutation(filtered.matrix.m)
    return filtered.with_values(
        filtered.values[perm],
        order_policy="explicit permutation",
        activation=filtered.activation[perm],
        kept_rows=tuple(filtered.kept_rows[i] for i in perm),
    )


def shuffle_global(filtered: FilteredMatrix, seed) -> FilteredMatrix:
    """Permute all cells uniformly; keeps only the global value histogram."""
    flat = _rng(seed).permutation(filtered.values.ravel())
    return filtered.with_values(flat.reshape(filtered.shape))


def shuffle_within_rows(filtered: FilteredMatrix, seed) -> FilteredMatrix:
    """Permute each row independently; keeps every row histogram."""
    return filtered.with_values(_rng(seed).permuted(filtered.values, axis=1))


def drop_links(filtered: FilteredMatrix, fraction: float, seed) -> FilteredMatrix:
    """Zero ``floor(fraction * nnz)`` uniformly chosen nonzero cells."""
    if not 0 <= fraction < 1:
        raise DataError(f"fraction must be in [0, 1), got {fraction}")
    values = np.array(filtered.values)
    nz = np.flatnonzero(values)
    n_drop = int(math.floor(fraction * nz.size))
    if n_drop == 0:
        return filtered
    chosen = _rng(seed).choice(nz, size=n_drop, replace=False)
    values.ravel()[chosen] = 0
    return filtered.with_values(values)


def _as_range(r, n, name):
    if isinstance(r, slice):
        start, stop, step = r.indices(n)
        if step != 1:
            raise DataError(f"{name} must be contiguous")
    else:
        start, stop = r
    if not 0 <= start < stop <= n:
        raise DataError(f"empty or out-of-bounds {name} {r!r} for size {n}")
    return start, stop


def slice_matrix(filtered: FilteredMatrix, row_range, col_range) -> FilteredMatrix:
    """Contiguous submatrix; ranges are ``(start, stop)`` pairs or slices."""
    m, T = filtered.shape
    r0, r1 = _as_range(row_range, m, "row_range")
    c0, c1 = _as_range(col_range, T, "col_range")
    return filtered.with_values(
        filtered.values[r0:r1, c0:c1],
        kept_rows=filtered.kept_rows[r0:r1],
    )


# --- file formats -------------------------------------------------------------


def parse_events(lines: Iterable[str]) -> list[EventRecord]:
    """Parse ``time src dst [weight]`` lines (whitespace or comma separated)."""
    events = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace(",", " ").split()
        if len(parts) not in (3, 4):
            raise DataError(f"expected 'time src dst [weight]', got {len(parts)} fields", lineno)
        try:
            time = float(parts[0])
            src, dst = int(parts[1]), int(parts[2])
            weight = float(parts[3]) if len(parts) == 4 else 1.0
        except ValueError as exc:
            raise DataError(f"cannot parse {line!r}: {exc}", lineno) from None
        try:
            events.append(EventRecord(time, src, dst, weight))
        except DataError as exc:
            raise DataError(str(exc), lineno) from None
    return events


def read_events(path) -> list[EventRecord]:
    with open(path, encoding="utf-8") as fh:
        return parse_events(fh)


def format_matrix(matrix: ExpandedMatrix) -> str:
    m, T = matrix.shape
    lines = [f"{m} {T} {matrix.alphabet.N} {int(matrix.directed)}"]
    lines.extend(" ".join(str(int(v)) for v in row) for row in matrix.values)
    return "\n".join(lines) + "\n"


def write_matrix(matrix, path) -> None:
    if isinstance(matrix, FilteredMatrix):
        matrix = matrix.matrix
    Path(path).write_text(format_matrix(matrix), encoding="utf-8")


def parse_matrix(lines: Sequence[str]) -> ExpandedMatrix:
    """Parse the ``m T N directed`` matrix format.

    The header ``N`` may exceed the number of distinct cell values by one, in
    which case the absent-link symbol 0 is part of the alphabet.
    """
    lines = [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise DataError("empty matrix file")
    try:
        m, T, N, directed = (int(x) for x in lines[0].split())
    except ValueError:
        raise DataError(f"bad header {lines[0].strip()!r}; expected 'm T N directed'", 1) from None
    if len(lines) - 1 != m:
        raise DataError(f"header declares {m} rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        try:
            row = [int(x) for x in ln.split()]
        except ValueError:
            raise DataError(f"non-integer symbol in {ln.strip()!r}", i) from None
        if len(row) != T:
            raise DataError(f"expected {T} symbols, got {len(row)}", i)
        rows.append(row)
    values = np.array(rows, dtype=np.int64).reshape(m, T)
    if values.size and values.min() < 0:
        raise DataError("symbols must be non-negative")
    distinct = set(int(v) for v in np.unique(values))
    if N == len(distinct):
        alphabet = Alphabet(tuple(sorted(distinct)))
    elif N == len(distinct) + 1 and 0 not in distinct:
        alphabet = Alphabet(tuple(sorted(distinct | {0})))
    else:
        raise DataError(f"header alphabet size {N} inconsistent with {len(distinct)} distinct symbols")
    link_ids = tuple((i, i) for i in range(m))
    return ExpandedMatrix(values, alphabet, link_ids, bool(directed))


def read_matrix(path) -> ExpandedMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.readlines())
