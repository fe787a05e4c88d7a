"""Lempel-Ziv style entropy-rate estimators for 1-D and 2-D symbol fields.

The 2-D estimator follows the match-length construction for random fields:
for every cell ``v`` of an ``n x n`` matrix, ``Λ_v`` is the side of the
smallest square block ending at ``v`` that does not re-occur anywhere in the
rectangle of cells componentwise before ``v``. The entropy rate is then

    H = n² log2(n²) / Σ_v Λ_v²

Match lengths are computed exactly by naming blocks level by level: two
``k x k`` blocks are equal iff their bottom-right and top-left
``(k-1) x (k-1)`` sub-blocks and their two remaining corner cells are equal,
so block identities at size ``k`` are dense ranks of a 4-tuple built from
size ``k-1``. Whether an equal block exists up-left of ``v`` is a 2-D
dominance query answered with one stable sort per level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._errors import DataError

ESTIMATORS = ("lz2d", "lz1d", "block_oracle")


@dataclass(frozen=True, eq=False)
class LambdaField:
    values: np.ndarray
    capped: np.ndarray

    @property
    def sum_squares(self) -> int:
        return int(np.sum(self.values.astype(np.int64) ** 2))


@dataclass(frozen=True)
class EntropyEstimate:
    bits_per_cell: float
    cell_count: int
    estimator: str

    def __float__(self):
        return self.bits_per_cell


def _symbols(values) -> tuple[np.ndarray, int]:
    """Dense-rank symbols to 0..S-1."""
    values = np.asarray(values)
    uniq, inv = np.unique(values, return_inverse=True)
    return inv.reshape(values.shape).astype(np.int64), max(int(uniq.size), 1)


def _group_starts(sorted_keys: np.ndarray) -> np.ndarray:
    starts = np.empty(sorted_keys.size, dtype=bool)
    if sorted_keys.size:
        starts[0] = True
        starts[1:] = sorted_keys[1:] != sorted_keys[:-1]
    return starts


def _pack(parts, radices):
    """Combine integer columns into one int64 key, re-ranking when the product could overflow."""
    key = parts[0]
    span = int(key.max()) + 1 if key.size else 1
    for part, radix in zip(parts[1:], radices):
        if span * radix >= 2**62:
            _, key = np.unique(key, return_inverse=True)
            span = int(key.max()) + 1 if key.size else 1
        key = key * radix + part
        span *= radix
    return key


def _level_ids(keys: np.ndarray, cols: np.ndarray):
    """Dense ids of ``keys`` plus, per element, whether an earlier element of the
    same id (in input order) has a column <= its own."""
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    starts = _group_starts(sk)
    gid = np.cumsum(starts) - 1
    ids = np.empty_like(gid)
    ids[order] = gid

    c = cols[order]
    big = int(c.max()) + 2 if c.size else 2
    # running min of c within each group; later groups sit strictly below earlier ones
    run = np.minimum.accumulate(c - gid * big)
    prev = np.empty_like(run)
    if run.size:
        prev[0] = 0
        prev[1:] = run[:-1]
    prev_c = prev + gid * big
    has = ~starts & (prev_c <= c)
    dominated = np.empty_like(has)
    dominated[order] = has
    return ids, int(gid[-1]) + 1 if gid.size else 0, dominated


def lambda_2d(matrix) -> LambdaField:
    """Match lengths Λ for a square symbol matrix.

    With 1-based coordinates, ``Λ_v`` is the smallest ``k`` such that no anchor
    ``u != v``, ``u <= v`` componentwise, carries the same ``k x k`` block
    (block fully inside the matrix). If every feasible size recurs the value
    is capped at ``min(v_row, v_col) + 1`` and flagged.
    """
    X = np.asarray(matrix)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DataError(f"lambda_2d needs a square matrix, got shape {X.shape}")
    n = X.shape[0]
    sym, S = _symbols(X)
    lam = np.zeros((n, n), dtype=np.int64)
    capped = np.zeros((n, n), dtype=bool)
    if n == 0:
        return LambdaField(lam, capped)

    rr, cc = np.indices((n, n))
    ids, n_ids, matched = _level_ids(sym.ravel(), cc.ravel())
    ids = ids.reshape(n, n)
    matched = matched.reshape(n, n)
    lam[~matched] = 1
    active = matched

    k = 1
    while active.any():
        k += 1
        if k > n:
            capped[active] = True
            lam[active] = k
            break
        # cells matched at k-1 whose k-block would leave the matrix are capped
        edge = active.copy()
        edge[k - 1 :, k - 1 :] = False
        if edge.any():
            lam[edge] = k
            capped[edge] = True

        m = n - k + 1
        A = ids[k - 1 :, k - 1 :]
        B = ids[k - 2 : n - 1, k - 2 : n - 1]
        C = sym[0:m, k - 1 :]
        D = sym[k - 1 :, 0:m]
        keys = _pack([A.ravel(), B.ravel(), C.ravel(), D.ravel()], [n_ids, S, S])
        new_ids, n_ids, dom = _level_ids(keys, cc[k - 1 :, k - 1 :].ravel())

        sub_active = active[k - 1 :, k - 1 :]
        dom = dom.reshape(m, m)
        stop = sub_active & ~dom
        lam[k - 1 :, k - 1 :][stop] = k

        ids = np.full((n, n), -1, dtype=np.int64)
        ids[k - 1 :, k - 1 :] = new_ids.reshape(m, m)
        active = np.zeros((n, n), dtype=bool)
        active[k - 1 :, k - 1 :] = sub_active & dom
    return LambdaField(lam, capped)


def lambda_1d_rows(matrix) -> np.ndarray:
    """Match lengths for every row of a 2-D array, each row treated as its own series.

    ``Λ_t`` (1-based ``t``) is the smallest ``k`` such that the length-``k``
    substring ending at ``t`` occurs nowhere ending at an earlier ``u >= k``;
    capped at ``t`` when every feasible length recurs.
    """
    X = np.atleast_2d(np.asarray(matrix))
    R, T = X.shape
    sym, S = _symbols(X)
    flat = sym.ravel()
    row_of = np.repeat(np.arange(R, dtype=np.int64), T)
    t_of = np.tile(np.arange(T, dtype=np.int64), R)
    lam = np.zeros(R * T, dtype=np.int64)

    # candidates: flat positions whose current block-id group still contains an active cell
    pos = np.arange(R * T, dtype=np.int64)
    keys = row_of * S + flat
    is_active = np.ones(R * T, dtype=bool)
    k = 1
    while pos.size:
        order = np.argsort(keys, kind="stable")
        sk = keys[order]
        starts = _group_starts(sk)
        gid = np.cumsum(starts) - 1
        p_sorted = pos[order]
        matched = ~starts  # an earlier position of the same row carries the same block
        act_sorted = is_active[p_sorted]
        done = act_sorted & ~matched
        lam[p_sorted[done]] = k
        still = act_sorted & matched
        is_active[p_sorted[done]] = False

        # drop groups without a surviving active cell
        live_groups = np.zeros(int(gid[-1]) + 1 if gid.size else 0, dtype=bool)
        live_groups[gid[still]] = True
        keep = live_groups[gid]
        p_sorted = p_sorted[keep]
        gid = gid[keep]
        if not p_sorted.size:
            break

        k += 1
        t = t_of[p_sorted]
        feasible = t >= k - 1
        # active cells that cannot grow further are capped at their 1-based position
        cap = ~feasible & is_active[p_sorted]
        lam[p_sorted[cap]] = t[cap] + 1
        is_active[p_sorted[cap]] = False

        p_sorted = p_sorted[feasible]
        gid = gid[feasible]
        back = flat[p_sorted - (k - 1)]
        order2 = np.argsort(p_sorted, kind="stable")
        pos = p_sorted[order2]
        keys = gid[order2] * S + back[order2]
    return lam.reshape(R, T)


def lambda_1d(series) -> np.ndarray:
    return lambda_1d_rows(np.asarray(series).reshape(1, -1))[0]


def entropy_rate_2d(matrix) -> EntropyEstimate:
    """Entropy rate in bits per cell of a square symbol matrix (n >= 2)."""
    X = np.asarray(matrix)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DataError(f"entropy_rate_2d needs a square matrix, got shape {X.shape}")
    n = X.shape[0]
    if n < 2:
        raise DataError("degenerate matrix")
    total = lambda_2d(X).sum_squares
    cells = n * n
    return EntropyEstimate(cells * math.log2(cells) / total, cells, "lz2d")


def _entropy_from_lambda_1d(lam: np.ndarray) -> float:
    T = lam.shape[-1]
    return T * math.log2(T) / float(np.sum(lam))


def entropy_rate_1d(series) -> EntropyEstimate:
    x = np.asarray(series).ravel()
    if x.size < 2:
        raise DataError("series must have length >= 2")
    return EntropyEstimate(_entropy_from_lambda_1d(lambda_1d(x)), int(x.size), "lz1d")


def entropy_rate_1d_rows(matrix) -> np.ndarray:
    """Vectorized :func:`entropy_rate_1d` over the rows of a 2-D array."""
    X = np.atleast_2d(np.asarray(matrix))
    T = X.shape[1]
    if T < 2:
        raise DataError("series must have length >= 2")
    lam = lambda_1d_rows(X)
    return T * math.log2(T) / lam.sum(axis=1)


def block_entropy_oracle(matrix, k: int = 1) -> EntropyEstimate:
    """Empirical Shannon entropy of overlapping ``k x k`` blocks, divided by ``k²``."""
    X = np.asarray(matrix)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if k < 1 or k > min(X.shape):
        raise DataError(f"block size {k} does not fit a {X.shape} matrix")
    blocks = np.lib.stride_tricks.sliding_window_view(X, (k, k)).reshape(-1, k * k)
    _, counts = np.unique(blocks, axis=0, return_counts=True)
    f = counts / counts.sum()
    h = float(-(f * np.log2(f)).sum()) / (k * k)
    return EntropyEstimate(max(h, 0.0), int(X.size), "block_oracle")


def fano_function(x: float, N: int) -> float:
    """Entropy (bits) of the distribution with top probability ``x`` spread evenly over N-1 others."""
    if N < 1:
        raise ValueError("N must be >= 1")
    h = 0.0
    if 0 < x < 1:
        h = -(x * math.log2(x) + (1 - x) * math.log2(1 - x))
    if N > 2:
        h += (1 - x) * math.log2(N - 1)
    return h


def solve_fano(H: float, N: int, tol: float = 1e-10, max_iter: int = 200) -> float:
    """Largest achievable prediction accuracy given entropy ``H`` bits over ``N`` symbols.

    Returns the root in ``[1/N, 1]`` of ``fano_function(x, N) = H``; the
    function is strictly decreasing there, so plain bisection suffices.
    """
    if H < 0 or math.isnan(H):
        raise DataError(f"entropy must be non-negative, got {H}")
    if N < 1:
        raise DataError(f"alphabet size must be >= 1, got {N}")
    if N == 1 or H == 0:
        return 1.0
    lo, hi = 1.0 / N, 1.0
    if H >= math.log2(N):
        return lo
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if fano_function(mid, N) > H:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)
