"""Synthetic temporal networks with controllable regularity."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ._errors import DataError
from .corpus import Alphabet, ExpandedMatrix


@dataclass(frozen=True)
class SmallWorldParams:
    n_nodes: int = 50
    rewire_p: float = 0.0
    T: int = 300
    seed: int = 0

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class TsbmParams:
    communities: int = 4
    n_nodes: int = 100
    degree: int = 3
    T: int = 300
    beta: float = 0.0
    gamma: float = 0.0
    p_beta: float = 0.5
    p_gamma: float = 0.5
    alphabet_size: int = 4
    seed: int = 0

    def __post_init__(self):
        if abs(self.p_beta + self.p_gamma - 1.0) > 1e-9:
            raise DataError("p_beta + p_gamma must equal 1")
        for name in ("beta", "gamma", "p_beta", "p_gamma"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise DataError(f"{name} must be in [0, 1], got {v}")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class LongRangeParams:
    gamma_x: float = 1.0
    gamma_y: float = 1.0
    rows: int = 64
    cols: int = 256
    levels: int = 4
    seed: int = 0

    def __post_init__(self):
        if not (self.gamma_x > 0 and self.gamma_y > 0):
            raise DataError("decay exponents must be positive")

    def to_dict(self):
        return asdict(self)


def _pair_index(i, j, n):
    i, j = np.minimum(i, j), np.maximum(i, j)
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def gen_small_world(params: SmallWorldParams) -> ExpandedMatrix:
    """Evolving ring with ``floor(p * n)`` links rewired per snapshot.

    A rewired link keeps its source endpoint and moves its target to a uniform
    node that is neither the source nor already linked to it; after 100
    failed draws the link is left in place. Rows enumerate all unordered node
    pairs, so the link count of every column is ``n_nodes``.
    """
    n, p, T = params.n_nodes, params.rewire_p, params.T
    if n < 3:
        raise DataError("small-world model needs at least 3 nodes")
    if not 0 <= p <= 1:
        raise DataError(f"rewire_p must be in [0, 1], got {p}")
    if T < 1:
        raise DataError("T must be >= 1")
    rng = np.random.default_rng(params.seed)
    links = [(i, (i + 1) % n) for i in range(n)]
    present = {frozenset(e) for e in links}
    n_pairs = n * (n - 1) // 2
    values = np.zeros((n_pairs, T), dtype=np.int64)
    n_rewire = int(np.floor(p * n))

    for t in range(T):
        if t > 0 and n_rewire:
            for idx in rng.choice(len(links), size=n_rewire, replace=False):
                src, dst = links[idx]
                for _ in range(100):
                    new = int(rng.integers(n))
                    if new != src and frozenset((src, new)) not in present:
                        present.discard(frozenset((src, dst)))
                        present.add(frozenset((src, new)))
                        links[idx] = (src, new)
                        break
        e = np.array(links)
        values[_pair_index(e[:, 0], e[:, 1], n), t] = 1

    link_ids = tuple((i, j) for i in range(n) for j in range(i + 1, n))
    return ExpandedMatrix(values, Alphabet((0, 1)), link_ids, directed=False)


def gen_tsbm(params: TsbmParams) -> ExpandedMatrix:
    """Temporal stochastic block model with neighbor and memory copying.

    Snapshot 0 is an intra-community random graph (each node draws ``degree``
    distinct partners) with i.i.d. uniform weights in ``1..alphabet_size``.
    The topology is then frozen. Each later cell, filled column by column and
    top to bottom, copies the cell above with probability ``p_beta*beta``,
    its own previous weight with probability ``p_gamma*gamma``, and is
    uniform otherwise. Row 0 has no cell above and uses the uniform draw
    instead. Only the links of the topology are stored as rows.
    """
    P = params
    if P.communities < 1 or P.n_nodes < P.communities:
        raise DataError("need at least one node per community")
    if P.alphabet_size < 2:
        raise DataError("alphabet_size must be >= 2")
    if P.T < 1:
        raise DataError("T must be >= 1")
    rng = np.random.default_rng(P.seed)
    groups = np.array_split(rng.permutation(P.n_nodes), P.communities)
    smallest = min(len(g) for g in groups)
    if not P.degree < smallest:
        raise DataError(f"degree {P.degree} infeasible for communities of {smallest} nodes")

    edges = set()
    for g in groups:
        g = np.sort(g)
        for a in g:
            others = g[g != a]
            for b in rng.choice(others, size=P.degree, replace=False):
                edges.add((int(min(a, b)), int(max(a, b))))
    link_ids = tuple(sorted(edges))
    m, K = len(link_ids), P.alphabet_size

    values = np.empty((m, P.T), dtype=np.int64)
    values[:, 0] = rng.integers(1, K + 1, size=m)
    pb, pg = P.p_beta * P.beta, P.p_gamma * P.gamma
    rows = np.arange(m)
    for t in range(1, P.T):
        u = rng.random(m)
        fresh = rng.integers(1, K + 1, size=m)
        above = u < pb
        above[0] = False
        keep = ~above & (u < pb + pg)
        col = np.where(keep, values[:, t - 1], fresh)
        # a run of "copy above" cells inherits the value of the last non-copying row
        src = np.maximum.accumulate(np.where(above, 0, rows))
        values[:, t] = col[src]
    return ExpandedMatrix(values, Alphabet(tuple(range(1, K + 1))), link_ids, directed=False)


def _is_pow2(x):
    return x >= 1 and (x & (x - 1)) == 0


def long_range_correlation(rows: int, cols: int, gamma_x: float, gamma_y: float) -> np.ndarray:
    """Anisotropic power-law correlation on the torus, ``C(0) = 1``.

    Uses the regularized radius ``sqrt(1 + r²)`` so lag-1 correlation stays
    below one; the large-lag decay is ``r^-γx cos²φ + r^-γy sin²φ``.
    """
    dy = np.minimum(np.arange(rows), rows - np.arange(rows))[:, None].astype(float)
    dx = np.minimum(np.arange(cols), cols - np.arange(cols))[None, :].astype(float)
    r2 = dx**2 + dy**2
    with np.errstate(invalid="ignore", divide="ignore"):
        cos2 = np.where(r2 > 0, dx**2 / r2, 0.0)
    sin2 = 1.0 - cos2
    reg = 1.0 + r2
    C = reg ** (-gamma_x / 2) * cos2 + reg ** (-gamma_y / 2) * sin2
    C[0, 0] = 1.0
    return C


def gen_long_range(params: LongRangeParams) -> ExpandedMatrix:
    """Power-law correlated field by Fourier filtering, discretized into ``levels`` symbols.

    Rows are the topological axis, columns the temporal axis. Negative
    spectral components of the target correlation are clipped to zero.
    """
    P = params
    if not (_is_pow2(P.rows) and _is_pow2(P.cols)):
        raise DataError(f"rows and cols must be powers of two, got {P.rows}x{P.cols}")
    if P.levels < 2:
        raise DataError("levels must be >= 2")
    rng = np.random.default_rng(P.seed)
    spectrum = np.clip(np.fft.fft2(long_range_correlation(P.rows, P.cols, P.gamma_x, P.gamma_y)).real, 0, None)
    white = rng.standard_normal((P.rows, P.cols))
    field = np.fft.ifft2(np.sqrt(spectrum) * np.fft.fft2(white)).real

    # equal-mass global quantile bins; ties broken by position for exact balance
    order = np.argsort(field, axis=None, kind="stable")
    labels = np.empty(field.size, dtype=np.int64)
    labels[order] = (np.arange(field.size) * P.levels) // field.size + 1
    values = labels.reshape(field.shape)
    link_ids = tuple((i, i) for i in range(P.rows))
    return ExpandedMatrix(values, Alphabet(tuple(range(1, P.levels + 1))), link_ids, directed=True)
