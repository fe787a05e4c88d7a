"""Predictability of non-square matrices via greedy square splitting.

The square-only estimator is applied to the squares of a greedy tiling; the
squares are then turned into 1x1 units one at a time (smallest first), which
traces weighted-average predictability against the number of pieces. That
relation is linear, and extrapolating it to a single piece gives the
predictability of the whole matrix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._errors import DataError


@dataclass(frozen=True)
class Square:
    row: int
    col: int
    size: int


@dataclass(frozen=True)
class SplitPlan:
    squares: tuple[Square, ...]
    unit_count: int
    total_area: int
    shape: tuple[int, int]
    origin_corner: str = "left"

    @property
    def square_sizes(self) -> tuple[int, ...]:
        return tuple(s.size for s in self.squares)

    @property
    def Q(self) -> int:
        return len(self.squares)

    def to_dict(self):
        return {
            "shape": list(self.shape),
            "square_sizes": list(self.square_sizes),
            "unit_count": self.unit_count,
            "total_area": self.total_area,
            "origin_corner": self.origin_corner,
        }


@dataclass(frozen=True)
class StagePoint:
    N: int
    p: float


@dataclass(frozen=True)
class CongruencyFit:
    k: float
    b: float
    r2: float
    ttp: float
    clamped: bool = False


def split_squares(m: int, T: int) -> SplitPlan:
    """Greedy tiling of an ``m x T`` rectangle, largest square first.

    Squares are cut from the column-0 side (or the top for tall remainders),
    so the first squares cover the earliest snapshots. Remainders of height
    or width 1 become units.
    """
    if m < 1 or T < 1:
        raise DataError(f"matrix dimensions must be positive, got {m}x{T}")
    squares = []
    units = 0
    r0, c0, h, w = 0, 0, m, T
    while h > 0 and w > 0:
        if h == 1 or w == 1:
            units += h * w
            break
        e = min(h, w)
        squares.append(Square(r0, c0, e))
        if w >= h:
            c0 += e
            w -= e
        else:
            r0 += e
            h -= e
    return SplitPlan(tuple(squares), units, m * T, (m, T))


def stage_sequence(square_preds, plan: SplitPlan, alphabet_size: int) -> list[StagePoint]:
    """Weighted-average predictability at each unitization stage.

    Stage ``i`` (1-based) keeps the first ``Q - i + 1`` squares and counts the
    rest, plus the original units, as units of predictability ``1/|A|``.
    """
    preds = np.asarray(square_preds, dtype=float)
    Q = plan.Q
    if preds.shape != (Q,):
        raise DataError(f"{preds.size} square predictabilities for a plan with {Q} squares")
    if alphabet_size < 1:
        raise DataError("alphabet size must be >= 1")
    areas = np.array([s.size**2 for s in plan.squares], dtype=float)
    D = plan.total_area
    unit_p = 1.0 / alphabet_size
    stages = []
    for i in range(1, Q + 1):
        kept = Q - i + 1
        unit_area = areas[kept:].sum() + plan.unit_count
        p = (float(np.dot(areas[:kept], preds[:kept])) + unit_area * unit_p) / D
        stages.append(StagePoint(int(kept + unit_area), p))
    return stages


def extrapolate_ttp(stages, plan: SplitPlan, alphabet_size: int) -> CongruencyFit:
    """Least-squares line through the stage points, evaluated at one piece.

    With a single square the first stage is returned as is. The result is
    clamped to ``[1/|A|, 1]``; clamping emits a warning and sets ``clamped``.
    """
    if not stages:
        if plan.Q == 0:
            # no square at all: nothing but units
            p = 1.0 / alphabet_size
            return CongruencyFit(0.0, p, 1.0, p)
        raise DataError("need at least one stage")
    N = np.array([s.N for s in stages], dtype=float)
    p = np.array([s.p for s in stages], dtype=float)
    if len(stages) == 1:
        return CongruencyFit(0.0, float(p[0]), 1.0, float(p[0]))

    n = N.size
    sxx = n * np.dot(N, N) - N.sum() ** 2
    k = (n * np.dot(N, p) - N.sum() * p.sum()) / sxx
    b = (p.sum() - k * N.sum()) / n
    resid = p - (k * N + b)
    ss_tot = float(np.sum((p - p.mean()) ** 2))
    r2 = 1.0 if ss_tot <= 1e-300 else 1.0 - float(np.dot(resid, resid)) / ss_tot

    raw = k + b
    lo = 1.0 / alphabet_size
    ttp = min(max(raw, lo), 1.0)
    clamped = ttp != raw and abs(ttp - raw) > 1e-12
    if clamped:
        warnings.warn(f"extrapolated predictability {raw:.6f} clamped to {ttp:.6f}", RuntimeWarning, stacklevel=2)
    return CongruencyFit(float(k), float(b), float(r2), float(ttp), bool(clamped))


def congruency_residual(plan: SplitPlan, square_preds, alphabet_size: int, k: float) -> dict[int, float]:
    """Deviation from the congruency identity for every square that gets unitized.

    Keys are 1-based square indices ``2..Q``; the first square is never unitized.
    """
    if plan.Q < 2:
        raise DataError("congruency residuals need at least two squares")
    preds = np.asarray(square_preds, dtype=float)
    if preds.shape != (plan.Q,):
        raise DataError(f"{preds.size} square predictabilities for a plan with {plan.Q} squares")
    D = plan.total_area
    out = {}
    for j in range(2, plan.Q + 1):
        e2 = plan.squares[j - 1].size ** 2
        out[j] = e2 * (1.0 / alphabet_size - preds[j - 1]) / (D * (e2 - 1)) - k
    return out
