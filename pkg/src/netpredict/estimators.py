"""scikit-learn compatible wrappers around the functional API.

Inputs are links x snapshots symbol matrices (``X[i, t]`` is the weight of
link ``i`` at snapshot ``t``), given as arrays or :class:`ExpandedMatrix`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import corpus, markov, measures
from ._validation import as_expanded, check_symbol_matrix


class WeightQuantizer(TransformerMixin, BaseEstimator):
    """Map nonzero weights to quantile ranks ``1..levels``; zeros pass through.

    Cut points are learned on the nonzero cells seen in ``fit``.
    """

    def __init__(self, levels=4):
        self.levels = levels

    def fit(self, X, y=None):
        X = np.asarray(X.values if hasattr(X, "values") else X, dtype=float)
        if self.levels < 1:
            raise ValueError("levels must be >= 1")
        nz = X[X != 0]
        distinct = np.unique(nz)
        if self.levels >= distinct.size:
            self.cuts_ = (distinct[:-1] + distinct[1:]) / 2 if distinct.size > 1 else np.array([])
        else:
            self.cuts_ = np.unique(np.quantile(nz, np.arange(1, self.levels) / self.levels, method="lower"))
            # cut values belong to the lower bin
            self.cuts_ = np.nextafter(self.cuts_, np.inf)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "cuts_")
        X = np.asarray(X.values if hasattr(X, "values") else X, dtype=float)
        out = np.searchsorted(self.cuts_, X, side="right") + 1
        out[X == 0] = 0
        return out.astype(np.int64)


class MatrixFilter(TransformerMixin, BaseEstimator):
    """Select and sort the most active links (rows) of a symbol matrix."""

    def __init__(self, mass_frac=0.6, act_thresh=0.1, m_theta=1000):
        self.mass_frac = mass_frac
        self.act_thresh = act_thresh
        self.m_theta = m_theta

    def fit(self, X, y=None):
        em = as_expanded(X)
        self.filtered_ = corpus.filter_matrix(em, self.mass_frac, self.act_thresh, self.m_theta)
        self.kept_rows_ = np.array(self.filtered_.kept_rows)
        self.activation_ = np.array(self.filtered_.activation)
        self.n_features_in_ = em.T
        return self

    def transform(self, X):
        check_is_fitted(self, "kept_rows_")
        X = check_symbol_matrix(X)
        return X[self.kept_rows_]


class TopologicalTemporalPredictability(BaseEstimator):
    """Predictability profile of a temporal network.

    Parameters
    ----------
    filter : bool
        Apply activation filtering before estimation; set False for matrices
        that are already filtered.
    mass_frac, act_thresh, m_theta : float, float, int
        Filtering thresholds.
    row_orders : int
        Number of row arrangements; TTP is the maximum over them.
    baseline_runs : int
        Shuffled realizations for the TTP and PIL baselines.
    compute_tep : bool
        Also compute per-link predictabilities (TeP, NTeP).
    random_state : int
        Master seed.

    Attributes
    ----------
    ttp_, ttp_baseline_, nttp_ : float
    tep_, ntep_ : float or None
    pil_, npil_ : ndarray or None
    report_ : PredictabilityReport
    """

    def __init__(
        self,
        filter=True,
        mass_frac=0.6,
        act_thresh=0.1,
        m_theta=1000,
        row_orders=1,
        baseline_runs=40,
        compute_tep=True,
        random_state=0,
    ):
        self.filter = filter
        self.mass_frac = mass_frac
        self.act_thresh = act_thresh
        self.m_theta = m_theta
        self.row_orders = row_orders
        self.baseline_runs = baseline_runs
        self.compute_tep = compute_tep
        self.random_state = random_state

    def fit(self, X, y=None):
        em = as_expanded(X)
        if self.filter:
            filtered = corpus.filter_matrix(em, self.mass_frac, self.act_thresh, self.m_theta)
        else:
            filtered = corpus.FilteredMatrix(em, corpus.activation_rates(em), tuple(range(em.m)), "explicit permutation")
        rep = measures.profile(
            filtered,
            row_orders=self.row_orders,
            baseline_runs=self.baseline_runs,
            seed=self.random_state,
            with_tep=self.compute_tep,
        )
        self.filtered_ = filtered
        self.report_ = rep
        self.ttp_ = rep.ttp
        self.ttp_baseline_ = rep.ttp_bl
        self.nttp_ = rep.nttp
        self.tep_ = rep.tep
        self.ntep_ = rep.ntep
        self.pil_ = rep.tep_result.pil if rep.tep_result else None
        self.npil_ = rep.tep_result.npil if rep.tep_result else None
        self.n_features_in_ = em.T
        return self

    def score(self, X=None, y=None):
        """Normalized topological-temporal predictability of the fitted matrix."""
        check_is_fitted(self, "nttp_")
        return self.nttp_


class MarkovPredictor(BaseEstimator):
    """Per-link order-``order`` Markov predictor.

    ``fit`` learns one transition table per row; ``predict`` returns, for each
    row of ``X``, the predicted symbol following its last ``order`` symbols;
    ``score`` is the mean per-row one-step accuracy over every window of ``X``.
    """

    def __init__(self, order=1):
        self.order = order

    def fit(self, X, y=None):
        X = check_symbol_matrix(X, min_cols=self.order + 1)
        self.model_ = markov.fit_markov(X, self.order)
        self.n_links_ = X.shape[0]
        self.n_features_in_ = X.shape[1]
        return self

    def _check_rows(self, X):
        check_is_fitted(self, "model_")
        X = check_symbol_matrix(X)
        if X.shape[0] != self.n_links_:
            raise ValueError(f"X has {X.shape[0]} links, predictor was fitted on {self.n_links_}")
        return X

    def predict(self, X):
        X = self._check_rows(X)
        if X.shape[1] < self.order:
            raise ValueError(f"need at least {self.order} snapshots of history")
        l = self.order
        return np.array([tab.predict(tuple(int(v) for v in row[-l:])) for tab, row in zip(self.model_.tables, X)])

    def score(self, X, y=None):
        X = self._check_rows(X)
        l = self.order
        accs = []
        for tab, row in zip(self.model_.tables, X):
            wins = markov._windows(row, l)
            accs.append(np.mean([tab.predict(h) == nxt for h, nxt in wins]))
        return float(np.mean(accs))
