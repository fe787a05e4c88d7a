import numpy as np
from sklearn.utils.validation import check_array

from ._errors import DataError
from .corpus import ExpandedMatrix, FilteredMatrix


def check_symbol_matrix(X, min_rows=1, min_cols=1):
    """Validate a links x snapshots symbol matrix and return it as an int64 array."""
    if isinstance(X, FilteredMatrix):
        X = X.values
    elif isinstance(X, ExpandedMatrix):
        X = X.values
    try:
        arr = check_array(
            X,
            dtype=None,
            ensure_2d=True,
            ensure_min_samples=min_rows,
            ensure_min_features=min_cols,
        )
    except ValueError as exc:
        raise DataError(str(exc)) from None
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.mod(arr, 1) == 0):
            raise DataError("symbol matrix must contain integers")
    arr = arr.astype(np.int64, copy=False)
    if arr.min() < 0:
        raise DataError("symbols must be non-negative")
    return arr


def as_expanded(X):
    """Wrap validated input as an :class:`ExpandedMatrix`, keeping existing metadata."""
    if isinstance(X, ExpandedMatrix):
        return X
    if isinstance(X, FilteredMatrix):
        return X.matrix
    return ExpandedMatrix.from_array(check_symbol_matrix(X))
