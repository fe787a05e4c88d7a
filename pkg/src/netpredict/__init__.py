"""Intrinsic predictability of temporal networks."""

__version__ = "0.1.0"

from ._errors import DataError, NetPredictError, NumericError
from .congruency import extrapolate_ttp, split_squares, stage_sequence
from .corpus import (
    Alphabet,
    EventRecord,
    ExpandedMatrix,
    FilteredMatrix,
    filter_matrix,
    ingest_events,
    read_matrix,
    write_matrix,
)
from .entropy import block_entropy_oracle, entropy_rate_1d, entropy_rate_2d, lambda_2d, solve_fano
from .estimators import MarkovPredictor, MatrixFilter, TopologicalTemporalPredictability, WeightQuantizer
from .markov import markov_accuracy
from .measures import normalize, pil, profile, tep_profile, ttp, ttp_baseline

__all__ = [
    "Alphabet",
    "DataError",
    "EventRecord",
    "ExpandedMatrix",
    "FilteredMatrix",
    "MarkovPredictor",
    "MatrixFilter",
    "NetPredictError",
    "NumericError",
    "TopologicalTemporalPredictability",
    "WeightQuantizer",
    "block_entropy_oracle",
    "entropy_rate_1d",
    "entropy_rate_2d",
    "extrapolate_ttp",
    "filter_matrix",
    "ingest_events",
    "lambda_2d",
    "markov_accuracy",
    "normalize",
    "pil",
    "profile",
    "read_matrix",
    "solve_fano",
    "split_squares",
    "stage_sequence",
    "tep_profile",
    "ttp",
    "ttp_baseline",
    "write_matrix",
]
