"""Score solution columns and flag corrupted samples.

The decision statistic is the Euclidean norm of each coefficient column:
corrupted samples that the dictionary cannot represent end up with
(near-)zero coefficients, so small scores mark corruption.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError
from .matrix import as_matrix, column_norms
from .synthetic import CorruptionGroundTruth

__all__ = [
    "AbsoluteThreshold",
    "RelativeMedian",
    "LargestGap",
    "DetectionResult",
    "score_columns",
    "flag_corrupted",
    "detection_metrics",
]

# Gap spreads below this are considered uniform: no gap stands out, flag nothing.
_GAP_TIE_TOL = 1e-12


@dataclass(frozen=True)
class AbsoluteThreshold:
    """Flag scores strictly below a fixed threshold."""

    tau: float

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError(f"tau must be nonnegative, got {self.tau}")


@dataclass(frozen=True)
class RelativeMedian:
    """Flag scores strictly below ``fraction * median(scores)``."""

    fraction: float

    def __post_init__(self):
        if not 0.0 < self.fraction < 1.0:
            raise ValueError(f"fraction must lie in (0, 1), got {self.fraction}")


@dataclass(frozen=True)
class LargestGap:
    """Parameter-free rule: flag everything below the largest score gap."""


Strategy = AbsoluteThreshold | RelativeMedian | LargestGap


@dataclass(frozen=True, eq=False)
class DetectionResult:
    """Scores, the flagged column set, and the threshold that produced it.

    Invariant: ``flagged == {i : scores[i] < threshold_used}``.
    """

    scores: np.ndarray
    flagged: frozenset[int]
    threshold_used: float


def score_columns(Z) -> np.ndarray:
    """Per-column Euclidean norms of the coefficient matrix."""
    return column_norms(as_matrix(Z, name="Z"))


def flag_corrupted(scores, strategy: Strategy = LargestGap()) -> DetectionResult:
    """Apply a decision rule to column scores.

    ``LargestGap`` sorts the scores, finds the largest consecutive gap, and
    flags everything below it; when all gaps agree to within 1e-12 nothing
    stands out and nothing is flagged.  Needs at least two scores.
    """
    s = np.asarray(scores, dtype=float).ravel()
    if s.size == 0:
        raise EmptyInputError("no scores to flag")
    if not np.isfinite(s).all():
        raise ValueError("scores must be finite")

    if isinstance(strategy, AbsoluteThreshold):
        threshold = strategy.tau
    elif isinstance(strategy, RelativeMedian):
        threshold = strategy.fraction * float(np.median(s))
    elif isinstance(strategy, LargestGap):
        if s.size < 2:
            raise EmptyInputError("LargestGap needs at least two scores")
        ordered = np.sort(s)
        gaps = np.diff(ordered)
        if float(gaps.max() - gaps.min()) <= _GAP_TIE_TOL:
            threshold = 0.0
        else:
            j = int(np.argmax(gaps))
            threshold = 0.5 * float(ordered[j] + ordered[j + 1])
    else:
        raise TypeError(f"unknown strategy {strategy!r}")

    flagged = frozenset(int(i) for i in np.flatnonzero(s < threshold))
    return DetectionResult(scores=s, flagged=flagged, threshold_used=float(threshold))


def detection_metrics(
    result: DetectionResult, truth: CorruptionGroundTruth
) -> tuple[float, float]:
    """Precision and recall of the flagged set against ground truth.

    Empty flagged set gives precision 1.0 (no false positives); empty truth
    gives recall 1.0.
    """
    n = result.scores.size
    if any(i >= n for i in truth.corrupted_indices):
        raise ValueError("ground-truth indices exceed the number of scored columns")
    flagged = result.flagged
    true_set = truth.corrupted_indices
    hits = len(flagged & true_set)
    precision = 1.0 if not flagged else hits / len(flagged)
    recall = 1.0 if not true_set else hits / len(true_set)
    return precision, recall
