"""Dense matrix validation, matrix norms, and spectral norm estimation.

All matrices are plain 2-D float64 :class:`numpy.ndarray` objects validated
by :func:`as_matrix` at API boundaries.  The l2,1 family follows the column
convention throughout: norms are taken per column and summed over columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteError, ZeroMatrixError

__all__ = [
    "as_matrix",
    "column_norms",
    "NormKind",
    "FROBENIUS",
    "ENTRYWISE_L1",
    "ENTRYWISE_LINF",
    "COLUMN_L21",
    "column_lq1",
    "matrix_norm",
    "spectral_norm",
]

# Below this size an exact dense SVD is cheap and deterministic; larger
# matrices fall back to power iteration on the Gram matrix.
_SVD_MAX_SIDE = 64
_POWER_MAX_ITER = 1000
_POWER_REL_TOL = 1e-12


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Coerce ``values`` to a validated 2-D float64 array.

    Rejects empty shapes and any NaN/Inf entry so that iterative solvers
    never start from poisoned data.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have positive dimensions, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise NonFiniteError(f"{name} contains non-finite entries")
    return arr


def column_norms(m: np.ndarray) -> np.ndarray:
    """Euclidean norm of every column of ``m``."""
    return np.linalg.norm(m, axis=0)


@dataclass(frozen=True)
class NormKind:
    """Selects one of the supported matrix norms.

    ``q`` applies only to the column-wise l_{q,1} family and must lie in
    (0, 1] or equal 2.
    """

    tag: str
    q: float | None = None

    _TAGS = ("frobenius", "entrywise_l1", "entrywise_linf", "column_l21", "column_lq1")

    def __post_init__(self):
        if self.tag not in self._TAGS:
            raise ValueError(f"unknown norm tag {self.tag!r}; expected one of {self._TAGS}")
        if self.tag == "column_lq1":
            if self.q is None or not (0.0 < self.q <= 1.0 or self.q == 2.0):
                raise ValueError(f"q must lie in (0, 1] or equal 2, got {self.q}")
        elif self.q is not None:
            raise ValueError(f"q is only meaningful for column_lq1, got q={self.q} for {self.tag}")


FROBENIUS = NormKind("frobenius")
ENTRYWISE_L1 = NormKind("entrywise_l1")
ENTRYWISE_LINF = NormKind("entrywise_linf")
COLUMN_L21 = NormKind("column_l21")


def column_lq1(q: float) -> NormKind:
    """The column-wise l_{q,1} norm: sum over columns of per-column l_q norms."""
    return NormKind("column_lq1", q=float(q))


def matrix_norm(m, kind: NormKind) -> float:
    """Evaluate the norm named by ``kind`` on matrix ``m``.

    ``column_l21`` and ``column_lq1`` with q=2 share one code path, so they
    agree exactly.
    """
    a = as_matrix(m)
    if kind.tag == "frobenius":
        return float(np.linalg.norm(a))
    if kind.tag == "entrywise_l1":
        return float(np.abs(a).sum())
    if kind.tag == "entrywise_linf":
        return float(np.abs(a).max())
    if kind.tag == "column_l21" or kind.q == 2.0:
        return float(column_norms(a).sum())
    q = kind.q
    return float(((np.abs(a) ** q).sum(axis=0) ** (1.0 / q)).sum())


def spectral_norm(m) -> float:
    """Largest singular value of ``m`` to ~1e-10 relative accuracy.

    Small matrices (min side <= 64) use an exact dense SVD; larger ones use
    power iteration on the Gram matrix of the smaller side.

    Raises
    ------
    ZeroMatrixError
        If every entry of ``m`` is zero.
    """
    a = as_matrix(m)
    if not a.any():
        raise ZeroMatrixError("spectral norm of an all-zero matrix is rejected")
    if min(a.shape) <= _SVD_MAX_SIDE:
        return float(np.linalg.svd(a, compute_uv=False)[0])
    return _power_iteration(a)


def _power_iteration(a: np.ndarray) -> float:
    if a.shape[0] < a.shape[1]:
        a = a.T
    gram = a.T @ a  # square on the smaller side, PSD
    dim = gram.shape[0]
    v = np.full(dim, 1.0 / math.sqrt(dim))
    rayleigh = 0.0
    restarts = 0
    for _ in range(_POWER_MAX_ITER):
        w = gram @ v
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            # v landed in the null space; restart from a basis vector
            v = np.zeros(dim)
            v[restarts % dim] = 1.0
            restarts += 1
            continue
        v = w / norm_w
        current = float(v @ (gram @ v))
        if abs(current - rayleigh) <= _POWER_REL_TOL * max(current, np.finfo(float).tiny):
            rayleigh = current
            break
        rayleigh = current
    return math.sqrt(rayleigh)
