"""Problem instances and objective evaluation.

A problem couples data ``X`` (m x n) with a dictionary ``D`` (m x k) and asks
for coefficients ``Z`` (k x n) and error ``E`` (m x n) with ``X = D Z + E``.
The column-sparse penalty on ``Z`` drives the coefficients of grossly
corrupted samples to zero so ``E`` absorbs them whole.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .matrix import as_matrix, column_norms

__all__ = ["Variant", "ProblemSpec", "objective_value"]


class Variant(str, enum.Enum):
    """Which penalty/loss combination a problem uses."""

    PLAIN = "plain"        # ||Z||_{2,1} + lam/2 ||E||_F^2
    WEIGHTED = "weighted"  # ||Z||_{2,1} + lam/2 ||E W||_F^2, W = diag(||Z_i||_2)
    SPARSE = "sparse"      # ||Z||_1 + beta ||Z||_{2,1} + lam/2 ||E||_F^2


@dataclass(frozen=True)
class ProblemSpec:
    """One solve instance: data, dictionary, variant, and penalty weights."""

    X: np.ndarray
    D: np.ndarray
    variant: Variant = Variant.PLAIN
    lam: float = 1.0
    beta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "X", as_matrix(self.X, name="X"))
        object.__setattr__(self, "D", as_matrix(self.D, name="D"))
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.X.shape[0] != self.D.shape[0]:
            raise ValueError(
                f"X and D must share the ambient dimension: X has {self.X.shape[0]} rows, "
                f"D has {self.D.shape[0]}"
            )
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if self.beta < 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")
        if self.variant is Variant.SPARSE and not self.beta > 0:
            raise ValueError("the sparse variant requires beta > 0")
        if not column_norms(self.D).max() > 0:
            raise ValueError("D has no column with nonzero norm (degenerate dictionary)")

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]

    @property
    def k(self) -> int:
        return self.D.shape[1]


def objective_value(spec: ProblemSpec, Z, E) -> float:
    """Penalty-plus-loss objective of ``(Z, E)`` under ``spec``'s variant.

    The weighted variant builds its error weights from the supplied ``Z``:
    column i of ``E`` is scaled by ``||Z_i||_2``, so columns whose
    coefficients vanish contribute no error at all.
    """
    z = as_matrix(Z, name="Z")
    e = as_matrix(E, name="E")
    if z.shape != (spec.k, spec.n):
        raise ValueError(f"Z must be {spec.k}x{spec.n}, got {z.shape[0]}x{z.shape[1]}")
    if e.shape != (spec.m, spec.n):
        raise ValueError(f"E must be {spec.m}x{spec.n}, got {e.shape[0]}x{e.shape[1]}")

    l21 = float(column_norms(z).sum())
    if spec.variant is Variant.PLAIN:
        return l21 + 0.5 * spec.lam * float((e * e).sum())
    if spec.variant is Variant.WEIGHTED:
        w = column_norms(z)
        return l21 + 0.5 * spec.lam * float(((e * e).sum(axis=0) * w**2).sum())
    return float(np.abs(z).sum()) + spec.beta * l21 + 0.5 * spec.lam * float((e * e).sum())
