"""Closed-form proximal operators used by every solver step."""

from __future__ import annotations

import numpy as np

from .matrix import as_matrix, column_norms

__all__ = ["prox_l21_columns", "soft_threshold", "prox_sparse_group"]


def prox_l21_columns(m, eps: float) -> np.ndarray:
    """Column-wise group shrinkage: argmin_A eps ||A||_{2,1} + 1/2 ||A - M||_F^2.

    Each column is scaled by ``1 - eps/||m_i||`` when its norm exceeds
    ``eps`` and zeroed otherwise (a tied norm maps to zero).
    """
    a = as_matrix(m)
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    norms = column_norms(a)
    scale = np.zeros_like(norms)
    keep = norms > eps
    scale[keep] = 1.0 - eps / norms[keep]
    return a * scale


def soft_threshold(m, tau: float) -> np.ndarray:
    """Entry-wise shrinkage sign(m) * max(|m| - tau, 0)."""
    a = as_matrix(m)
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    return np.sign(a) * np.maximum(np.abs(a) - tau, 0.0)


def prox_sparse_group(m, tau: float, eps: float) -> np.ndarray:
    """Proximal operator of the composite penalty tau ||A||_1 + eps ||A||_{2,1}.

    Soft-threshold entries first, then group-shrink columns; the composition
    is the exact prox of the sparse-group penalty.
    """
    return prox_l21_columns(soft_threshold(m, tau), eps)
