"""Reproducible synthetic dictionaries and corruption-bearing instances.

All randomness comes from ``numpy.random.default_rng`` (the PCG64 stream),
so a given :class:`GenSpec` always regenerates byte-identical data.  Draws
happen in a fixed order: dictionary entries, corrupted-index choice, clean
coefficient supports and values (column by column), the clean-noise block,
then one raw vector per corrupted column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .problem import ProblemSpec, Variant

__all__ = ["GenSpec", "CorruptionGroundTruth", "generate_dictionary", "generate_instance"]


@dataclass(frozen=True)
class GenSpec:
    """Knobs for one synthetic instance.

    ``clean_coeff_mean`` shifts the normal distribution the nonzero clean
    coefficients are drawn from.  The default keeps clean coefficient norms
    bounded away from zero, so at moderate penalties no clean column is
    shrunk all the way to zero and detection stays well-posed.
    """

    m: int
    k: int
    n: int
    corruption_fraction: float = 0.1
    corruption_magnitude: float = 10.0
    clean_coeff_sparsity: float = 0.2
    clean_coeff_mean: float = 3.0
    noise_sigma: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if min(self.m, self.k, self.n) < 1:
            raise ValueError(f"m, k, n must all be at least 1, got {self.m}, {self.k}, {self.n}")
        if not 0.0 <= self.corruption_fraction < 1.0:
            raise ValueError(
                f"corruption_fraction must lie in [0, 1), got {self.corruption_fraction}"
            )
        if not self.corruption_magnitude > 0:
            raise ValueError(
                f"corruption_magnitude must be positive, got {self.corruption_magnitude}"
            )
        if not 0.0 < self.clean_coeff_sparsity <= 1.0:
            raise ValueError(
                f"clean_coeff_sparsity must lie in (0, 1], got {self.clean_coeff_sparsity}"
            )
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be nonnegative, got {self.noise_sigma}")


@dataclass(frozen=True)
class CorruptionGroundTruth:
    """Which columns were corrupted, and how the corruption was built.

    ``orthogonal_complement`` is False when the dictionary's range fills the
    ambient space, in which case corrupted columns fall back to unprojected
    noise and detection assertions should be weakened accordingly.
    """

    corrupted_indices: frozenset[int]
    corruption_magnitude: float
    seed: int
    orthogonal_complement: bool = True

    def __post_init__(self):
        object.__setattr__(self, "corrupted_indices", frozenset(int(i) for i in self.corrupted_indices))
        if any(i < 0 for i in self.corrupted_indices):
            raise ValueError("corrupted indices must be nonnegative")
        if not self.corruption_magnitude > 0:
            raise ValueError(
                f"corruption_magnitude must be positive, got {self.corruption_magnitude}"
            )


def generate_dictionary(gen: GenSpec) -> np.ndarray:
    """Seeded m x k standard-normal dictionary with unit-norm columns."""
    rng = np.random.default_rng(gen.seed)
    return _unit_column_dictionary(rng, gen.m, gen.k)


def _unit_column_dictionary(rng: np.random.Generator, m: int, k: int) -> np.ndarray:
    d = rng.standard_normal((m, k))
    return d / np.linalg.norm(d, axis=0)


def generate_instance(gen: GenSpec) -> tuple[ProblemSpec, CorruptionGroundTruth, np.ndarray]:
    """Build a corruption-bearing instance with ground truth.

    Clean columns are sparse combinations of dictionary atoms plus Gaussian
    noise; corrupted columns are random vectors projected onto the
    orthogonal complement of the dictionary's range (when the ambient
    dimension exceeds its rank) and rescaled to ``corruption_magnitude``
    times the mean clean-column norm, so they genuinely cannot be
    represented.  Returns a plain-variant :class:`ProblemSpec` with
    ``lam=1`` (swap variant/penalties via :func:`dataclasses.replace`), the
    ground truth, and the true coefficients ``Z_true`` (zero on corrupted
    columns).
    """
    rng = np.random.default_rng(gen.seed)
    m, k, n = gen.m, gen.k, gen.n
    D = _unit_column_dictionary(rng, m, k)

    n_corrupt = math.floor(gen.corruption_fraction * n)
    if n_corrupt > 0:
        corrupted = np.sort(rng.choice(n, size=n_corrupt, replace=False))
    else:
        corrupted = np.empty(0, dtype=int)
    corrupted_set = frozenset(int(i) for i in corrupted)
    clean = [i for i in range(n) if i not in corrupted_set]

    support_size = math.ceil(gen.clean_coeff_sparsity * k)
    Z_true = np.zeros((k, n))
    for i in clean:
        support = rng.choice(k, size=support_size, replace=False)
        Z_true[support, i] = gen.clean_coeff_mean + rng.standard_normal(support_size)

    X = np.zeros((m, n))
    noise = rng.standard_normal((m, len(clean)))
    X[:, clean] = D @ Z_true[:, clean] + gen.noise_sigma * noise

    orthogonal = True
    if n_corrupt > 0:
        left, svals, _ = np.linalg.svd(D, full_matrices=False)
        rank = int((svals > svals[0] * max(m, k) * np.finfo(float).eps).sum())
        basis = left[:, :rank]
        orthogonal = m > rank
        mean_clean_norm = float(np.linalg.norm(X[:, clean], axis=0).mean())
        target = gen.corruption_magnitude * mean_clean_norm
        for i in corrupted:
            while True:
                v = rng.standard_normal(m)
                if orthogonal:
                    # project twice so the in-range component is fully removed
                    v = v - basis @ (basis.T @ v)
                    v = v - basis @ (basis.T @ v)
                norm_v = np.linalg.norm(v)
                if norm_v > 1e-8:
                    break
            X[:, i] = v * (target / norm_v)

    spec = ProblemSpec(X=X, D=D, variant=Variant.PLAIN, lam=1.0)
    truth = CorruptionGroundTruth(
        corrupted_indices=corrupted_set,
        corruption_magnitude=gen.corruption_magnitude,
        seed=gen.seed,
        orthogonal_complement=orthogonal,
    )
    return spec, truth, Z_true
