"""Solvers for the robust representation problems.

Two routes solve the plain column-sparse problem and cross-check each other:

* :func:`solve_ladmap` — linearized alternating direction with adaptive
  penalty.  Each iteration takes a group-shrinkage step on ``Z``, a scalar
  closed-form step on ``E``, a gradient-ascent multiplier update, and grows
  the penalty ``mu`` geometrically.
* :func:`solve_irls` — iteratively reweighted least squares on the
  unconstrained form.  Each iteration solves a diagonally shifted linear
  system per column and re-derives column weights from a smoothed norm whose
  smoothing parameter decays geometrically.

:func:`solve_weighted_ladmap` handles the error-reweighting variant by
lagging the weights across outer rounds, and :func:`solve_sparse_ladmap`
swaps the group shrinkage for composite sparse-group shrinkage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NonFiniteIterateError, SingularSystemError
from .matrix import as_matrix, column_norms, spectral_norm
from .problem import ProblemSpec, Variant
from .prox import prox_l21_columns, prox_sparse_group

__all__ = [
    "SolverOptions",
    "SolveReport",
    "ladmap_z_step",
    "ladmap_e_step",
    "weighted_e_step",
    "solve_ladmap",
    "solve_weighted_ladmap",
    "solve_sparse_ladmap",
    "sylvester_diag_solve",
    "solve_irls",
]

# Keeps the IRLS weights finite once columns have effectively vanished.
_IRLS_MU_FLOOR = 1e-12


@dataclass(frozen=True)
class SolverOptions:
    """Schedule and stopping parameters.

    Defaults follow the LADMAP schedule (mu0=1e-3, mu_max=1e10, rho=1.05,
    eps_tol=1e-6, max_iter=1000).  :meth:`irls_defaults` returns the IRLS
    schedule (rho=1.1, max_iter=500); its initial smoothing is
    ``irls_mu_scale * ||D||_2``.
    """

    mu0: float = 1e-3
    mu_max: float = 1e10
    rho: float = 1.05
    eps_tol: float = 1e-6
    max_iter: int = 1000
    irls_mu_scale: float = 0.1
    weighted_outer_iters: int = 5
    weight_floor: float = 1e-6

    def __post_init__(self):
        if not self.mu0 > 0:
            raise ValueError(f"mu0 must be positive, got {self.mu0}")
        if self.mu0 > self.mu_max:
            raise ValueError(f"mu0 must not exceed mu_max ({self.mu0} > {self.mu_max})")
        if not self.rho > 1:
            raise ValueError(f"rho must exceed 1, got {self.rho}")
        if not self.eps_tol > 0:
            raise ValueError(f"eps_tol must be positive, got {self.eps_tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")
        if not self.irls_mu_scale > 0:
            raise ValueError(f"irls_mu_scale must be positive, got {self.irls_mu_scale}")
        if self.weighted_outer_iters < 1:
            raise ValueError(
                f"weighted_outer_iters must be at least 1, got {self.weighted_outer_iters}"
            )
        if self.weight_floor < 0:
            raise ValueError(f"weight_floor must be nonnegative, got {self.weight_floor}")

    @classmethod
    def irls_defaults(cls) -> "SolverOptions":
        return cls(rho=1.1, max_iter=500)


@dataclass
class SolveReport:
    """Solution plus convergence diagnostics.

    ``objective_trace`` records the penalty-only objective per iteration
    (no Lagrangian terms), so values are comparable across solvers.
    ``residual_trace`` records ``||X - D Z - E||_inf`` per iteration for the
    constrained solvers and ``||Z_t - Z_{t+1}||_inf`` for IRLS.
    ``Z_previous``/``E_previous`` hold the second-to-last iterates so the
    stopping conditions can be re-verified from the report alone.
    """

    Z: np.ndarray
    E: np.ndarray
    converged: bool
    iterations: int
    objective_trace: list[float] = field(default_factory=list)
    residual_trace: list[float] = field(default_factory=list)
    solver_name: str = ""
    Z_previous: np.ndarray | None = None
    E_previous: np.ndarray | None = None


def ladmap_z_step(Z, E, Y, X, D, mu: float, eta: float) -> np.ndarray:
    """One linearized coefficient update.

    Returns the group shrinkage of ``Z + D^T (X - D Z - E + Y/mu) / eta``
    at threshold ``1 / (mu * eta)``; ``eta`` must be ``||D||_2^2``.
    """
    arg = Z + D.T @ (X - D @ Z - E + Y / mu) / eta
    return prox_l21_columns(arg, 1.0 / (mu * eta))


def ladmap_e_step(Z_next, Y, X, D, mu: float, lam: float) -> np.ndarray:
    """Closed-form error update ``mu/(lam + mu) * (X + Y/mu - D Z_next)``."""
    return (mu / (lam + mu)) * (X + Y / mu - D @ Z_next)


def weighted_e_step(Z_next, Y, X, D, mu: float, lam: float, weights) -> np.ndarray:
    """Column-wise error update for the reweighted loss.

    Column i is scaled by ``mu / (lam * w_i^2 + mu)``; a floored weight near
    zero leaves that column's error essentially unpenalized (full residual).
    """
    w = np.asarray(weights, dtype=float).ravel()
    return (X + Y / mu - D @ Z_next) * (mu / (lam * w**2 + mu))


def _ladmap_core(
    X: np.ndarray,
    D: np.ndarray,
    lam: float,
    opts: SolverOptions,
    z_update: Callable[[np.ndarray, float], np.ndarray],
    penalty: Callable[[np.ndarray, np.ndarray], float],
    solver_name: str,
    col_weights: np.ndarray | None = None,
    callback: Callable[[dict], None] | None = None,
) -> SolveReport:
    """Loop skeleton shared by the plain, weighted, and sparse solvers.

    Convergence requires all three infinity-norm conditions at once:
    ``||Z_t - Z_{t+1}|| < eps``, ``||E_t - E_{t+1}|| < eps``, and
    ``||X - D Z - E|| < eps``, checked after the multiplier update.
    """
    eta = spectral_norm(D) ** 2
    m, n = X.shape
    k = D.shape[1]
    Z = np.zeros((k, n))
    E = np.zeros((m, n))
    Y = np.zeros((m, n))
    DZ = np.zeros((m, n))
    if col_weights is None:
        e_scale = None
    else:
        e_scale = np.asarray(col_weights, dtype=float).ravel() ** 2 * lam
    mu = opts.mu0
    objective_trace: list[float] = []
    residual_trace: list[float] = []
    converged = False
    Z_prev, E_prev = Z, E
    t = 0

    for t in range(1, opts.max_iter + 1):
        Z_prev, E_prev = Z, E
        arg = Z + D.T @ (X - DZ - E + Y / mu) / eta
        Z = z_update(arg, mu * eta)
        DZ = D @ Z
        residual_term = X + Y / mu - DZ
        if e_scale is None:
            E = (mu / (lam + mu)) * residual_term
        else:
            E = residual_term * (mu / (e_scale + mu))
        R = X - DZ - E
        Y = Y + mu * R

        if not (np.isfinite(Z).all() and np.isfinite(E).all() and np.isfinite(Y).all()):
            partial = SolveReport(
                Z=Z_prev,
                E=E_prev,
                converged=False,
                iterations=t - 1,
                objective_trace=objective_trace,
                residual_trace=residual_trace,
                solver_name=solver_name,
            )
            raise NonFiniteIterateError(
                f"{solver_name} iterate became non-finite at iteration {t}", report=partial
            )

        residual_inf = float(np.abs(R).max())
        objective_trace.append(penalty(Z, E))
        residual_trace.append(residual_inf)
        mu_used = mu
        mu = min(opts.mu_max, opts.rho * mu)
        if callback is not None:
            callback(
                {
                    "iteration": t,
                    "Z": Z,
                    "E": E,
                    "Y": Y,
                    "mu": mu_used,
                    "residual_inf": residual_inf,
                }
            )
        if (
            np.abs(Z - Z_prev).max() < opts.eps_tol
            and np.abs(E - E_prev).max() < opts.eps_tol
            and residual_inf < opts.eps_tol
        ):
            converged = True
            break

    return SolveReport(
        Z=Z,
        E=E,
        converged=converged,
        iterations=t,
        objective_trace=objective_trace,
        residual_trace=residual_trace,
        solver_name=solver_name,
        Z_previous=Z_prev,
        E_previous=E_prev,
    )


def solve_ladmap(
    spec: ProblemSpec,
    opts: SolverOptions | None = None,
    callback: Callable[[dict], None] | None = None,
) -> SolveReport:
    """Solve the plain problem by linearized ADM with adaptive penalty.

    Starts from ``Y = E = Z = 0`` and alternates the linearized shrinkage
    step on ``Z``, the closed-form step on ``E``, the multiplier update
    ``Y += mu (X - D Z - E)``, and ``mu = min(mu_max, rho mu)``.

    The per-iteration ``callback`` receives a dict with keys ``iteration``,
    ``Z``, ``E``, ``Y``, ``mu``, ``residual_inf``.
    """
    if spec.variant is not Variant.PLAIN:
        raise ValueError(f"solve_ladmap requires the plain variant, got {spec.variant.value}")
    if opts is None:
        opts = SolverOptions()
    lam = spec.lam

    def penalty(Z, E):
        return float(column_norms(Z).sum() + 0.5 * lam * (E * E).sum())

    return _ladmap_core(
        spec.X,
        spec.D,
        lam,
        opts,
        z_update=lambda arg, mu_eta: prox_l21_columns(arg, 1.0 / mu_eta),
        penalty=penalty,
        solver_name="ladmap",
        callback=callback,
    )


def solve_weighted_ladmap(
    spec: ProblemSpec,
    opts: SolverOptions | None = None,
    callback: Callable[[dict], None] | None = None,
) -> SolveReport:
    """Solve the error-reweighted variant by lagged-weight LADMAP rounds.

    Round 1 runs with unit weights (identical to :func:`solve_ladmap`);
    each later round fixes ``w_i = max(||Z_i||_2, weight_floor)`` from the
    previous round's solution and re-solves from scratch.  The returned
    report is the final round's.  Callback payloads gain a ``round`` key.
    """
    if spec.variant is not Variant.WEIGHTED:
        raise ValueError(
            f"solve_weighted_ladmap requires the weighted variant, got {spec.variant.value}"
        )
    if opts is None:
        opts = SolverOptions()
    lam = spec.lam
    weights = np.ones(spec.n)
    report: SolveReport | None = None
    for outer in range(1, opts.weighted_outer_iters + 1):
        w = weights

        def penalty(Z, E, w=w):
            return float(column_norms(Z).sum() + 0.5 * lam * ((E * E).sum(axis=0) * w**2).sum())

        if callback is None:
            inner_callback = None
        else:

            def inner_callback(state, outer=outer):
                callback({**state, "round": outer})

        report = _ladmap_core(
            spec.X,
            spec.D,
            lam,
            opts,
            z_update=lambda arg, mu_eta: prox_l21_columns(arg, 1.0 / mu_eta),
            penalty=penalty,
            solver_name="weighted",
            col_weights=w,
            callback=inner_callback,
        )
        weights = np.maximum(column_norms(report.Z), opts.weight_floor)
    return report


def solve_sparse_ladmap(
    spec: ProblemSpec,
    opts: SolverOptions | None = None,
    callback: Callable[[dict], None] | None = None,
) -> SolveReport:
    """Solve the sparse variant by the same linearized ADM skeleton.

    The coefficient step applies the composite sparse-group shrinkage with
    thresholds ``(1/(mu eta), beta/(mu eta))`` so the whole penalty
    ``||Z||_1 + beta ||Z||_{2,1}`` is scaled uniformly by the step size.
    """
    if spec.variant is not Variant.SPARSE:
        raise ValueError(
            f"solve_sparse_ladmap requires the sparse variant, got {spec.variant.value}"
        )
    if opts is None:
        opts = SolverOptions()
    lam = spec.lam
    beta = spec.beta

    def penalty(Z, E):
        return float(np.abs(Z).sum() + beta * column_norms(Z).sum() + 0.5 * lam * (E * E).sum())

    return _ladmap_core(
        spec.X,
        spec.D,
        lam,
        opts,
        z_update=lambda arg, mu_eta: prox_sparse_group(arg, 1.0 / mu_eta, beta / mu_eta),
        penalty=penalty,
        solver_name="sparse",
        callback=callback,
    )


class _DiagShiftSolver:
    """Factor ``lam D^T D`` once; each column solve is a diagonal shift.

    Column i of the solution satisfies ``(u_i I + lam D^T D) z_i = lam D^T x_i``,
    solved through the cached eigendecomposition in O(k^2) per column.
    """

    def __init__(self, D: np.ndarray, X: np.ndarray, lam: float):
        self.eigvals, self.eigvecs = np.linalg.eigh(lam * (D.T @ D))
        self.rhs_rot = self.eigvecs.T @ (lam * (D.T @ X))

    def solve(self, u: np.ndarray) -> np.ndarray:
        shifts = self.eigvals[:, None] + u[None, :]
        if shifts.min() <= 0:
            raise SingularSystemError(
                f"shifted column system is singular (smallest shift {shifts.min():.3e})"
            )
        return self.eigvecs @ (self.rhs_rot / shifts)


def sylvester_diag_solve(D, u, X, lam: float) -> np.ndarray:
    """Solve ``Z diag(u) + lam D^T D Z = lam D^T X`` exactly, column-wise.

    Diagonal ``u`` decouples the equation into one shifted SPD system per
    column, all sharing a single k x k eigendecomposition.
    """
    d = as_matrix(D, name="D")
    x = as_matrix(X, name="X")
    uv = np.asarray(u, dtype=float).ravel()
    if uv.shape[0] != x.shape[1]:
        raise ValueError(
            f"u must have one entry per column of X ({x.shape[1]}), got {uv.shape[0]}"
        )
    if not np.all(uv > 0):
        raise ValueError("all diagonal weights must be positive")
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam}")
    return _DiagShiftSolver(d, x, lam).solve(uv)


def solve_irls(
    spec: ProblemSpec,
    opts: SolverOptions | None = None,
    callback: Callable[[dict], None] | None = None,
) -> SolveReport:
    """Solve the plain problem by iteratively reweighted least squares.

    Starts from unit weights and ``mu = irls_mu_scale * ||D||_2``; each
    iteration solves the shifted column systems, updates the weights
    ``u_i = (||Z_i||_2^2 + mu^2)^{-1/2}``, and decays ``mu`` by ``rho``
    (floored at 1e-12 so weights stay finite).  Stops when
    ``||Z_t - Z_{t+1}||_inf`` drops below ``eps_tol``.  The report's ``E``
    is ``X - D Z`` and its objective trace records the unconstrained
    objective ``||Z||_{2,1} + lam/2 ||X - D Z||_F^2``.

    The per-iteration ``callback`` receives a dict with keys ``iteration``,
    ``Z``, ``Z_prev``, ``weights_used``, ``mu`` (the weights and smoothing
    value the iteration's solve actually used).
    """
    if spec.variant is not Variant.PLAIN:
        raise ValueError(f"solve_irls requires the plain variant, got {spec.variant.value}")
    if opts is None:
        opts = SolverOptions.irls_defaults()

    X, D, lam = spec.X, spec.D, spec.lam
    mu = opts.irls_mu_scale * spectral_norm(D)
    system = _DiagShiftSolver(D, X, lam)
    u = np.ones(spec.n)
    Z = np.zeros((spec.k, spec.n))
    objective_trace: list[float] = []
    residual_trace: list[float] = []
    converged = False
    Z_prev = Z
    t = 0

    for t in range(1, opts.max_iter + 1):
        Z_next = system.solve(u)
        if not np.isfinite(Z_next).all():
            partial = SolveReport(
                Z=Z,
                E=X - D @ Z,
                converged=False,
                iterations=t - 1,
                objective_trace=objective_trace,
                residual_trace=residual_trace,
                solver_name="irls",
            )
            raise NonFiniteIterateError(
                f"irls iterate became non-finite at iteration {t}", report=partial
            )
        delta = float(np.abs(Z_next - Z).max())
        u_used, mu_used = u, mu
        u = 1.0 / np.sqrt(column_norms(Z_next) ** 2 + mu**2)
        mu = max(mu / opts.rho, _IRLS_MU_FLOOR)
        Z_prev, Z = Z, Z_next

        fit = X - D @ Z
        objective_trace.append(float(column_norms(Z).sum() + 0.5 * lam * (fit * fit).sum()))
        residual_trace.append(delta)
        if callback is not None:
            callback(
                {
                    "iteration": t,
                    "Z": Z,
                    "Z_prev": Z_prev,
                    "weights_used": u_used,
                    "mu": mu_used,
                }
            )
        if delta < opts.eps_tol:
            converged = True
            break

    return SolveReport(
        Z=Z,
        E=X - D @ Z,
        converged=converged,
        iterations=t,
        objective_trace=objective_trace,
        residual_trace=residual_trace,
        solver_name="irls",
        Z_previous=Z_prev,
        E_previous=None,
    )
