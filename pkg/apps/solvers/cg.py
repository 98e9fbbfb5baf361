"""Jacobi-preconditioned conjugate gradient for SPD systems with many right-hand sides."""
from typing import Optional, Tuple

import numpy as np
from django.conf import settings

from custom_tools.exceptions import NumericalError
from custom_tools.logger import record_event

from .exceptions import NonConvergenceError
from .problems import LinearSystem, SolverStats


def solve_cg(system: LinearSystem, tol: Optional[float] = None, max_iter: Optional[int] = None) -> Tuple[np.ndarray, SolverStats]:
    """
    Solve A X = B column by column, all columns advanced together.

    Each column stops once its relative residual |r| / |b| drops to `tol`;
    a zero right-hand side is solved by X = 0 immediately. Hitting
    `max_iter` with any column still active raises NonConvergenceError.
    """
    tol = settings.WNLL_CG_TOL if tol is None else tol
    max_iter = settings.WNLL_CG_MAX_ITER if max_iter is None else max_iter

    matrix = system.matrix
    rhs = np.asarray(system.rhs, dtype=np.float64)
    m, columns = rhs.shape
    solution = np.zeros((m, columns))
    if m == 0:
        return solution, SolverStats(iterations=0, residual=0.0, columns=columns)

    diagonal = matrix.diagonal()
    if not np.all(diagonal > 0):
        raise NumericalError("system matrix has a non-positive diagonal entry")
    inverse_diagonal = 1.0 / diagonal

    rhs_norm = np.linalg.norm(rhs, axis=0)
    residual = rhs.copy()
    preconditioned = inverse_diagonal[:, None] * residual
    direction = preconditioned.copy()
    rho = np.einsum("ij,ij->j", residual, preconditioned)
    relative = np.where(rhs_norm > 0, 1.0, 0.0)
    active = relative > tol

    iterations = 0
    while active.any() and iterations < max_iter:
        iterations += 1
        cols = np.flatnonzero(active)
        p = direction[:, cols]
        ap = matrix @ p
        alpha = rho[cols] / np.einsum("ij,ij->j", p, ap)
        solution[:, cols] += alpha * p
        r = residual[:, cols] - alpha * ap
        residual[:, cols] = r
        relative[cols] = np.linalg.norm(r, axis=0) / rhs_norm[cols]

        z = inverse_diagonal[:, None] * r
        rho_next = np.einsum("ij,ij->j", r, z)
        direction[:, cols] = z + (rho_next / rho[cols]) * p
        rho[cols] = rho_next
        active[cols] = relative[cols] > tol

    if active.any():
        record_event("cg_nonconvergence", iterations=iterations, residual=float(relative.max()), unknowns=m)
        raise NonConvergenceError(iterations, float(relative.max()))

    true_residual = np.linalg.norm(matrix @ solution - rhs, axis=0)
    nonzero = rhs_norm > 0
    worst = float((true_residual[nonzero] / rhs_norm[nonzero]).max()) if nonzero.any() else 0.0
    stats = SolverStats(iterations=iterations, residual=worst, columns=columns)
    record_event("cg", iterations=iterations, residual=worst, unknowns=m, columns=columns)
    return solution, stats
