"""
Linear system of the weighted nonlocal Laplacian over the unlabeled points.

For unlabeled x (S = w + w^T, T = template):

    A[x, x] = sum_y S(x, y) + mu * sum_{y in T} w(y, x)
    A[x, y] = -S(x, y)                                   y unlabeled
    B[x]    = sum_{y in T} (S(x, y) + mu * w(y, x)) g(y)

mu = 0 gives the harmonic-extension system.
"""
import numpy as np
from scipy import sparse

from apps.graphs.weights import symmetrized_matrix
from custom_tools.logger import custom_logger, record_event

from .connectivity import check_connectivity
from .exceptions import UncoveredComponentError
from .problems import InterpolationProblem, LinearSystem


def assemble_system(problem: InterpolationProblem, uncovered: str = "error") -> LinearSystem:
    """
    Build (A, B) for `problem`.

    Points in components without a template point make A singular; they raise
    UncoveredComponentError unless `uncovered="uniform"`, in which case they
    are left out of the system and reported in `uniform_ids`.
    """
    weights = problem.weights
    n = problem.n
    template = problem.template_ids

    report = check_connectivity(weights, template)
    uniform_ids = np.empty(0, dtype=np.int64)
    if report.uncovered:
        if uncovered != "uniform":
            raise UncoveredComponentError(report.uncovered)
        uniform_ids = np.sort(np.concatenate(report.uncovered))
        custom_logger(f"{uniform_ids.size} points in uncovered components get uniform scores", "WARNING")
        record_event("uncovered_uniform", points=int(uniform_ids.size), components=len(report.uncovered))

    free = np.ones(n, dtype=bool)
    free[template] = False
    free[uniform_ids] = False
    unlabeled = np.flatnonzero(free)

    if unlabeled.size == 0:
        return LinearSystem(
            matrix=sparse.csr_matrix((0, 0)),
            rhs=np.zeros((0, problem.n_classes)),
            unlabeled_ids=unlabeled,
            uniform_ids=uniform_ids,
        )

    symmetric = symmetrized_matrix(weights)
    degree = np.asarray(symmetric.sum(axis=1)).ravel()
    inflow = np.asarray(weights[template].sum(axis=0)).ravel()

    diagonal = degree[unlabeled] + problem.mu * inflow[unlabeled]
    matrix = (sparse.diags(diagonal) - symmetric[unlabeled][:, unlabeled]).tocsr()
    matrix.sort_indices()

    coupling = symmetric[unlabeled][:, template] + problem.mu * weights[template][:, unlabeled].T
    rhs = np.asarray(coupling @ problem.template_labels)

    return LinearSystem(matrix=matrix, rhs=rhs, unlabeled_ids=unlabeled, uniform_ids=uniform_ids)
