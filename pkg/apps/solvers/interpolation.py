import numpy as np

from .assembly import assemble_system
from .cg import solve_cg
from .problems import HarmonicSolution, InterpolationProblem


def wnll_interpolate(problem: InterpolationProblem, tol: float = None, max_iter: int = None,
                     uncovered: str = "error") -> HarmonicSolution:
    """
    Solve the weighted nonlocal Laplacian system and scatter the result.

    Template rows are copied from g verbatim; points in uncovered components
    (only with uncovered="uniform") get 1/C in every column. Solved values
    are clipped per column to the range of g, which the exact solution
    never leaves.
    """
    system = assemble_system(problem, uncovered=uncovered)
    values, stats = solve_cg(system, tol=tol, max_iter=max_iter)
    labels = np.asarray(problem.template_labels, dtype=np.float64)
    values = np.clip(values, labels.min(axis=0), labels.max(axis=0))

    scores = np.empty((problem.n, problem.n_classes))
    scores[system.unlabeled_ids] = values
    scores[system.uniform_ids] = 1.0 / problem.n_classes
    scores[problem.template_ids] = problem.template_labels
    return HarmonicSolution(scores=scores, stats=stats, mu=problem.mu)


def harmonic_extend(graph, template_ids, template_labels, tol: float = None, max_iter: int = None,
                    uncovered: str = "error") -> HarmonicSolution:
    """Graph harmonic extension: the WNLL system with mu = 0."""
    problem = InterpolationProblem(graph=graph, template_ids=template_ids, template_labels=template_labels, mu=0.0)
    return wnll_interpolate(problem, tol=tol, max_iter=max_iter, uncovered=uncovered)


def predict_labels(solution) -> np.ndarray:
    """Row-wise argmax; ties go to the lowest class index."""
    scores = getattr(solution, "scores", solution)
    if scores.shape[1] < 2:
        raise ValueError("predict_labels needs at least two classes")
    return np.argmax(scores, axis=1)
