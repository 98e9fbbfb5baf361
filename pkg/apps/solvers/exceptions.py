from custom_tools.exceptions import InputError, NumericalError


class InterpolationProblemError(InputError):
    """Malformed template ids, labels or mu."""


class UncoveredComponentError(InputError):
    """
    A connected component of the symmetrised graph holds no template point.
    `components` lists the point indices of each uncovered component.
    """

    def __init__(self, components):
        self.components = [list(map(int, c)) for c in components]
        preview = ", ".join(str(c[:10]) + ("..." if len(c) > 10 else "") for c in self.components[:3])
        super().__init__(
            f"{len(self.components)} graph component(s) contain no template point: {preview}"
        )


class NonConvergenceError(NumericalError):
    """CG stopped at max_iter; `residual` is the worst relative residual reached."""

    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"conjugate gradient did not converge in {iterations} iterations (relative residual {residual:.3e})")
