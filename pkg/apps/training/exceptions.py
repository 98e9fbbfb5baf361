from custom_tools.exceptions import NumericalError


class StageError(NumericalError):
    """A WNLL-stage epoch in which every mini-batch had to be skipped."""
