"""Root exceptions shared by every app. `exit_code` is what the CLI returns."""


class WnllLabError(Exception):
    exit_code = 2


class InputError(WnllLabError, ValueError):
    """Bad files, bad arguments, bad configuration."""
    exit_code = 2


class NumericalError(WnllLabError):
    """Non-convergence, divergence and other numerical failures."""
    exit_code = 3
