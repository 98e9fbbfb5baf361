from custom_tools.exceptions import InputError


class RunConfigError(InputError):
    """Unreadable config file, unknown key, or conflicting flags."""
