from custom_tools.exceptions import InputError


class ClassifierError(InputError):
    """Classification inputs that cannot be used: one class only, mismatched shapes, tiny batches."""
