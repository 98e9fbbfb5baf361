from custom_tools.exceptions import InputError


class SamplingError(InputError):
    pass
