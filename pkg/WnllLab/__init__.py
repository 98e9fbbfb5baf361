# Version string written next to every run's outputs.
__version__ = '0.3.0'

VERSION_STRING = f'wnll-lab {__version__}'

__all__ = ('__version__', 'VERSION_STRING')
