from .base import * # Import all base settings
from decouple import config

# --- DEVELOPMENT-SPECIFIC SETTINGS ---

DEBUG = config('DEBUG', default=True, cast=bool)

WNLL_LOG_LEVEL = config('WNLL_LOG_LEVEL', default='DEBUG', cast=str)

# Keep runs single-threaded so reports are reproducible on any laptop
WNLL_N_JOBS = config('WNLL_N_JOBS', default=1, cast=int)
