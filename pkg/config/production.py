from .base import * # Import all base settings

# --- PRODUCTION-SPECIFIC SETTINGS ---
# Used for the long acceptance runs (full MNIST, five-seed training sweeps).

DEBUG = False

WNLL_LOG_LEVEL = config('WNLL_LOG_LEVEL', default='INFO', cast=str)
WNLL_LOG_COLOR = config('WNLL_LOG_COLOR', default=False, cast=bool)

# -1 lets joblib use every core
WNLL_N_JOBS = config('WNLL_N_JOBS', default=-1, cast=int)

WNLL_DATA_DIR = config('WNLL_DATA_DIR', cast=str)
