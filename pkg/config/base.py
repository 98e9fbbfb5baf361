from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
# Settings live in 'config/', so go up one more level.
BASE_DIR = Path(__file__).resolve().parent.parent

# --- CORE SETTINGS ---
# These are common across all environments

SECRET_KEY = config('SECRET_KEY', default='wnll-lab-local-key')

INSTALLED_APPS = [
    # Local Apps
    'apps.datasets',
    'apps.graphs',
    'apps.solvers',
    'apps.classifiers',
    'apps.toynet',
    'apps.training',
    'apps.sampling',
    'apps.experiments',
]

# The test runner still needs a database even though no app defines models.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
TIME_ZONE = 'UTC'
USE_TZ = True

# --- APPLICATION-SPECIFIC SETTINGS ---

# Logging
WNLL_LOG_LEVEL = config('WNLL_LOG_LEVEL', default='INFO', cast=str)
WNLL_LOG_COLOR = config('WNLL_LOG_COLOR', default=True, cast=bool)

# Parallelism (joblib n_jobs; 1 keeps everything in-process)
WNLL_N_JOBS = config('WNLL_N_JOBS', default=1, cast=int)

# Where commands write their artifacts when --out is not given
WNLL_OUTPUT_ROOT = config('WNLL_OUTPUT_ROOT', default=str(BASE_DIR / 'runs'), cast=str)
WNLL_DATA_DIR = config('WNLL_DATA_DIR', default=str(BASE_DIR / 'data'), cast=str)

# Graph construction: 15 neighbours, sigma from the 8th
WNLL_KNN_K = config('WNLL_KNN_K', default=15, cast=int)
WNLL_SIGMA_RANK = config('WNLL_SIGMA_RANK', default=8, cast=int)

# Linear solver
WNLL_CG_TOL = config('WNLL_CG_TOL', default=1e-10, cast=float)
WNLL_CG_MAX_ITER = config('WNLL_CG_MAX_ITER', default=5000, cast=int)

# Softmax-regression baseline
WNLL_SOFTMAX_EPOCHS = config('WNLL_SOFTMAX_EPOCHS', default=20, cast=int)
WNLL_SOFTMAX_LR = config('WNLL_SOFTMAX_LR', default=0.5, cast=float)
WNLL_SOFTMAX_BATCH = config('WNLL_SOFTMAX_BATCH', default=128, cast=int)

# Alternating training (desk-scale version of 400/5 epochs, halving every 50)
WNLL_TRAIN = {
    'passes': config('WNLL_PASSES', default=2, cast=int),
    'linear_epochs': config('WNLL_LINEAR_EPOCHS', default=40, cast=int),
    'wnll_epochs': config('WNLL_WNLL_EPOCHS', default=5, cast=int),
    'lr': config('WNLL_LR', default=0.05, cast=float),
    'lr_half_every': config('WNLL_LR_HALF_EVERY', default=10, cast=int),
    'wnll_lr': config('WNLL_WNLL_LR', default=0.0005, cast=float),
    'second_pass_lr_factor': config('WNLL_SECOND_PASS_LR_FACTOR', default=0.2, cast=float),
    'momentum': config('WNLL_MOMENTUM', default=0.9, cast=float),
    'weight_decay': config('WNLL_WEIGHT_DECAY', default=1e-4, cast=float),
    'batch_linear': config('WNLL_BATCH_LINEAR', default=128, cast=int),
    'batch_wnll': config('WNLL_BATCH_WNLL', default=2000, cast=int),
    'knn_k': WNLL_KNN_K,
    'sigma_rank': WNLL_SIGMA_RANK,
    'seed': config('WNLL_SEED', default=0, cast=int),
    'template_fraction': config('WNLL_TEMPLATE_FRACTION', default=0.5, cast=float),
    'proxy_scaling': config('WNLL_PROXY_SCALING', default=True, cast=bool),
    'track_wnll': config('WNLL_TRACK_WNLL', default=True, cast=bool),
    'hidden': config('WNLL_HIDDEN', default='64', cast=str),
    'buffer_width': config('WNLL_BUFFER_WIDTH', default=32, cast=int),
}

# Acceptance thresholds used by `table1` when --min-gap/--min-accuracy are not given
WNLL_TABLE1_MIN_GAP = config('WNLL_TABLE1_MIN_GAP', default=0.0, cast=float)
