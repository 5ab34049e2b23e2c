"""
Django settings for the wkbsuite project.

The project has no web surface: Django provides the settings layer, the
management-command CLI, form validation of experiment files and the test
runner. Every simulation tunable is read through python-decouple so it can
be overridden from the environment or a ``.env`` file.
"""

import math
from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config(
    "SECRET_KEY",
    default="django-insecure-wkbsuite-local-only-2c1f0b7e9d4a",
)

DEBUG = config("DEBUG", default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Local apps
    "semiclassical",
]

# Reports are files; nothing is persisted in a database.
DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/5.0/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True


# Simulation defaults

WKB_DEFAULT_ELL = config("WKB_DEFAULT_ELL", default=2.0, cast=float)
WKB_DEFAULT_W0 = config("WKB_DEFAULT_W0", default=0.25, cast=float)
WKB_DEFAULT_DT = config("WKB_DEFAULT_DT", default=1e-3, cast=float)
WKB_DEFAULT_LENGTH = config("WKB_DEFAULT_LENGTH", default=2 * math.pi, cast=float)
WKB_DEFAULT_PRESET = config("WKB_DEFAULT_PRESET", default="analytic-bump")
WKB_DEFAULT_EPSILONS = (0.2, 0.1, 0.05, 0.025, 0.0125)

# select_M_T: M = safety * max(C(ell), smallest admissible M), C(ell) = kappa * 2**ell
WKB_SAFETY_FACTOR = config("WKB_SAFETY_FACTOR", default=2.0, cast=float)
WKB_TAME_CONSTANT = config("WKB_TAME_CONSTANT", default=2e-4, cast=float)

# NLS time step never exceeds c * epsilon
WKB_DT_EPSILON_FACTOR = config("WKB_DT_EPSILON_FACTOR", default=0.02, cast=float)
WKB_TAIL_MASS_THRESHOLD = config("WKB_TAIL_MASS_THRESHOLD", default=1e-8, cast=float)
WKB_GROWTH_LIMIT = config("WKB_GROWTH_LIMIT", default=10.0, cast=float)
WKB_DIVERGENCE_PATIENCE = config("WKB_DIVERGENCE_PATIENCE", default=3, cast=int)

# phase/amplitude coefficients below this fraction of the largest one are zeroed
WKB_SPECTRAL_FLOOR = config("WKB_SPECTRAL_FLOOR", default=1e-14, cast=float)

WKB_OUTPUT_DIR = config("WKB_OUTPUT_DIR", default=str(BASE_DIR / "reports"))
WKB_SWEEP_WORKERS = config("WKB_SWEEP_WORKERS", default=1, cast=int)
WKB_RANDOM_SEED = config("WKB_RANDOM_SEED", default=20240917, cast=int)


# Logging
LOG_LEVEL = config("LOG_LEVEL", default="INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "level": LOG_LEVEL,
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
        "file": {
            "level": "INFO",
            "class": "logging.FileHandler",
            "filename": BASE_DIR / "wkbsuite.log",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "django": {
            "handlers": ["file"],
            "level": "INFO",
            "propagate": True,
        },
        "semiclassical": {
            "handlers": ["console", "file"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}
