"""
Django settings for the toric-kring project.

The project has no database and no web surface; Django supplies the
settings layer, logging configuration, the management-command CLI and
the test runner.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.1/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Only used by Django internals; nothing here is signed.
SECRET_KEY = os.environ.get("DJANGO_SECRET_KEY", "toric-kring-local-only-key")

DEBUG = os.environ.get("DJANGO_DEBUG", "") == "1"

ALLOWED_HOSTS: list[str] = []


# Application definition

INSTALLED_APPS = [
    "core.apps.CoreConfig",
]

# No models, so no database. SimpleTestCase never opens a connection.
DATABASES: dict[str, dict] = {}


# Logging
# https://docs.djangoproject.com/en/5.1/topics/logging/
# stdout carries result documents, so everything logs to stderr.

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "core": {
            "handlers": ["console"],
            "level": os.environ.get("DJANGO_LOG_LEVEL", "WARNING"),
            "propagate": False,
        },
    },
}


# Internationalization
# https://docs.djangoproject.com/en/5.1/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True


# Toric K-ring configuration, read through core.conf.kring_setting

TORIC_KRING = {
    "TOOL_VERSION": "0.1.0",
    "FIXTURE_DIR": BASE_DIR / "core" / "fixtures",
    # Cap on the exponent box of the fallback extension solver (basis module)
    "SOLVER_MAX_RADIUS": 8,
    "OUTPUT_INDENT": 2,
}
