"""
Django settings for the orbitreg project.

The project has no web surface: it hosts the orbits app, its management
commands and the optional sqlite archive of analysis runs.
"""

import os
from pathlib import Path

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    load_dotenv(Path(__file__).resolve().parent.parent / '.env')
except ImportError:
    pass  # python-dotenv not installed, rely on system env vars

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'django-insecure-orbitreg-local-only')

DEBUG = os.environ.get('DJANGO_DEBUG', '0') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Orbit regularity analysis
    'orbits',
]


# Database

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

# Default primary key field type

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Analysis defaults. The [options] section of an input document overrides them,
# ORBITREG_* variables override the document and command flags override both.

ORBITREG = {
    'PRECISION': 60,
    'TAU': None,
    'TIER': 'exact-then-numeric',
    'WORD_LENGTH': 20,
    'RADIUS_FACTOR': 1e6,
    'MIN_POINTS': 100,
    'TOOL_VERSION': '0.1.0',
}


# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'orbits': {
            'handlers': ['console'],
            'level': os.environ.get('ORBITREG_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
