"""
Django settings for the tropfan project.

Only the pieces a command-line computation needs are configured: the ``fans``
application, Django REST framework (serializers and the JSON renderer), a local
sqlite database for the optional run history, and logging.

Values that differ between machines are read from the environment, optionally
through a ``.env`` file at the project root (see ``.env.example``).
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / '.env')


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv('DJANGO_SECRET_KEY', 'django-insecure-tropfan-local-only')

DEBUG = os.getenv('DJANGO_DEBUG', 'false').lower() in ('1', 'true', 'yes')

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'fans',
]


# Database
# https://docs.djangoproject.com/en/4.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# REST Framework settings
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': (
        'rest_framework.renderers.JSONRenderer',
    ),
    'UNAUTHENTICATED_USER': None,
}


# Tropical fan computations
TROPFAN_THREADS = max(1, int(os.getenv('TROPFAN_THREADS', '1')))
TROPFAN_MAX_RAYS_ORACLE = int(os.getenv('TROPFAN_MAX_RAYS_ORACLE', '12'))
TROPFAN_AMPLE_SEARCH_BUDGET = int(os.getenv('TROPFAN_AMPLE_SEARCH_BUDGET', '729'))
TROPFAN_FIXTURE_DIR = Path(os.getenv('TROPFAN_FIXTURE_DIR', BASE_DIR / 'fixtures'))


# Logging
# Reports are written to stdout, so every handler here points at stderr.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'fans': {
            'handlers': ['console'],
            'level': os.getenv('TROPFAN_LOG_LEVEL', 'WARNING').upper(),
            'propagate': False,
        },
    },
}
