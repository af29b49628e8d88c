import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "kring.settings")
django.setup()
