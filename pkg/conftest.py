"""Configure Django before pytest collects the SimpleTestCase suites."""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "wkbsuite.settings")
django.setup()
