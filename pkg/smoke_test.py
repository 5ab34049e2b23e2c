#!/usr/bin/env python
"""
Quick end-to-end check of the suite on the reduced grid in configs/smoke.env.
"""

import os
import sys
from io import StringIO
from pathlib import Path

import django

# Setup Django first
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "wkbsuite.settings")
django.setup()

from django.core.management import call_command
from django.core.management.base import CommandError

SMOKE = Path(__file__).resolve().parent / "configs" / "smoke.env"


def run(name, **options):
    out = StringIO()
    try:
        call_command(name, config=str(SMOKE), stdout=out, **options)
    except CommandError as exc:
        print(out.getvalue())
        print(f"✗ {name}: {exc}")
        sys.exit(getattr(exc, "returncode", 1))
    return out.getvalue()


def smoke():
    """Validate the solvers, then sweep the reduced eps range."""
    print("Testing the WKB suite...")

    output = run("validate")
    print(f"✓ validate: {output.count('pass ')} checks passed")

    output = run("norms", field="a0")
    print("✓ norms of a0 computed")

    output = run("sweep", formats=["csv", "json"])
    print(output)
    print("✓ sweep: every check passed")

    print("\n🎉 Smoke test passed.")


if __name__ == "__main__":
    smoke()
