#!/usr/bin/env python3
"""
Environment validation script for slantops
Run this script to check the SLANTOPS_* settings before long experiments
"""

import os
import sys

from slantops.config import Settings

# Variables with their built-in defaults
KNOWN_VARS = {
    "SLANTOPS_WORKERS": "1",
    "SLANTOPS_LOG_LEVEL": "INFO",
    "SLANTOPS_DEFAULT_ALPHA": "1.0",
    "SLANTOPS_DEFAULT_K": "2",
    "SLANTOPS_DEFAULT_DIM": "15",
    "SLANTOPS_CONVENTION": "monomial",
    "SLANTOPS_ZERO_TOL": "1e-10",
    "SLANTOPS_EIG_MAX_DIM": "2048",
    "SLANTOPS_PSEUDO_MAX_DIM": "512",
    "SLANTOPS_GRID": "-1.25,1.25,-1.25,1.25,101",
    "SLANTOPS_BENCH_REPS": "3",
}


def validate_environment() -> bool:
    """Print the effective settings and report every invalid value"""

    print("🔍 Validating environment variables...")
    print("=" * 50)

    for var, default in KNOWN_VARS.items():
        value = os.getenv(var)
        if value is None:
            print(f"   {var}: {default} (default)")
        else:
            print(f"✅ {var}: {value}")

    try:
        problems = Settings().validate()
    except ValueError as e:
        problems = [f"unparseable value: {e}"]

    print("\n" + "=" * 50)

    if problems:
        print("❌ Validation failed!")
        for problem in problems:
            print(f"   - {problem}")
        print("\nTo fix this:")
        print("1. Copy env.example to .env: cp env.example .env")
        print("2. Edit .env and correct the values above")
        print("3. Run this script again to validate")
        return False

    print("✅ All settings are valid!")
    print("🚀 You can now run: python -m slantops.main --help")
    return True


if __name__ == "__main__":
    sys.exit(0 if validate_environment() else 1)
