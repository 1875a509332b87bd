#!/usr/bin/env python3
"""Run the acceptance suite with the per-criterion PASS lines visible."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    sys.exit(
        subprocess.call(
            [sys.executable, "-m", "pytest", "tests/test_acceptance.py", "-s", "-q"],
            cwd=str(ROOT),
        )
    )
