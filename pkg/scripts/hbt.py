#!/usr/bin/env python3
"""
HBT bench command line.

Usage:
    python scripts/hbt.py simulate --config config/config.example.yaml --out results/
    python scripts/hbt.py reproduce fig2 --seed 7 --out results/fig2
    python scripts/hbt.py --help
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli import run_cli  # noqa: E402

if __name__ == "__main__":
    sys.exit(run_cli(sys.argv[1:]))
