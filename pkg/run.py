#!/usr/bin/env python3
"""
embednum - Entry Point

Run this file with a subcommand:
    python run.py table figure1
    python run.py brieskorn 2 3 7 --d-zero --trace

Or run the module directly:
    python -m embednum.main lens 12 11
"""

import sys
from pathlib import Path

# Add the project root to the path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from embednum.main import run_cli

if __name__ == "__main__":
    run_cli()
