"""
APPROX Solver - Entry Point
Run this script to solve, generate instances, compare stepsizes or plot runs.
"""

import sys
import os

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from approx_solver.app import main  # noqa: E402


if __name__ == "__main__":
    sys.exit(main())
