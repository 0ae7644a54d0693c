"""
APPROX Solver
Accelerated, parallel and proximal coordinate descent for sparse composite problems.
"""

__version__ = "0.1.0"
__license__ = "MIT"
