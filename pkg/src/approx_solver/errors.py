"""
Errors Module
Exception types raised by the solver package
"""


class ApproxError(Exception):
    """Base class for every error raised by approx_solver"""


class PartitionError(ApproxError, ValueError):
    """Invalid block sizes"""


class DimensionError(ApproxError, ValueError):
    """Vector, matrix or partition sizes do not agree"""


class SamplingError(ApproxError, ValueError):
    """Invalid sampling parameters (e.g. tau > n)"""


class EnumerationCapError(ApproxError, ValueError):
    """Exhaustive enumeration would exceed the configured cap"""

    def __init__(self, count, cap):
        super().__init__(f"enumeration of {count} subsets exceeds the cap of {cap}")
        self.count = count
        self.cap = cap


class UnsupportedCombinationError(ApproxError, ValueError):
    """Requested stepsizes / loss / partition combination is not supported"""


class ConfigurationError(ApproxError, ValueError):
    """Invalid solver configuration"""


class ProxError(ApproxError, ValueError):
    """Invalid proximal subproblem (non-positive stiffness)"""


class LibSVMFormatError(ApproxError, ValueError):
    """Malformed LibSVM input"""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class RunLogError(ApproxError, ValueError):
    """Run log records out of order, or a malformed run log file"""
