"""Exact free-probability cumulant calculus.

Noncrossing partitions, free cumulant transforms, a brute-force moment
oracle, and closed formulas for cumulants of quadratic forms (the free
sample variance in particular), all in exact rational arithmetic.
"""

from .errors import SizeLimitError, TruncationError
from .kernels import BACKEND
from .partitions import Partition
from .series import CumulantSeq, MomentSeq

__version__ = "0.1.0"

__all__ = ["BACKEND", "CumulantSeq", "MomentSeq", "Partition", "SizeLimitError", "TruncationError", "__version__"]
