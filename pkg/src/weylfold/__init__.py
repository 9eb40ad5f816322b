"""Exact combinatorics of Weyl groups, diagram folding and partial resolutions."""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import BudgetExceeded, ConsistencyError, InvalidInput, WeylfoldError

__all__ = ["__version__", "BudgetExceeded", "ConsistencyError", "InvalidInput", "WeylfoldError"]
