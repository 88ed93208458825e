"""Exact enumeration of maximal parent sets under the MDL score."""

from .dataset import Dataset, DatasetError, load
from .engine import BudgetError, EngineConfig, RunResult, RunStats, run
from .oracle import brute_force

__all__ = [
    "BudgetError",
    "Dataset",
    "DatasetError",
    "EngineConfig",
    "RunResult",
    "RunStats",
    "brute_force",
    "load",
    "run",
]
