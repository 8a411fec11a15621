"""Branch search, exhaustive parallel driver and back-and-forth local search."""

from .branch import SearchConfig, SearchOutcome, SearchStats, branch_search, extremal_rows
from .beam import beam_search
from .pairs import CompatiblePairs, compatible_pairs, extend

__all__ = [
    "CompatiblePairs",
    "SearchConfig",
    "SearchOutcome",
    "SearchStats",
    "beam_search",
    "branch_search",
    "compatible_pairs",
    "extend",
    "extremal_rows",
]
