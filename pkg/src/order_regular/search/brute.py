"""Exhaustive enumeration of tiny matrices, used as an oracle for the search."""

from __future__ import annotations

import itertools

from ..matrix import BinaryMatrix
from ..regularity import RegularityKind, reference_check

MAX_BRUTE_COLS = 3
MAX_BRUTE_ROWS = 6


def brute_force_extremal(n: int, m_cap: int = MAX_BRUTE_ROWS, kind: RegularityKind = RegularityKind.OR) -> int:
    """Largest ``m <= m_cap`` such that some ``m x n`` matrix passes the naive verifier."""
    if not 1 <= n <= MAX_BRUTE_COLS:
        raise ValueError(f"brute force supports 1..{MAX_BRUTE_COLS} columns")
    if not 1 <= m_cap <= MAX_BRUTE_ROWS:
        raise ValueError(f"brute force supports at most {MAX_BRUTE_ROWS} rows")
    best = 0
    for m in range(1, m_cap + 1):
        if any(reference_check(BinaryMatrix(n, rows), kind) for rows in itertools.product(range(1 << n), repeat=m)):
            best = m
    return best
