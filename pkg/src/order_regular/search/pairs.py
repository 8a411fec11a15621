"""Compatible row pairs of a search prefix, stored as dense bitsets.

For a prefix ``A`` with ``d`` rows, a pair ``(r, q)`` is compatible when placing
``r`` and ``q`` as rows ``j`` and ``j + 1`` (``j >= d``) leaves every window
``(A_i, A_{i+1})``, ``i < d``, with a witness column. ``P[r]`` is an int whose
bit ``q`` is set iff ``(r, q)`` is compatible; rows with no partner are
dropped, so the keys of ``P`` form ``R_A``.

Window ``(a, b)`` gives the primary test ``exists k in a^b: r_k = q_k = b_k``
and the secondary test ``exists k in a^b: r_k = q_k = a_k``. Both reduce to
"``q`` agrees with a fixed row ``t`` on some column of ``S = (a^b) & ~(r^t)``",
which is a union of precomputed column masks cached by ``(S, t & S)``.

Which windows carry the secondary test depends on the kind:

* ``or*``: none. One table.
* ``sor*``: every window ``i`` for positions ``j >= i + 2``. One table; the
  secondary test of window ``d - 1`` is folded in one step late, so the table
  is exact for position ``d``.
* ``psor*``: windows ``i > 1`` for positions ``j`` with ``j - i`` even. Two
  tables, indexed by the parity of ``j``.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence

from ..matrix import BinaryMatrix
from ..regularity import RegularityKind

MAX_DENSE_COLS = 16


class PairFilter:
    """Per-width tables turning one window into a bitset filter."""

    _cache: dict[int, "PairFilter"] = {}

    def __init__(self, n: int):
        if not 1 <= n <= MAX_DENSE_COLS:
            raise ValueError(f"dense pair tables support 1..{MAX_DENSE_COLS} columns, got {n}")
        self.n = n
        self.full = (1 << n) - 1
        size = 1 << n
        self.all_rows = (1 << size) - 1
        # agree[p][b]: rows q with bit p equal to b
        self.agree = []
        for p in range(n):
            ones = 0
            for q in range(size):
                if q >> p & 1:
                    ones |= 1 << q
            self.agree.append((self.all_rows ^ ones, ones))
        self._union: dict[int, int] = {}

    @classmethod
    def for_width(cls, n: int) -> "PairFilter":
        pf = cls._cache.get(n)
        if pf is None:
            pf = cls._cache[n] = cls(n)
        return pf

    def union(self, s: int, t: int) -> int:
        """Rows ``q`` agreeing with ``t`` on at least one column of ``s``."""
        key = (s << self.n) | (t & s)
        hit = self._union.get(key)
        if hit is None:
            hit = 0
            agree = self.agree
            rest = s
            while rest:
                low = rest & -rest
                p = low.bit_length() - 1
                hit |= agree[p][t >> p & 1]
                rest ^= low
            self._union[key] = hit
        return hit

    def filter(self, table: dict[int, int], tests: Sequence[tuple[int, int]]) -> dict[int, int]:
        """Keep pairs passing every ``(diff, t)`` window test."""
        full = self.full
        union = self.union
        out = {}
        if len(tests) == 1:
            (d1, t1), = tests
            for r, qm in table.items():
                s = d1 & ~(r ^ t1) & full
                if s:
                    qm &= union(s, t1)
                    if qm:
                        out[r] = qm
            return out
        for r, qm in table.items():
            for d, t in tests:
                s = d & ~(r ^ t) & full
                if not s:
                    qm = 0
                    break
                qm &= union(s, t)
                if not qm:
                    break
            if qm:
                out[r] = qm
        return out

    def full_table(self) -> dict[int, int]:
        return {r: self.all_rows for r in range(1 << self.n)}


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _n_tables(kind: RegularityKind) -> int:
    return 2 if kind.base is RegularityKind.PSOR else 1


class CompatiblePairs:
    """``P_A`` for a prefix with ``depth`` rows, for a starred kind."""

    __slots__ = ("n", "kind", "depth", "tables")

    def __init__(self, n: int, kind: RegularityKind, depth: int, tables: tuple[dict[int, int], ...]):
        self.n = n
        self.kind = kind
        self.depth = depth
        self.tables = tables

    def table_for(self, position: int) -> dict[int, int]:
        """Pair table for pairs placed at rows ``(position, position + 1)``."""
        if len(self.tables) == 1:
            return self.tables[0]
        return self.tables[position % 2]

    @property
    def current(self) -> dict[int, int]:
        return self.table_for(self.depth)

    def r_index(self) -> frozenset[int]:
        """``R_A``: rows that can still appear as the first row of a pair."""
        return frozenset(self.current)

    def q_index(self, r: int) -> frozenset[int]:
        """``Q_A(r)``."""
        return frozenset(iter_bits(self.current.get(r, 0)))

    def q_mask(self, r: int) -> int:
        return self.current.get(r, 0)

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((r, q) for r, qm in self.current.items() for q in iter_bits(qm))

    def size(self) -> int:
        return sum(bin(qm).count("1") for qm in self.current.values())

    def future_rows_bound(self) -> int:
        """Distinct rows available to every position from ``depth`` on."""
        if len(self.tables) == 1:
            return len(self.tables[0])
        return len(self.tables[0].keys() | self.tables[1].keys())


def extend_tables(
    pf: PairFilter,
    kind: RegularityKind,
    tables: tuple[dict[int, int], ...],
    rows: Sequence[int],
    q: int,
) -> tuple[dict[int, int], ...]:
    """Tables after appending ``q`` to a prefix whose rows are ``rows`` (``len >= 1``)."""
    d = len(rows)
    a = rows[-1]
    diff = a ^ q
    base = kind.base
    if base is RegularityKind.OR:
        return (pf.filter(tables[0], ((diff, q),)),)
    if base is RegularityKind.SOR:
        if d >= 2:
            prev = rows[-2]
            return (pf.filter(tables[0], ((diff, q), (prev ^ a, prev))),)
        return (pf.filter(tables[0], ((diff, q),)),)
    # psor: new window index is d; its secondary test applies to positions of the same parity
    primary = (diff, q)
    secondary = (diff, a)
    out = []
    for c, table in enumerate(tables):
        if d > 1 and c == d % 2:
            out.append(pf.filter(table, (primary, secondary)))
        else:
            out.append(pf.filter(table, (primary,)))
    return tuple(out)


def initial_tables(pf: PairFilter, kind: RegularityKind) -> tuple[dict[int, int], ...]:
    full = pf.full_table()
    if _n_tables(kind) == 1:
        return (full,)
    return (full, dict(full))


def compatible_pairs(a: BinaryMatrix, kind: RegularityKind = RegularityKind.ORSTAR) -> CompatiblePairs:
    """Compute ``P_A`` by folding every window of ``a`` into the full pair set."""
    if a.n_rows < 1:
        raise ValueError("compatible pairs need at least one row")
    kind = kind.star
    pf = PairFilter.for_width(a.n_cols)
    tables = initial_tables(pf, kind)
    rows = list(a.rows)
    for d in range(1, len(rows)):
        tables = extend_tables(pf, kind, tables, rows[:d], rows[d])
    return CompatiblePairs(a.n_cols, kind, len(rows), tables)


def extend(pairs: CompatiblePairs, a: BinaryMatrix, q: int) -> tuple[BinaryMatrix, CompatiblePairs]:
    """Append ``q`` to ``a`` and filter its pairs; ``q`` must lie in ``Q_A(last row)``."""
    if a.n_rows != pairs.depth:
        raise ValueError("pairs do not belong to this matrix")
    if not pairs.q_mask(a.rows[-1]) >> q & 1:
        raise ValueError(f"row {q:0{a.n_cols}b} is not a compatible extension")
    pf = PairFilter.for_width(a.n_cols)
    tables = extend_tables(pf, pairs.kind, pairs.tables, a.rows, q)
    return a.append_row(q), CompatiblePairs(a.n_cols, pairs.kind, pairs.depth + 1, tables)
