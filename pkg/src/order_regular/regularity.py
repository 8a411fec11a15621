"""Order-Regularity verifiers and constraint-space bookkeeping.

A constraint ``(i, j)`` with ``1 <= i < j <= m`` is *primarily* witnessed by
column ``k`` when rows ``i, i+1, j, j+1`` read ``x, !x, !x, !x`` there, and
*secondarily* witnessed when they read ``x, !x, x, x``. Row ``m + 1`` is a
virtual copy of row ``m``.

With ``d = A_i ^ A_{i+1}``, ``x = A_{i+1} ^ A_j`` and ``f = ~(A_j ^ A_{j+1})``
the witness sets are ``d & ~x & f`` and ``d & x & f``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional

from .matrix import BinaryMatrix


class RegularityKind(enum.Enum):
    OR = "or"
    ORSTAR = "or*"
    SOR = "sor"
    SORSTAR = "sor*"
    PSOR = "psor"
    PSORSTAR = "psor*"

    @classmethod
    def parse(cls, text: str) -> "RegularityKind":
        key = text.strip().lower().replace("star", "*")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown regularity kind {text!r}")

    @property
    def starred(self) -> bool:
        return self.value.endswith("*")

    @property
    def base(self) -> "RegularityKind":
        return RegularityKind(self.value.rstrip("*"))

    @property
    def star(self) -> "RegularityKind":
        return RegularityKind(self.base.value + "*")

    def doubly_required(self, i: int, j: int, m: int) -> bool:
        """Whether constraint ``(i, j)`` needs a secondary witness too."""
        base = self.base
        if base is RegularityKind.SOR:
            return i + 1 < j
        if base is RegularityKind.PSOR:
            return 1 < i and j < m and (j - i) % 2 == 0
        return False

    def __str__(self) -> str:
        return self.value


PRIMARY = "primary"
SECONDARY = "secondary"


@dataclass(frozen=True)
class Constraint:
    i: int
    j: int

    def __post_init__(self) -> None:
        if not 1 <= self.i < self.j:
            raise ValueError(f"invalid constraint ({self.i}, {self.j})")


@dataclass(frozen=True)
class Verdict:
    holds: bool
    constraint: Optional[tuple[int, int]] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.holds

    def __str__(self) -> str:
        if self.holds:
            return "HOLDS"
        i, j = self.constraint
        return f"VIOLATED ({i},{j})"


HOLDS = Verdict(True)


def _window_rows(m: BinaryMatrix, c: Constraint) -> tuple[int, int, int, int]:
    rows = m.rows
    size = len(rows)
    if c.j > size:
        raise ValueError(f"constraint ({c.i},{c.j}) out of range for {size} rows")
    a_j1 = rows[c.j] if c.j < size else rows[c.j - 1]
    return rows[c.i - 1], rows[c.i], rows[c.j - 1], a_j1


def witness_masks(m: BinaryMatrix, c: Constraint) -> tuple[int, int]:
    """Bitmasks of primary and secondary witness columns for ``c``."""
    a_i, a_i1, a_j, a_j1 = _window_rows(m, c)
    full = m.full_mask
    d = a_i ^ a_i1
    x = a_i1 ^ a_j
    f = ~(a_j ^ a_j1) & full
    return d & ~x & f, d & x & f


def mask_to_columns(mask: int, n_cols: int) -> frozenset[int]:
    return frozenset(k for k in range(1, n_cols + 1) if mask >> (n_cols - k) & 1)


def constraint_satisfied(m: BinaryMatrix, c: Constraint, kind: str = PRIMARY) -> frozenset[int]:
    """Columns (1-based) witnessing constraint ``c`` in the given sense."""
    prim, sec = witness_masks(m, c)
    if kind == PRIMARY:
        return mask_to_columns(prim, m.n_cols)
    if kind == SECONDARY:
        return mask_to_columns(sec, m.n_cols)
    raise ValueError(f"witness kind must be {PRIMARY!r} or {SECONDARY!r}")


def check(m: BinaryMatrix, kind: RegularityKind = RegularityKind.OR) -> Verdict:
    """Verify ``m`` against ``kind``.

    Constraints are scanned with ``j`` outer and ``i`` inner; the first one
    lacking a required witness is reported. Starred kinds skip every
    constraint with ``j = m``.
    """
    rows = m.rows
    size = len(rows)
    if size == 0:
        raise ValueError("cannot check an empty matrix")
    full = m.full_mask
    last_j = size - 1 if kind.starred else size
    base = kind.base
    need_sec = base is not RegularityKind.OR
    diffs = [rows[i] ^ rows[i + 1] for i in range(size - 1)]
    for j in range(2, last_j + 1):
        a_j = rows[j - 1]
        a_j1 = rows[j] if j < size else a_j
        f = ~(a_j ^ a_j1) & full
        if not f:
            return Verdict(False, (1, j), "rows j and j+1 are complementary")
        for i in range(1, j):
            d = diffs[i - 1] & f
            x = rows[i] ^ a_j
            if not d & ~x:
                reason = "last two rows equal" if j == size and i == size - 1 else "no primary witness"
                return Verdict(False, (i, j), reason)
            if need_sec and not d & x and kind.doubly_required(i, j, size):
                return Verdict(False, (i, j), "no secondary witness")
    return HOLDS


def is_regular(m: BinaryMatrix, kind: RegularityKind = RegularityKind.OR) -> bool:
    return check(m, kind).holds


def reference_check(m: BinaryMatrix, kind: RegularityKind = RegularityKind.OR) -> bool:
    """Entry-by-entry verifier over ``i``, ``j`` and ``k``.

    Deliberately naive; used as an independent oracle for :func:`check`.
    """
    size = m.n_rows
    if size == 0:
        raise ValueError("cannot check an empty matrix")
    grid = m.to_lists()
    grid.append(list(grid[-1]))
    n = m.n_cols
    last_j = size - 1 if kind.starred else size
    for j in range(2, last_j + 1):
        for i in range(1, j):
            a, b, c, e = grid[i - 1], grid[i], grid[j - 1], grid[j]
            if not any(a[k] != b[k] and b[k] == c[k] and c[k] == e[k] for k in range(n)):
                return False
            if kind.base is not RegularityKind.OR and kind.doubly_required(i, j, size):
                if not any(a[k] != b[k] and b[k] != c[k] and c[k] == e[k] for k in range(n)):
                    return False
    if not kind.starred and size >= 2 and grid[size - 2] == grid[size - 1]:
        return False
    return True


class ConstraintMap:
    """Primary and secondary witness masks for every constraint of a matrix."""

    def __init__(self, m: BinaryMatrix):
        if m.n_rows < 2:
            raise ValueError("constraint map needs at least two rows")
        self.matrix = m
        self.n_rows = m.n_rows
        self.n_cols = m.n_cols
        rows = m.rows
        size = len(rows)
        full = m.full_mask
        diffs = [rows[i] ^ rows[i + 1] for i in range(size - 1)]
        # _prim[j-2][i-1], i < j
        self._prim: list[list[int]] = []
        self._sec: list[list[int]] = []
        for j in range(2, size + 1):
            a_j = rows[j - 1]
            a_j1 = rows[j] if j < size else a_j
            f = ~(a_j ^ a_j1) & full
            prow, srow = [], []
            for i in range(1, j):
                d = diffs[i - 1] & f
                x = rows[i] ^ a_j
                prow.append(d & ~x)
                srow.append(d & x)
            self._prim.append(prow)
            self._sec.append(srow)

    def _cell(self, table: list[list[int]], i: int, j: int) -> int:
        if not 1 <= i < j <= self.n_rows:
            raise ValueError(f"constraint ({i},{j}) out of range")
        return table[j - 2][i - 1]

    def primary_mask(self, i: int, j: int) -> int:
        return self._cell(self._prim, i, j)

    def secondary_mask(self, i: int, j: int) -> int:
        return self._cell(self._sec, i, j)

    def primary(self, i: int, j: int) -> frozenset[int]:
        return mask_to_columns(self.primary_mask(i, j), self.n_cols)

    def secondary(self, i: int, j: int) -> frozenset[int]:
        return mask_to_columns(self.secondary_mask(i, j), self.n_cols)

    def constraints(self) -> Iterator[tuple[int, int]]:
        for j in range(2, self.n_rows + 1):
            for i in range(1, j):
                yield i, j

    def check(self, kind: RegularityKind = RegularityKind.OR) -> Verdict:
        """Same verdict as :func:`check`, folded over the stored masks."""
        size = self.n_rows
        last_j = size - 1 if kind.starred else size
        for j in range(2, last_j + 1):
            for i in range(1, j):
                if not self._prim[j - 2][i - 1]:
                    return Verdict(False, (i, j), "no primary witness")
                if kind.doubly_required(i, j, size) and kind.base is not RegularityKind.OR:
                    if not self._sec[j - 2][i - 1]:
                        return Verdict(False, (i, j), "no secondary witness")
        return HOLDS

    def cell_char(self, i: int, j: int, columns: int = -1) -> str:
        """``.``, ``1``, ``2`` or ``B`` for none/primary/secondary/both.

        ``columns`` restricts the witnesses to a column bitmask.
        """
        p = self.primary_mask(i, j) & columns
        s = self.secondary_mask(i, j) & columns
        if p and s:
            return "B"
        if p:
            return "1"
        if s:
            return "2"
        return "."

    def to_text(self, columns: int = -1) -> str:
        """Upper-triangle grid: line ``j`` (from 2) lists cells ``i = 1..j-1``."""
        lines = []
        for j in range(2, self.n_rows + 1):
            lines.append("".join(self.cell_char(i, j, columns) for i in range(1, j)))
        return "\n".join(lines) + "\n"

    def pixel_rows(self, columns: int = -1) -> list[list[tuple[int, int, int]]]:
        """RGB pixels, one per ``(i, j)`` with ``j`` top to bottom; cells with ``i >= j`` are white."""
        palette = {
            ".": (230, 60, 60),
            "1": (70, 110, 220),
            "2": (240, 200, 60),
            "B": (60, 170, 90),
        }
        white = (255, 255, 255)
        size = self.n_rows
        out = []
        for j in range(2, size + 1):
            line = []
            for i in range(1, size):
                line.append(palette[self.cell_char(i, j, columns)] if i < j else white)
            out.append(line)
        return out

    def to_ppm(self, columns: int = -1) -> bytes:
        pixels = self.pixel_rows(columns)
        height = len(pixels)
        width = len(pixels[0]) if pixels else 0
        header = f"P6\n{width} {height}\n255\n".encode("ascii")
        body = bytes(c for line in pixels for px in line for c in px)
        return header + body


def constraint_map(m: BinaryMatrix) -> ConstraintMap:
    return ConstraintMap(m)


def to_star(m: BinaryMatrix) -> BinaryMatrix:
    """Append a copy of the last row (an ``m``-row OR matrix becomes ``m+1``-row OR*)."""
    if not check(m, RegularityKind.OR):
        raise ValueError("to_star expects an Order-Regular matrix")
    return m.append_row(m.rows[-1])


def from_star(m: BinaryMatrix) -> BinaryMatrix:
    """Drop the last row of an OR* matrix."""
    if m.n_rows < 2 or not check(m, RegularityKind.ORSTAR):
        raise ValueError("from_star expects an OR* matrix with at least two rows")
    return m.head(m.n_rows - 1)


def or_star_bijection(m: BinaryMatrix, direction: str) -> BinaryMatrix:
    if direction == "to_star":
        return to_star(m)
    if direction == "from_star":
        return from_star(m)
    raise ValueError("direction must be 'to_star' or 'from_star'")


def max_rows_bound(n_cols: int) -> int:
    """Largest row count an ``n``-column OR matrix can have under the relaxed condition."""
    return 2 ** (n_cols - 1) + 1
