"""Binary matrices stored as one integer bit vector per row.

Row and column indices in the public API are 1-based. Column ``k`` of an
``n``-column matrix lives at bit ``n - k`` of the row integer, so the integer
value of a row equals its printed ``0``/``1`` string read in base 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

MAX_COLS = 64


class MatrixFormatError(ValueError):
    """Raised when matrix text cannot be parsed."""


def _full(n_cols: int) -> int:
    return (1 << n_cols) - 1


@dataclass(frozen=True)
class BinaryMatrix:
    """Immutable ``m x n`` binary matrix.

    ``rows`` holds one int per row; bits above ``n_cols`` must be zero.
    """

    n_cols: int
    rows: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not 1 <= self.n_cols <= MAX_COLS:
            raise ValueError(f"n_cols must be in 1..{MAX_COLS}, got {self.n_cols}")
        rows = tuple(int(r) for r in self.rows)
        full = _full(self.n_cols)
        for r in rows:
            if r < 0 or r & ~full:
                raise ValueError(f"row {r:#x} does not fit in {self.n_cols} columns")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "BinaryMatrix":
        lines = list(lines)
        if not lines:
            raise MatrixFormatError("no rows given; use BinaryMatrix(n_cols) for an empty matrix")
        return parse_matrix("\n".join(lines))

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]]) -> "BinaryMatrix":
        if not data:
            raise ValueError("cannot infer column count from an empty list")
        n = len(data[0])
        rows = []
        for line in data:
            if len(line) != n:
                raise ValueError("ragged rows")
            value = 0
            for bit in line:
                value = (value << 1) | (1 if bit else 0)
            rows.append(value)
        return cls(n, tuple(rows))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.n_cols)

    @property
    def full_mask(self) -> int:
        return _full(self.n_cols)

    def __len__(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> int:
        """Row ``i`` (1-based) as an int."""
        if not 1 <= i <= len(self.rows):
            raise IndexError(f"row {i} out of range 1..{len(self.rows)}")
        return self.rows[i - 1]

    def entry(self, i: int, k: int) -> int:
        if not 1 <= k <= self.n_cols:
            raise IndexError(f"column {k} out of range 1..{self.n_cols}")
        return (self.row(i) >> (self.n_cols - k)) & 1

    def column_bit(self, k: int) -> int:
        """Single-bit mask selecting column ``k`` (1-based)."""
        if not 1 <= k <= self.n_cols:
            raise IndexError(f"column {k} out of range 1..{self.n_cols}")
        return 1 << (self.n_cols - k)

    def columns(self) -> list[int]:
        """Columns as ints, row 1 being the most significant bit."""
        out = []
        for k in range(1, self.n_cols + 1):
            shift = self.n_cols - k
            value = 0
            for r in self.rows:
                value = (value << 1) | ((r >> shift) & 1)
            out.append(value)
        return out

    def to_lists(self) -> list[list[int]]:
        n = self.n_cols
        return [[(r >> (n - k)) & 1 for k in range(1, n + 1)] for r in self.rows]

    def row_string(self, i: int) -> str:
        return format(self.row(i), f"0{self.n_cols}b")

    def head(self, count: int) -> "BinaryMatrix":
        return BinaryMatrix(self.n_cols, self.rows[:count])

    def append_row(self, row: int) -> "BinaryMatrix":
        return BinaryMatrix(self.n_cols, self.rows + (row,))

    def __str__(self) -> str:
        return emit_matrix(self).decode("ascii")


RowLike = Union[BinaryMatrix, int]


def format_row(row: int, n_cols: int) -> str:
    return format(row, f"0{n_cols}b")


def parse_matrix(text: Union[bytes, str], max_cols: int = MAX_COLS) -> BinaryMatrix:
    """Parse ``0``/``1`` lines into a matrix.

    Blank lines and lines starting with ``#`` are skipped. An input with no
    data lines cannot carry a column count and is rejected.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise MatrixFormatError("non-ASCII input") from exc
    rows: list[int] = []
    width = None
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").strip()
        if not line or line.startswith("#"):
            continue
        if any(ch not in "01" for ch in line):
            raise MatrixFormatError(f"line {lineno}: illegal character in {line!r}")
        if width is None:
            width = len(line)
            if width > max_cols:
                raise MatrixFormatError(f"line {lineno}: {width} columns exceeds the limit of {max_cols}")
        elif len(line) != width:
            raise MatrixFormatError(f"line {lineno}: ragged row (expected {width} columns, got {len(line)})")
        rows.append(int(line, 2))
    if width is None:
        raise MatrixFormatError("no matrix rows found (zero columns)")
    return BinaryMatrix(width, tuple(rows))


def emit_matrix(m: BinaryMatrix) -> bytes:
    """Matrix text, one LF-terminated line per row; empty matrix gives ``b""``."""
    if not m.rows:
        return b""
    fmt = f"0{m.n_cols}b"
    return ("".join(format(r, fmt) + "\n" for r in m.rows)).encode("ascii")


def column_mask(m: BinaryMatrix, columns: Iterable[int]) -> int:
    mask = 0
    for k in columns:
        mask |= m.column_bit(k)
    return mask


def negate_columns(m: BinaryMatrix, columns: Iterable[int]) -> BinaryMatrix:
    """Flip every entry in the given 1-based columns."""
    mask = column_mask(m, columns)
    return negate_mask(m, mask)


def negate_mask(m: BinaryMatrix, mask: int) -> BinaryMatrix:
    if mask & ~m.full_mask or mask < 0:
        raise ValueError("negation mask exceeds the column range")
    if not mask:
        return m
    return BinaryMatrix(m.n_cols, tuple(r ^ mask for r in m.rows))


def tilde(m: BinaryMatrix) -> BinaryMatrix:
    """Negate the columns where the first and last rows differ.

    The first row of the result equals the last row of ``m``.
    """
    if not m.rows:
        raise ValueError("tilde of an empty matrix")
    return negate_mask(m, m.rows[0] ^ m.rows[-1])


def vstack(blocks: Sequence[BinaryMatrix]) -> BinaryMatrix:
    if not blocks:
        raise ValueError("nothing to stack")
    n = blocks[0].n_cols
    rows: list[int] = []
    for b in blocks:
        if b.n_cols != n:
            raise ValueError("column counts differ")
        rows.extend(b.rows)
    return BinaryMatrix(n, tuple(rows))


def hstack(blocks: Sequence[BinaryMatrix]) -> BinaryMatrix:
    """Place blocks side by side; the first block holds the leftmost columns."""
    if not blocks:
        raise ValueError("nothing to stack")
    m = blocks[0].n_rows
    if any(b.n_rows != m for b in blocks):
        raise ValueError("row counts differ")
    n = sum(b.n_cols for b in blocks)
    rows = [0] * m
    for b in blocks:
        w = b.n_cols
        for idx, r in enumerate(b.rows):
            rows[idx] = (rows[idx] << w) | r
    return BinaryMatrix(n, tuple(rows))


def glue(m: BinaryMatrix, blocks: int) -> BinaryMatrix:
    """Stack ``blocks`` alternating copies ``m, tilde(m), m, ...``.

    Block ``s`` (1-based) is ``m`` for odd ``s`` and ``tilde(m)`` for even ``s``.
    """
    if blocks < 1:
        raise ValueError("glue needs at least one block")
    if not m.rows:
        raise ValueError("cannot glue an empty matrix")
    t = tilde(m)
    return vstack([m if s % 2 == 1 else t for s in range(1, blocks + 1)])


@dataclass(frozen=True)
class Pattern:
    """``size`` copies of ``top`` and ``bottom`` stacked in alternance, starting from ``top``."""

    size: int
    top: BinaryMatrix
    bottom: BinaryMatrix

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValueError("pattern size must be non-negative")
        if self.top.n_cols != self.bottom.n_cols:
            raise ValueError("pattern halves differ in width")

    def realize(self) -> BinaryMatrix:
        rows: list[int] = []
        for s in range(self.size):
            rows.extend((self.top if s % 2 == 0 else self.bottom).rows)
        return BinaryMatrix(self.top.n_cols, tuple(rows))


def pattern_column(size: int, top: int, bottom: int) -> list[int]:
    """Single-column pattern as a list of bits."""
    return [top if s % 2 == 0 else bottom for s in range(size)]


def reverse(m: BinaryMatrix) -> BinaryMatrix:
    """Reverse the row order and negate the even rows (1-based) of the result."""
    if not m.rows:
        raise ValueError("reverse of an empty matrix")
    full = m.full_mask
    size = len(m.rows)
    out = []
    for i in range(1, size + 1):
        src = m.rows[size - i]
        out.append(src if i % 2 == 1 else src ^ full)
    return BinaryMatrix(m.n_cols, tuple(out))


def from_columns(columns: Sequence[int], n_rows: int) -> BinaryMatrix:
    """Inverse of :meth:`BinaryMatrix.columns`."""
    n = len(columns)
    rows = []
    for i in range(n_rows):
        shift = n_rows - 1 - i
        value = 0
        for c in columns:
            value = (value << 1) | ((c >> shift) & 1)
        rows.append(value)
    return BinaryMatrix(n, tuple(rows))


def canonical_transform(m: BinaryMatrix) -> tuple[int, list[int]]:
    """Return ``(negation mask, column order)`` bringing ``m`` to canonical form.

    Columns with a leading 1 are negated, then columns are stably sorted in
    non-decreasing order reading each column top to bottom (row 1 most
    significant). ``order[p]`` is the 1-based source column placed at position
    ``p + 1``.
    """
    if len(m.rows) < 2:
        raise ValueError("canonical form needs at least two rows")
    neg = m.rows[0]
    cols = negate_mask(m, neg).columns()
    order = sorted(range(1, m.n_cols + 1), key=lambda k: cols[k - 1])
    return neg, order


def permute_columns(m: BinaryMatrix, order: Sequence[int]) -> BinaryMatrix:
    """Column ``p`` of the result is column ``order[p-1]`` of ``m``."""
    if sorted(order) != list(range(1, m.n_cols + 1)):
        raise ValueError("order is not a permutation of the columns")
    cols = m.columns()
    return from_columns([cols[k - 1] for k in order], m.n_rows)


def apply_transform(m: BinaryMatrix, neg: int, order: Sequence[int]) -> BinaryMatrix:
    return permute_columns(negate_mask(m, neg), order)


def canonicalize(m: BinaryMatrix) -> BinaryMatrix:
    neg, order = canonical_transform(m)
    return apply_transform(m, neg, order)


def is_canonical(m: BinaryMatrix) -> bool:
    if len(m.rows) < 2:
        raise ValueError("canonical form needs at least two rows")
    if m.rows[0] != 0:
        return False
    cols = m.columns()
    return all(a <= b for a, b in zip(cols, cols[1:]))


def pad_columns(m: BinaryMatrix, n_cols: int) -> BinaryMatrix:
    """Append all-zero columns on the right until ``n_cols`` columns."""
    extra = n_cols - m.n_cols
    if extra < 0:
        raise ValueError("cannot pad to fewer columns")
    return BinaryMatrix(n_cols, tuple(r << extra for r in m.rows))
