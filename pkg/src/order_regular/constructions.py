"""Recursive constructions of large Order-Regular matrices.

Three schemes are provided:

* ``simple``: doubles the row count and adds two columns per level
  (growth ``sqrt(2)`` per column).
* ``main``: blows up a Strongly Order-Regular block ``B`` (``M x N``, ``M`` odd)
  into ``M**l`` rows and ``l*N + 2*(l-1)`` columns.
* ``modified``: same blow-up for a Partially-Strongly Order-Regular block
  with two corner patterns of the last two columns changed.

Each level of ``main``/``modified`` is ``[C | D | E]``: ``C`` glues ``M``
copies of the previous level, ``D`` repeats the row pairs of ``B`` as
alternating patterns, and ``E`` holds two alternating pattern columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .matrix import BinaryMatrix, glue, pad_columns, parse_matrix, tilde
from .regularity import RegularityKind, check

DESK_SCALE_ROWS = 100_000

FIXTURE_FILES = {
    "sor33x8": ("sor_33x8.txt", RegularityKind.SOR),
    "psor35x8": ("psor_35x8.txt", RegularityKind.PSOR),
    "extremal5x3": ("extremal_5x3.txt", RegularityKind.OR),
    "extremal8x4": ("extremal_8x4.txt", RegularityKind.OR),
    # found by exhaustive search, not taken from the literature
    "sor3x2": ("sor_3x2.txt", RegularityKind.SOR),
    # beam search output for 7 columns
    "or33x7": ("or_33x7.txt", RegularityKind.OR),
}


class FixtureError(RuntimeError):
    pass


@dataclass(frozen=True)
class BuildingBlock:
    matrix: BinaryMatrix
    kind: RegularityKind
    name: str = ""

    @property
    def M(self) -> int:
        return self.matrix.n_rows

    @property
    def N(self) -> int:
        return self.matrix.n_cols

    def validate(self, require_odd: bool = True) -> None:
        verdict = check(self.matrix, self.kind)
        if not verdict:
            raise ValueError(f"block {self.name or '?'} is not {self.kind}: {verdict} ({verdict.reason})")
        if require_odd and self.M % 2 == 0:
            raise ValueError(f"block {self.name or '?'} has an even number of rows ({self.M})")


@dataclass(frozen=True)
class ConstructionReport:
    levels: int
    rows: int
    cols: int

    @property
    def growth_rate(self) -> float:
        return self.rows ** (1.0 / self.cols)


def load_fixture(name: str) -> BinaryMatrix:
    try:
        filename, _ = FIXTURE_FILES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURE_FILES))}") from None
    text = resources.files("order_regular").joinpath("data").joinpath(filename).read_text(encoding="ascii")
    return parse_matrix(text)


_BLOCKS: Optional[dict[str, BuildingBlock]] = None


def embedded_blocks() -> dict[str, BuildingBlock]:
    """Embedded matrices, each verified against its kind on first load."""
    global _BLOCKS
    if _BLOCKS is None:
        blocks = {}
        for name, (_, kind) in FIXTURE_FILES.items():
            block = BuildingBlock(load_fixture(name), kind, name)
            verdict = check(block.matrix, kind)
            if not verdict:
                raise FixtureError(f"fixture {name} fails {kind}: {verdict}")
            blocks[name] = block
        _BLOCKS = blocks
    return dict(_BLOCKS)


def _alternating(size: int, top: int, bottom: int) -> list[int]:
    return [top if s % 2 == 0 else bottom for s in range(size)]


def _check_scale(rows: int, allow_large: bool) -> None:
    if rows > DESK_SCALE_ROWS and not allow_large:
        raise ValueError(f"construction would have {rows} rows; pass allow_large=True to build it")


def construct_simple(levels: int, allow_large: bool = False) -> BinaryMatrix:
    """Level ``l`` has ``2**l`` rows and ``2*l - 1`` columns."""
    if levels < 1:
        raise ValueError("levels must be at least 1")
    _check_scale(2**levels, allow_large)
    a = BinaryMatrix(1, (0, 1))
    for _ in range(2, levels + 1):
        half = a.n_rows
        top_extra = _alternating(half, 0, 1)
        rows = []
        for r, e in zip(a.rows, top_extra):
            rows.append((r << 2) | (e << 1) | e)
        for r in tilde(a).rows:
            rows.append((r << 2) | 0b10)
        a = BinaryMatrix(a.n_cols + 2, tuple(rows))
    return a


def _e_bits(slice_index: int, n_slices: int, modified: bool) -> tuple[tuple[int, int], tuple[int, int]]:
    """(top, bottom) pattern values of the two extra columns in a slice (1-based)."""
    if slice_index % 2 == 1:
        first, second = (0, 1), (0, 0)
    else:
        first, second = (0, 0), (0, 1)
    if modified:
        if slice_index == 1:
            second = (0, 1)
        if slice_index == n_slices:
            first = (0, 0)
    return first, second


def _blow_up(block: BinaryMatrix, levels: int, modified: bool) -> BinaryMatrix:
    big_m, big_n = block.n_rows, block.n_cols
    b_rows = block.rows
    current = block
    for _ in range(2, levels + 1):
        prev_m = current.n_rows
        c_block = glue(current, big_m)
        width = current.n_cols + big_n + 2
        rows = []
        for s in range(1, big_m + 1):
            top = b_rows[s - 1]
            bottom = b_rows[s] if s < big_m else b_rows[s - 1]
            (e1_top, e1_bot), (e2_top, e2_bot) = _e_bits(s, big_m, modified)
            top_tail = (top << 2) | (e1_top << 1) | e2_top
            bot_tail = (bottom << 2) | (e1_bot << 1) | e2_bot
            base = (s - 1) * prev_m
            for t in range(prev_m):
                c_row = c_block.rows[base + t]
                tail = top_tail if t % 2 == 0 else bot_tail
                rows.append((c_row << (big_n + 2)) | tail)
        current = BinaryMatrix(width, tuple(rows))
    return current


def construct_main(block: BuildingBlock, levels: int, allow_large: bool = False) -> BinaryMatrix:
    """Blow up an SOR block with the ``[C | D | E]`` recursion."""
    if levels < 1:
        raise ValueError("levels must be at least 1")
    if block.kind.base is not RegularityKind.SOR:
        raise ValueError(f"construct_main needs an SOR block, got {block.kind}")
    block.validate()
    _check_scale(block.M**levels, allow_large)
    return _blow_up(block.matrix, levels, modified=False)


def construct_modified(block: BuildingBlock, levels: int, allow_large: bool = False) -> BinaryMatrix:
    """Blow up a PSOR block; the extra columns use the modified corner patterns.

    SOR blocks are accepted as well since every SOR matrix is PSOR.
    """
    if levels < 1:
        raise ValueError("levels must be at least 1")
    if block.kind.base not in (RegularityKind.PSOR, RegularityKind.SOR):
        raise ValueError(f"construct_modified needs a PSOR block, got {block.kind}")
    block = BuildingBlock(block.matrix, RegularityKind.PSOR, block.name)
    block.validate()
    _check_scale(block.M**levels, allow_large)
    return _blow_up(block.matrix, levels, modified=True)


def construct(scheme: str, block: Optional[BuildingBlock], levels: int, allow_large: bool = False) -> BinaryMatrix:
    if scheme == "simple":
        return construct_simple(levels, allow_large)
    if block is None:
        raise ValueError(f"scheme {scheme!r} needs a building block")
    if scheme == "main":
        return construct_main(block, levels, allow_large)
    if scheme == "modified":
        return construct_modified(block, levels, allow_large)
    raise ValueError(f"unknown scheme {scheme!r}")


def dimensions(block: Optional[BuildingBlock], levels: int) -> tuple[int, int]:
    """Rows and columns after ``levels`` levels (``None`` block means the simple scheme)."""
    if block is None:
        return 2**levels, 2 * levels - 1
    return block.M**levels, levels * block.N + 2 * (levels - 1)


def asymptotic_rate(block: Optional[BuildingBlock]) -> float:
    """Per-column growth of the row count as the number of levels grows."""
    if block is None:
        return math.sqrt(2.0)
    return block.M ** (1.0 / (block.N + 2))


def bound_table(block: Optional[BuildingBlock], max_levels: int) -> list[ConstructionReport]:
    return [ConstructionReport(lv, *dimensions(block, lv)) for lv in range(1, max_levels + 1)]


def rows_for_columns(block: BuildingBlock, n_cols: int) -> int:
    """Rows the blow-up guarantees for exactly ``n_cols`` columns, padding with dummy columns."""
    if n_cols < block.N:
        raise ValueError(f"need at least {block.N} columns")
    levels = (n_cols + 2) // (block.N + 2)
    return block.M**levels


def with_dummy_columns(m: BinaryMatrix, n_cols: int) -> BinaryMatrix:
    """Pad with all-zero columns; such columns never witness anything, so OR status is unchanged."""
    return pad_columns(m, n_cols)


def slice_of(row: int, slice_rows: int) -> tuple[int, int]:
    """``(slice, relative index)`` of a 1-based row in slices of ``slice_rows`` rows."""
    if row < 1:
        raise ValueError("rows are 1-based")
    s = (row - 1) // slice_rows + 1
    return s, row - (s - 1) * slice_rows
