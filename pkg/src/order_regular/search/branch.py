"""Depth-first branch search over starred (P)(S)OR matrices.

Children of a node are the rows in ``Q_A(last row)``. A node is cut when
``depth + |R_A|`` falls below the row count it would have to reach: rows at
positions ``depth .. m-1`` are pairwise distinct and all lie in ``R_A``.

Symmetry breaking keeps only canonical prefixes: row 1 is all zeros, row 2
all ones, and columns stay sorted in non-decreasing order, which only
restricts columns that are still equal on the prefix.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

from ..matrix import BinaryMatrix, apply_transform, canonical_transform, emit_matrix
from ..regularity import RegularityKind, check
from .pairs import PairFilter, compatible_pairs, extend_tables, initial_tables

log = logging.getLogger(__name__)

SORTED_SEED = 0


@dataclass(frozen=True)
class SearchConfig:
    """Parameters shared by every search driver.

    ``target_rows`` counts rows of the starred matrix (an ``m``-row OR matrix
    is an ``m+1``-row OR* matrix). ``seed == 0`` visits children in ascending
    order; any other seed shuffles them.
    """

    kind: RegularityKind = RegularityKind.ORSTAR
    n: int = 3
    target_rows: Optional[int] = None
    root: Optional[BinaryMatrix] = None
    seed: int = SORTED_SEED
    workers: int = 1
    split_depth: int = 2
    cutting: bool = True
    symmetry: bool = True
    time_limit: Optional[float] = None
    node_limit: Optional[int] = None
    progress_interval: Optional[float] = None
    on_node: Optional[Callable[[Sequence[int]], None]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.kind.starred:
            raise ValueError(f"search works on starred kinds, got {self.kind}")
        if not 1 <= self.n <= 16:
            raise ValueError("n must be in 1..16")
        if self.split_depth < 2:
            raise ValueError("split_depth must be at least 2")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.target_rows is not None and self.target_rows < 1:
            raise ValueError("target_rows must be positive")
        if self.root is not None and self.root.n_cols != self.n:
            raise ValueError("root width differs from n")


@dataclass
class SearchStats:
    nodes: int = 0
    cuts: int = 0
    subtrees_completed: int = 0
    elapsed: float = 0.0

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.cuts += other.cuts
        self.subtrees_completed += other.subtrees_completed

    def __str__(self) -> str:
        rate = self.nodes / self.elapsed if self.elapsed > 0 else 0.0
        return (
            f"nodes={self.nodes} cuts={self.cuts} subtrees={self.subtrees_completed} "
            f"elapsed={self.elapsed:.2f}s rate={rate:.0f}/s"
        )


@dataclass
class SearchOutcome:
    best: BinaryMatrix
    exhausted: bool
    stats: SearchStats
    target_reached: bool = False
    trace: list[int] = field(default_factory=list)
    root_transform: Optional[tuple[int, list[int]]] = None
    error: Optional[str] = None

    @property
    def rows(self) -> int:
        return self.best.n_rows


def better(a: BinaryMatrix, b: Optional[BinaryMatrix]) -> bool:
    """More rows wins; ties go to the lexicographically smaller text."""
    if b is None:
        return True
    if a.n_rows != b.n_rows:
        return a.n_rows > b.n_rows
    return emit_matrix(a) < emit_matrix(b)


class _Stop(Exception):
    pass


class _Abort(Exception):
    pass


def tie_mask_for(rows: Sequence[int], n: int) -> int:
    """Bits ``p`` where columns at bits ``p`` and ``p - 1`` agree on every row."""
    tie = ((1 << n) - 1) & ~1
    for q in rows:
        tie &= ~(q ^ (q << 1))
    return tie


def prepare_root(cfg: SearchConfig) -> tuple[list[int], Optional[tuple[int, list[int]]]]:
    """Validate the root and bring it to canonical form when symmetry breaking is on."""
    if cfg.root is None or cfg.root.n_rows == 0:
        return [], None
    root = cfg.root
    verdict = check(root, cfg.kind)
    if not verdict:
        raise ValueError(f"root is not {cfg.kind}: {verdict}")
    if not cfg.symmetry:
        return list(root.rows), None
    if root.n_rows == 1:
        return [0], (root.rows[0], list(range(1, cfg.n + 1)))
    neg, order = canonical_transform(root)
    return list(apply_transform(root, neg, order).rows), (neg, order)


class BranchSearch:
    """One depth-first search; reusable only once."""

    def __init__(self, cfg: SearchConfig, shared_best=None):
        self.cfg = cfg
        self.kind = cfg.kind
        self.n = cfg.n
        self.full = (1 << cfg.n) - 1
        self.pf = PairFilter.for_width(cfg.n)
        self.rng = random.Random(cfg.seed) if cfg.seed != SORTED_SEED else None
        self.stats = SearchStats()
        self.best: tuple[int, ...] = ()
        self.shared_best = shared_best
        self._deadline = None
        self._next_report = None

    def _bar(self) -> int:
        """Row count a subtree must be able to reach to stay open."""
        if self.cfg.target_rows is not None:
            return self.cfg.target_rows
        bar = len(self.best) + 1
        if self.shared_best is not None:
            # ties with other workers stay open so results do not depend on timing
            bar = max(bar, self.shared_best.value)
        return bar

    def _record(self, rows: list[int]) -> None:
        if len(rows) > len(self.best):
            self.best = tuple(rows)
            if self.shared_best is not None and len(rows) > self.shared_best.value:
                with self.shared_best.get_lock():
                    if len(rows) > self.shared_best.value:
                        self.shared_best.value = len(rows)
            if self.cfg.target_rows is not None and len(rows) >= self.cfg.target_rows:
                raise _Stop

    def _tick(self, depth: int) -> None:
        stats = self.stats
        if self.cfg.node_limit is not None and stats.nodes >= self.cfg.node_limit:
            raise _Abort
        now = time.monotonic()
        if self._deadline is not None and now >= self._deadline:
            raise _Abort
        if self._next_report is not None and now >= self._next_report:
            stats.elapsed = now - self._start
            log.info("progress %s depth=%d best=%d", stats, depth, len(self.best))
            self._next_report = now + self.cfg.progress_interval

    def _children(self, rows: list[int], qmask: int, tie: int) -> list[int]:
        d = len(rows)
        if self.cfg.symmetry and d < 2:
            forced = 0 if d == 0 else self.full
            return [forced] if qmask >> forced & 1 else []
        out = []
        while qmask:
            low = qmask & -qmask
            out.append(low.bit_length() - 1)
            qmask ^= low
        if self.cfg.symmetry and tie:
            out = [q for q in out if not (q & ~(q << 1) & tie)]
        if self.rng is not None:
            self.rng.shuffle(out)
        return out

    def _dfs(self, rows: list[int], tables: tuple[dict[int, int], ...], tie: int) -> None:
        stats = self.stats
        stats.nodes += 1
        if stats.nodes & 1023 == 0:
            self._tick(len(rows))
        if self.cfg.on_node is not None:
            self.cfg.on_node(rows)
        self._record(rows)
        d = len(rows)
        if self.cfg.cutting:
            if len(tables) == 1:
                avail = len(tables[0])
            else:
                avail = len(tables[0].keys() | tables[1].keys())
            if d + avail < self._bar():
                stats.cuts += 1
                return
        table = tables[0] if len(tables) == 1 else tables[d % 2]
        qmask = table.get(rows[-1], 0)
        if not qmask:
            return
        pf, kind = self.pf, self.kind
        for q in self._children(rows, qmask, tie):
            child = extend_tables(pf, kind, tables, rows, q)
            rows.append(q)
            self._dfs(rows, child, tie & ~(q ^ (q << 1)))
            rows.pop()

    def run(self) -> SearchOutcome:
        cfg = self.cfg
        self._start = time.monotonic()
        if cfg.time_limit is not None:
            self._deadline = self._start + cfg.time_limit
        if cfg.progress_interval:
            self._next_report = self._start + cfg.progress_interval
        root, transform = prepare_root(cfg)
        exhausted = True
        reached = False
        try:
            if root:
                tables = compatible_pairs(BinaryMatrix(cfg.n, tuple(root)), cfg.kind).tables
                self._dfs(root, tables, tie_mask_for(root, cfg.n) if cfg.symmetry else 0)
            else:
                start = initial_tables(self.pf, self.kind)
                all_rows = self.pf.all_rows
                for q in self._children([], all_rows, tie_mask_for([], cfg.n)):
                    self._dfs([q], start, tie_mask_for([q], cfg.n))
        except _Stop:
            exhausted = False
            reached = True
        except _Abort:
            exhausted = False
        self.stats.elapsed = time.monotonic() - self._start
        if exhausted:
            self.stats.subtrees_completed += 1
        best = BinaryMatrix(cfg.n, self.best)
        if cfg.target_rows is not None and best.n_rows >= cfg.target_rows:
            reached = True
        return SearchOutcome(best, exhausted, self.stats, reached, root_transform=transform)


def branch_search(cfg: SearchConfig, shared_best=None) -> SearchOutcome:
    """Run a single-threaded branch search described by ``cfg``."""
    return BranchSearch(cfg, shared_best).run()


def extremal_rows(n: int, kind: RegularityKind = RegularityKind.ORSTAR, **options) -> int:
    """Largest starred row count for ``n`` columns (exhaustive, single-threaded)."""
    out = branch_search(SearchConfig(kind=kind.star, n=n, **options))
    if not out.exhausted:
        raise RuntimeError("search did not finish")
    return out.rows


def with_root(cfg: SearchConfig, root: BinaryMatrix, **changes) -> SearchConfig:
    return replace(cfg, root=root, **changes)
