"""Exhaustive search split into independent subtrees.

All canonical prefixes with ``split_depth`` rows are generated lazily and
each one is searched to exhaustion by a worker process. Dead ends shallower
than ``split_depth`` are collected while enumerating so the subtrees plus
those leaves cover the whole canonical tree exactly once.

Completed subtrees can be journaled. Each journal line starts with the
hex SHA-256 digest of the root's matrix text, followed by the subtree's best
row count and its rows in hex, separated by spaces.
"""

from __future__ import annotations

import hashlib
import logging
import multiprocessing
import os
import random
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterator, Optional, Union

from ..matrix import BinaryMatrix, emit_matrix
from .branch import (
    BranchSearch,
    SearchConfig,
    SearchOutcome,
    SearchStats,
    better,
    prepare_root,
    tie_mask_for,
)
from .pairs import compatible_pairs, extend_tables, initial_tables

log = logging.getLogger(__name__)

WORKERS_ENV = "ORDER_REGULAR_WORKERS"


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV)
    if value:
        return max(1, int(value))
    return 1


class LocalBest:
    """Stand-in for a shared ``multiprocessing.Value`` in single-process runs."""

    def __init__(self, value: int = 0):
        self.value = value

    def get_lock(self):
        return _NullLock()


class _NullLock:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def root_digest(rows: tuple[int, ...], n: int) -> str:
    return hashlib.sha256(emit_matrix(BinaryMatrix(n, rows))).hexdigest()


@dataclass
class _Frontier:
    """Best matrix among nodes that ended before the split depth."""

    best: tuple[int, ...] = ()
    nodes: int = 0


def enumerate_roots(cfg: SearchConfig, frontier: Optional[_Frontier] = None) -> Iterator[tuple[int, ...]]:
    """Canonical prefixes with ``cfg.split_depth`` rows, in search order."""
    engine = BranchSearch(replace(cfg, seed=0, target_rows=None, time_limit=None, node_limit=None))
    frontier = frontier if frontier is not None else _Frontier()
    depth = cfg.split_depth
    root, _ = prepare_root(cfg)
    pf, kind = engine.pf, cfg.kind

    def walk(rows: list[int], tables, tie: int) -> Iterator[tuple[int, ...]]:
        frontier.nodes += 1
        if len(rows) > len(frontier.best):
            frontier.best = tuple(rows)
        if len(rows) >= depth:
            yield tuple(rows)
            return
        table = tables[0] if len(tables) == 1 else tables[len(rows) % 2]
        qmask = table.get(rows[-1], 0)
        if not qmask:
            return
        for q in engine._children(rows, qmask, tie):
            child = extend_tables(pf, kind, tables, rows, q)
            rows.append(q)
            yield from walk(rows, child, tie & ~(q ^ (q << 1)))
            rows.pop()

    if root:
        tables = compatible_pairs(BinaryMatrix(cfg.n, tuple(root)), kind).tables
        tie = tie_mask_for(root, cfg.n) if cfg.symmetry else 0
        yield from walk(list(root), tables, tie)
        return
    start = initial_tables(pf, kind)
    for q in engine._children([], pf.all_rows, tie_mask_for([], cfg.n)):
        yield from walk([q], start, tie_mask_for([q], cfg.n))


def _subtree_seed(seed: int, index: int) -> int:
    if seed == 0:
        return 0
    return random.Random(f"{seed}:{index}").randrange(1, 2**31)


_SHARED = None


def _init_worker(shared) -> None:
    global _SHARED
    _SHARED = shared


def _search_subtree(cfg: SearchConfig, rows: tuple[int, ...], index: int, time_limit: Optional[float]):
    sub = replace(
        cfg,
        root=BinaryMatrix(cfg.n, rows),
        seed=_subtree_seed(cfg.seed, index),
        symmetry=cfg.symmetry,
        time_limit=time_limit,
        workers=1,
        on_node=None,
        progress_interval=None,
    )
    out = BranchSearch(sub, _SHARED).run()
    return index, out.best.rows, out.exhausted, out.target_reached, out.stats


def read_journal(path: Union[str, Path]) -> dict[str, tuple[int, ...]]:
    done: dict[str, tuple[int, ...]] = {}
    p = Path(path)
    if not p.exists():
        return done
    for line in p.read_text(encoding="ascii").splitlines():
        parts = line.split()
        if not parts:
            continue
        digest = parts[0]
        rows: tuple[int, ...] = ()
        if len(parts) >= 3 and parts[2] != "-":
            rows = tuple(int(h, 16) for h in parts[2].split(","))
        done[digest] = rows
    return done


def _journal_line(digest: str, rows: tuple[int, ...]) -> str:
    body = ",".join(format(r, "x") for r in rows) if rows else "-"
    return f"{digest} {len(rows)} {body}\n"


def exhaustive_parallel(
    cfg: SearchConfig,
    journal: Optional[Union[str, Path]] = None,
) -> SearchOutcome:
    """Search every canonical subtree rooted at ``cfg.split_depth`` rows.

    With ``journal`` set, finished subtrees are appended to that file and
    skipped (their recorded best reused) when the run is restarted.
    """
    start = time.monotonic()
    deadline = start + cfg.time_limit if cfg.time_limit is not None else None
    done = read_journal(journal) if journal else {}
    stats = SearchStats()
    frontier = _Frontier()
    best: Optional[BinaryMatrix] = None
    all_done = True
    reached = False
    error: Optional[str] = None

    def consider(rows: tuple[int, ...]) -> None:
        nonlocal best
        if rows:
            cand = BinaryMatrix(cfg.n, rows)
            if better(cand, best):
                best = cand

    worker_cfg = replace(cfg, on_node=None)
    if cfg.workers > 1:
        shared = multiprocessing.Value("i", 0)
        pool = ProcessPoolExecutor(max_workers=cfg.workers, initializer=_init_worker, initargs=(shared,))
    else:
        shared = LocalBest(0)
        _init_worker(shared)
        pool = None

    jfile = open(journal, "a", encoding="ascii") if journal else None
    pending = {}

    def remaining() -> Optional[float]:
        if deadline is None:
            return None
        return max(0.0, deadline - time.monotonic())

    def finish(result, digest: str) -> None:
        nonlocal all_done, reached
        index, rows, exhausted, hit, sub_stats = result
        stats.merge(sub_stats)
        consider(rows)
        if len(rows) > shared.value:
            with shared.get_lock():
                if len(rows) > shared.value:
                    shared.value = len(rows)
        if hit:
            reached = True
        if exhausted:
            if jfile is not None:
                jfile.write(_journal_line(digest, rows))
                jfile.flush()
        elif not hit:
            all_done = False

    try:
        for index, rows in enumerate(enumerate_roots(cfg, frontier)):
            if reached:
                break
            if deadline is not None and time.monotonic() >= deadline:
                all_done = False
                break
            digest = root_digest(rows, cfg.n)
            if digest in done:
                consider(done[digest])
                stats.subtrees_completed += 1
                if len(done[digest]) > shared.value:
                    shared.value = len(done[digest])
                continue
            if pool is None:
                finish(_search_subtree(cfg, rows, index, remaining()), digest)
                continue
            fut = pool.submit(_search_subtree, worker_cfg, rows, index, remaining())
            pending[fut] = digest
            if len(pending) >= 4 * cfg.workers:
                finished, _ = wait(pending, return_when=FIRST_COMPLETED)
                for f in finished:
                    finish(f.result(), pending.pop(f))
        for f in list(pending):
            finish(f.result(), pending.pop(f))
    except Exception as exc:  # a failed worker ends the run with partial stats
        error = f"{type(exc).__name__}: {exc}"
        all_done = False
        log.error("exhaustive search failed: %s", error)
    finally:
        if pool is not None:
            for f in pending:
                f.cancel()
            pool.shutdown(wait=True, cancel_futures=True)
        if jfile is not None:
            jfile.close()

    consider(frontier.best)
    stats.nodes += frontier.nodes
    stats.elapsed = time.monotonic() - start
    if best is None:
        best = BinaryMatrix(cfg.n, ())
    if cfg.target_rows is not None and best.n_rows >= cfg.target_rows:
        reached = True
    return SearchOutcome(best, all_done and not reached and error is None, stats, reached, error=error)
