"""Back-and-forth local search for large SOR* / PSOR* matrices.

Each step searches the whole subtree below a ``d``-row root, reverses the
best matrix found (row order flipped, even rows negated) and keeps its first
``d`` rows as the next root. For SOR* the reversed matrix is again SOR*, so
it stays reachable from the new root and the row count never decreases.
Reversal is not known to preserve PSOR*; reversed PSOR* roots are
re-verified and replaced by a fresh random root when they fail.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field, replace
from typing import Optional

from ..matrix import BinaryMatrix, reverse
from ..regularity import RegularityKind, check
from .branch import SearchConfig, SearchOutcome, SearchStats, better, branch_search

log = logging.getLogger(__name__)

LOCAL_SEARCH_KINDS = (RegularityKind.SORSTAR, RegularityKind.PSORSTAR)


@dataclass
class BackAndForthOutcome(SearchOutcome):
    roots: list[BinaryMatrix] = field(default_factory=list)
    fallbacks: int = 0


def random_root(cfg: SearchConfig, d: int, rng: random.Random) -> Optional[BinaryMatrix]:
    out = branch_search(replace(cfg, root=None, target_rows=d, seed=rng.randrange(1, 2**31), time_limit=None, node_limit=None))
    if out.rows < d:
        return None
    return out.best


def back_and_forth(
    cfg: SearchConfig,
    d: int,
    stall: int,
    max_steps: Optional[int] = None,
    time_limit: Optional[float] = None,
    allow_any_kind: bool = False,
) -> BackAndForthOutcome:
    """Iterate root search and reversal until the row count stagnates for ``stall`` steps.

    ``cfg.seed`` drives every random choice. ``cfg.target_rows`` (if set)
    stops the run as soon as a matrix that large is found. ``cfg.node_limit``
    and ``cfg.time_limit`` apply to each subtree search; a truncated step
    voids the monotonicity guarantee.
    """
    if cfg.kind not in LOCAL_SEARCH_KINDS and not allow_any_kind:
        raise ValueError(f"back-and-forth needs sor* or psor*, got {cfg.kind}")
    if d < 2:
        raise ValueError("d must be at least 2")
    if stall < 1:
        raise ValueError("stall must be at least 1")
    rng = random.Random(cfg.seed)
    start = time.monotonic()
    deadline = start + time_limit if time_limit is not None else None
    stats = SearchStats()
    trace: list[int] = []
    roots: list[BinaryMatrix] = []
    fallbacks = 0

    root = random_root(cfg, d, rng)
    if root is None:
        raise ValueError(f"no {cfg.kind} matrix with {d} rows and {cfg.n} columns")
    best: Optional[BinaryMatrix] = None
    current: Optional[BinaryMatrix] = None
    exhausted_steps = True
    reached = False
    while True:
        roots.append(root)
        step_cfg = replace(cfg, root=root, seed=rng.randrange(1, 2**31))
        if deadline is not None:
            left = deadline - time.monotonic()
            if left <= 0:
                break
            step_cfg = replace(step_cfg, time_limit=left if cfg.time_limit is None else min(left, cfg.time_limit))
        out = branch_search(step_cfg)
        stats.merge(out.stats)
        current = out.best
        trace.append(current.n_rows)
        if best is None or current.n_rows >= best.n_rows:
            best = current
        if not out.exhausted and not out.target_reached:
            exhausted_steps = False
        log.debug("step %d: %d rows", len(trace), current.n_rows)
        if out.target_reached:
            reached = True
            break
        t = len(trace)
        if t >= stall and trace[t - stall] == trace[t - 1]:
            break
        if max_steps is not None and t >= max_steps:
            break
        if not exhausted_steps:
            break
        root = reverse(current).head(d)
        if not check(root, cfg.kind):
            fallbacks += 1
            fresh = random_root(cfg, d, rng)
            if fresh is None:
                break
            root = fresh

    stats.elapsed = time.monotonic() - start
    final = best if best is not None else root
    return BackAndForthOutcome(
        final,
        exhausted=False,
        stats=stats,
        target_reached=reached,
        trace=trace,
        roots=roots,
        fallbacks=fallbacks,
    )


def back_and_forth_restarts(
    cfg: SearchConfig,
    d: int,
    stall: int,
    target_rows: int,
    restarts: Optional[int] = None,
    time_limit: Optional[float] = None,
    allow_any_kind: bool = False,
) -> BackAndForthOutcome:
    """Restart back-and-forth with fresh seeds until ``target_rows`` is reached."""
    rng = random.Random(cfg.seed)
    start = time.monotonic()
    best: Optional[BackAndForthOutcome] = None
    attempt = 0
    while restarts is None or attempt < restarts:
        attempt += 1
        left = None
        if time_limit is not None:
            left = time_limit - (time.monotonic() - start)
            if left <= 0:
                break
        run_cfg = replace(cfg, seed=rng.randrange(1, 2**31), target_rows=target_rows)
        out = back_and_forth(run_cfg, d, stall, time_limit=left, allow_any_kind=allow_any_kind)
        if best is None or better(out.best, best.best):
            best = out
        if out.target_reached:
            break
    if best is None:
        raise RuntimeError("no back-and-forth run completed")
    return best
