"""Beam search over canonical prefixes, ranked by surviving compatible pairs.

Not exhaustive: each depth keeps only the ``width`` prefixes with the most
pairs left in ``P_A``. It is a cheap way to reach large starred matrices,
whose first rows can then seed a complete branch search.
"""

from __future__ import annotations

import random
import time
from dataclasses import replace

from ..matrix import BinaryMatrix
from .branch import BranchSearch, SearchConfig, SearchOutcome, SearchStats, branch_search, prepare_root, tie_mask_for
from .pairs import compatible_pairs, extend_tables, initial_tables


def _pair_count(tables) -> int:
    return sum(qm.bit_count() for t in tables for qm in t.values())


def _avail(tables) -> int:
    if len(tables) == 1:
        return len(tables[0])
    return len(tables[0].keys() | tables[1].keys())


def beam_search(cfg: SearchConfig, width: int) -> SearchOutcome:
    """Breadth-first search keeping the ``width`` best prefixes per depth.

    With ``cfg.seed != 0`` ties in the ranking are broken at random;
    otherwise the earlier-generated prefix wins. ``cfg.target_rows`` prunes
    prefixes that cannot reach it and stops the search once it is met.
    """
    if width < 1:
        raise ValueError("width must be positive")
    start = time.monotonic()
    deadline = start + cfg.time_limit if cfg.time_limit is not None else None
    engine = BranchSearch(replace(cfg, seed=0))
    pf, kind, n = engine.pf, cfg.kind, cfg.n
    rng = random.Random(cfg.seed) if cfg.seed else None
    stats = SearchStats()
    root, transform = prepare_root(cfg)
    target = cfg.target_rows

    if root:
        tables = compatible_pairs(BinaryMatrix(n, tuple(root)), kind).tables
        tie = tie_mask_for(root, n) if cfg.symmetry else 0
        level = [(list(root), tables, tie)]
    else:
        level = [([q], initial_tables(pf, kind), tie_mask_for([q], n)) for q in engine._children([], pf.all_rows, tie_mask_for([], n))]
    best = level[0][0]
    stats.nodes += len(level)
    truncated = False
    while level:
        if target is not None and len(best) >= target:
            break
        if deadline is not None and time.monotonic() >= deadline:
            truncated = True
            break
        scored = []
        for rows, tables, tie in level:
            d = len(rows)
            table = tables[0] if len(tables) == 1 else tables[d % 2]
            qmask = table.get(rows[-1], 0)
            for q in engine._children(rows, qmask, tie):
                child = extend_tables(pf, kind, tables, rows, q)
                stats.nodes += 1
                if target is not None and d + 1 + _avail(child) < target:
                    stats.cuts += 1
                    continue
                key = rng.random() if rng is not None else -len(scored)
                scored.append((_pair_count(child), key, rows + [q], child, tie & ~(q ^ (q << 1))))
        if not scored:
            break
        scored.sort(key=lambda item: (item[0], item[1]), reverse=True)
        if len(scored) > width:
            truncated = True
        level = [(rows, tables, tie) for _, _, rows, tables, tie in scored[:width]]
        best = level[0][0]

    stats.elapsed = time.monotonic() - start
    matrix = BinaryMatrix(n, tuple(best))
    reached = target is not None and matrix.n_rows >= target
    # a beam that never dropped a prefix has seen every canonical one
    exhausted = not truncated and not reached
    return SearchOutcome(matrix, exhausted=exhausted, stats=stats, target_reached=reached, root_transform=transform)


def beam_then_branch(cfg: SearchConfig, width: int, seed_depth: int) -> SearchOutcome:
    """Beam search, then a complete branch search below the beam's first ``seed_depth`` rows."""
    out = beam_search(cfg, width)
    if out.target_reached or out.rows < seed_depth:
        return out
    follow = branch_search(replace(cfg, root=out.best.head(seed_depth)))
    follow.stats.merge(out.stats)
    return follow if follow.rows >= out.rows else out
