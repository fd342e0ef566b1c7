"""The nonassociativity measure mu and greedy block flips.

A table is cut into blocks by the right cosets of a subloop ``S``.  For a
central involution ``h`` in ``S``, multiplying the entries of blocks
``(i, j)`` and ``(j, i)`` by ``h`` gives another Latin square.  The greedy
procedure keeps applying the flip that lowers ``mu`` the most.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Loop, Quasigroup, as_sub, is_latin, is_normalized, right_cosets
from .errors import CosetsDoNotPartition, EqualBlocks, LoopError, PreconditionFailed
from .structure import center


def mu(Q: Quasigroup | np.ndarray) -> int:
    """Number of triples ``(a, b, c)`` with ``a(bc) != (ab)c``."""
    t = Q.table if isinstance(Q, Quasigroup) else np.asarray(Q)
    return int((t[t] != t[:, t]).sum())


@dataclass
class BlockStructure:
    loop: Loop
    subloop: list[int]
    h: int
    cosets: list[list[int]]
    # block[x] is the index of the coset containing x
    block: np.ndarray

    @property
    def count(self) -> int:
        return len(self.cosets)


def block_structure(L: Loop, S, h) -> BlockStructure:
    """Validate ``(S, h)`` and cut ``L`` into right cosets of ``S``."""
    try:
        sub = as_sub(L, S)
        cosets, _ = right_cosets(L, sub)
    except (CosetsDoNotPartition, LoopError, ValueError) as exc:
        raise PreconditionFailed(f"bad subloop: {exc}") from exc
    h = L.index(h)
    if h == 0 or L.mul(h, h) != 0:
        raise PreconditionFailed("h must be an involution")
    if h not in center(L).pos_in_parent:
        raise PreconditionFailed("h must be central")
    if h not in sub:
        raise PreconditionFailed("h must lie in S")
    block = np.empty(L.order, dtype=np.intp)
    for k, c in enumerate(cosets):
        block[c] = k
    return BlockStructure(L, list(sub), h, cosets, block)


def block_flip(table: np.ndarray, B: BlockStructure, i: int, j: int) -> np.ndarray:
    """Multiply the entries of blocks ``(i, j)`` and ``(j, i)`` by ``h`` (0-based block indices)."""
    if i == j:
        raise EqualBlocks("a flip needs two different blocks")
    out = np.array(table, copy=True)
    hrow = B.loop.table[B.h]
    for a, b in ((i, j), (j, i)):
        rows, cols = np.array(B.cosets[a]), np.array(B.cosets[b])
        sel = np.ix_(rows, cols)
        out[sel] = hrow[out[sel]]
    return out


@dataclass
class GreedyResult:
    loop: Loop
    trace: list[tuple[int, int, int]]
    initial_mu: int

    def trace_lines(self) -> list[str]:
        """1-based block indices, as printed by the command line tool."""
        return [f"step {k}: flip ({i + 1},{j + 1}), mu={m}" for k, (i, j, m) in enumerate(self.trace, 1)]


def greedy_symmetrize(L: Loop, S, h) -> GreedyResult:
    """Apply the best improving block flip until none improves ``mu``.

    Pairs involving the block of the neutral element are skipped, so every
    table along the way stays normalized.  Ties go to the least pair.
    """
    B = block_structure(L, S, h)
    t = L.table
    current = mu(t)
    start = current
    trace: list[tuple[int, int, int]] = []
    pairs = [(i, j) for i in range(1, B.count) for j in range(i + 1, B.count)]
    while current > 0:
        best = None
        for i, j in pairs:
            m = mu(block_flip(t, B, i, j))
            if m < current and (best is None or m < best[0]):
                best = (m, i, j)
        if best is None:
            break
        current, i, j = best
        t = block_flip(t, B, i, j)
        if not (is_latin(t) and is_normalized(t)):
            raise AssertionError("block flip broke the loop table")
        trace.append((i, j, current))
    return GreedyResult(Loop(t, check=False) if trace else L, trace, start)
