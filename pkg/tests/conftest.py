"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's algorithms: they work on
plain Python lists and brute force.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from loopkit.core import Loop, cyclic_group, elementary_abelian, loop_by_cayley_table
from loopkit.library import enumerate_loops

N5_ROWS = [
    [1, 2, 3, 4, 5],
    [2, 1, 4, 5, 3],
    [3, 4, 5, 1, 2],
    [4, 5, 2, 3, 1],
    [5, 3, 1, 2, 4],
]


# ---------------------------------------------------------------------------
# oracles


def relabel(rows, p):
    """Table of the copy under ``p``: ``T'[p(i)][p(j)] = p(T[i][j])``."""
    n = len(rows)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[p[i]][p[j]] = p[rows[i][j]]
    return out


def brute_isomorphic(a, b) -> bool:
    """Loop isomorphism by trying every permutation that fixes 0."""
    a = [list(map(int, r)) for r in a]
    b = [list(map(int, r)) for r in b]
    n = len(a)
    if n != len(b):
        return False
    for rest in itertools.permutations(range(1, n)):
        p = (0, *rest)
        if all(p[a[i][j]] == b[p[i]][p[j]] for i in range(n) for j in range(n)):
            return True
    return False


def reduced_latin_squares(n: int):
    """Normalized Latin squares built row by row from permutations."""
    first = list(range(n))
    rows_by_lead = {i: [p for p in itertools.permutations(range(n)) if p[0] == i] for i in range(n)}

    def extend(rows):
        if len(rows) == n:
            yield [list(r) for r in rows]
            return
        i = len(rows)
        for p in rows_by_lead[i]:
            if all(p[c] != r[c] for r in rows for c in range(n)):
                yield from extend(rows + [p])

    yield from extend([tuple(first)])


def oracle_classes(n: int) -> list[list[list[int]]]:
    """One representative per isomorphism class, found by brute-force orbits."""
    reps, orbits = [], []
    perms = [(0, *r) for r in itertools.permutations(range(1, n))]
    for sq in reduced_latin_squares(n):
        key = tuple(map(tuple, sq))
        if any(key in orb for orb in orbits):
            continue
        reps.append(sq)
        orbits.append({tuple(map(tuple, relabel(sq, p))) for p in perms})
    return reps


def is_assoc_oracle(rows) -> bool:
    n = len(rows)
    return all(rows[rows[a][b]][c] == rows[a][rows[b][c]] for a in range(n) for b in range(n) for c in range(n))


def mu_oracle(rows) -> int:
    n = len(rows)
    return sum(rows[rows[a][b]][c] != rows[a][rows[b][c]] for a in range(n) for b in range(n) for c in range(n))


def normal_oracle(rows, S) -> bool:
    """xS = Sx, (xS)y = x(Sy) and (xy)S = x(yS) for all x, y."""
    t = rows
    n = len(rows)
    S = list(S)
    for x in range(n):
        if {t[x][s] for s in S} != {t[s][x] for s in S}:
            return False
        for y in range(n):
            if {t[t[x][s]][y] for s in S} != {t[x][t[s][y]] for s in S}:
                return False
            if {t[t[x][y]][s] for s in S} != {t[x][t[y][s]] for s in S}:
                return False
    return True


def subloops_oracle(rows) -> list[tuple[int, ...]]:
    """Every subset containing 0 that is closed under the product."""
    n = len(rows)
    out = []
    for k in range(n):
        for rest in itertools.combinations(range(1, n), k):
            S = (0, *rest)
            members = set(S)
            if all(rows[a][b] in members for a in S for b in S):
                out.append(S)
    return out


def random_latin_square(n: int, rng: np.random.Generator, steps: int | None = None) -> np.ndarray:
    """Jacobson-Matthews random walk on Latin squares of order ``n``."""
    M = np.zeros((n, n, n), dtype=np.int8)
    for r in range(n):
        for c in range(n):
            M[r, c, (r + c) % n] = 1
    improper = None
    steps = steps if steps is not None else n**3
    done = 0
    while done < steps or improper is not None:
        if improper is None:
            while True:
                r, c, s = (int(x) for x in rng.integers(0, n, 3))
                if M[r, c, s] == 0:
                    break
            r2 = int(np.flatnonzero(M[:, c, s] == 1)[0])
            c2 = int(np.flatnonzero(M[r, :, s] == 1)[0])
            s2 = int(np.flatnonzero(M[r, c, :] == 1)[0])
        else:
            r, c, s = improper
            r2 = int(rng.choice(np.flatnonzero(M[:, c, s] == 1)))
            c2 = int(rng.choice(np.flatnonzero(M[r, :, s] == 1)))
            s2 = int(rng.choice(np.flatnonzero(M[r, c, :] == 1)))
        for cell in ((r, c, s), (r, c2, s2), (r2, c, s2), (r2, c2, s)):
            M[cell] += 1
        for cell in ((r, c, s2), (r, c2, s), (r2, c, s), (r2, c2, s2)):
            M[cell] -= 1
        improper = (r2, c2, s2) if M[r2, c2, s2] < 0 else None
        done += 1
    return np.argmax(M, axis=2)


def random_loop_table(n: int, rng: np.random.Generator) -> np.ndarray:
    t = random_latin_square(n, rng)
    t = t[:, np.argsort(t[0])]
    t = t[np.argsort(t[:, 0])]
    return t


def random_fixing_perm(n: int, rng: np.random.Generator) -> np.ndarray:
    return np.concatenate([[0], 1 + rng.permutation(n - 1)])


# ---------------------------------------------------------------------------
# fixtures


@pytest.fixture
def n5() -> Loop:
    return loop_by_cayley_table(N5_ROWS)


@pytest.fixture
def z4() -> Loop:
    return cyclic_group(4)


@pytest.fixture
def v4() -> Loop:
    return elementary_abelian(2, 2)


@pytest.fixture(scope="session")
def small_loop_tables() -> list[np.ndarray]:
    """Tables of all loops of order at most 6, one per isomorphism class."""
    return [L.table.copy() for n in range(1, 7) for L in enumerate_loops(n)]


@pytest.fixture
def small_loops(small_loop_tables) -> list[Loop]:
    """Fresh loop objects (empty caches) for every table."""
    return [Loop(t, check=False) for t in small_loop_tables]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20070225)
