"""Enumeration of small loops and the binary catalog format.

Loops of order at most 6 are enumerated as normalized Latin squares and
reduced to one canonical table per isomorphism class.  The canonical table
is the lexicographically least relabelling over all permutations fixing the
neutral element.

Catalog files start with the magic ``LOOPCAT1``, then a one-byte name
length, the UTF-8 name, the order (2 bytes, big endian) and the count
(4 bytes, big endian).  Each table follows as a 2-byte big-endian length of
the prefix shared with the previous table (row-major), then the remaining
cells, one 0-based byte each.
"""

from __future__ import annotations

import struct
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .core import Loop, _is_associative, all_identity_fixing_perms, format_table
from .errors import BadMagic, IndexOutOfRange, MixedOrders, OrderTooLarge, TruncatedPayload, UnknownCatalog

MAGIC = b"LOOPCAT1"
MAX_ENUM_ORDER = 6


def normalized_latin_squares(n: int):
    """Yield every normalized Latin square of order ``n`` (rows and columns led by 0..n-1)."""
    if n < 1:
        raise ValueError("order must be positive")
    t = np.zeros((n, n), dtype=np.intp)
    t[0] = np.arange(n)
    t[:, 0] = np.arange(n)
    row_used = np.zeros((n, n), dtype=bool)
    col_used = np.zeros((n, n), dtype=bool)
    for i in range(n):
        row_used[i, i] = True
        col_used[i, i] = True
        row_used[0, i] = True
        col_used[0, i] = True
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]

    def fill(k):
        if k == len(cells):
            yield t.copy()
            return
        i, j = cells[k]
        for s in range(n):
            if row_used[i, s] or col_used[j, s]:
                continue
            t[i, j] = s
            row_used[i, s] = col_used[j, s] = True
            yield from fill(k + 1)
            row_used[i, s] = col_used[j, s] = False

    yield from fill(0)


@lru_cache(maxsize=None)
def _relabel_data(n: int) -> tuple[np.ndarray, np.ndarray]:
    P = all_identity_fixing_perms(n)
    Q = np.argsort(P, axis=1)
    return P, Q


def canonical_form(table: np.ndarray) -> np.ndarray:
    """Least row-major relabelling ``T'[p(i), p(j)] = p(T[i, j])`` over ``p`` fixing 0."""
    t = np.asarray(table, dtype=np.intp)
    n = t.shape[0]
    if n > 8:
        raise OrderTooLarge("canonical forms are only computed up to order 8")
    P, Q = _relabel_data(n)
    inner = t[Q[:, :, None], Q[:, None, :]]
    images = np.take_along_axis(P[:, None, :].repeat(n, axis=1), inner, axis=2)
    flat = images.reshape(len(P), n * n)
    best = np.lexsort(flat.T[::-1])[0]
    return flat[best].reshape(n, n)


def enumerate_loops(n: int) -> list[Loop]:
    """One loop per isomorphism class of order ``n``, sorted by canonical table."""
    if n > MAX_ENUM_ORDER:
        raise OrderTooLarge(f"enumeration is limited to order {MAX_ENUM_ORDER}")
    seen: dict[bytes, np.ndarray] = {}
    for t in normalized_latin_squares(n):
        c = canonical_form(t)
        seen.setdefault(c.tobytes(), c)
    tables = sorted(seen.values(), key=lambda c: tuple(c.ravel()))
    return [Loop(c, check=False) for c in tables]


# ---------------------------------------------------------------------------
# catalog files


def encode_catalog(loops, name: str) -> bytes:
    tables = [np.asarray(L.table if isinstance(L, Loop) else L, dtype=np.intp) for L in loops]
    if not tables:
        raise ValueError("cannot infer the order of an empty catalog")
    n = tables[0].shape[0]
    if any(t.shape != (n, n) for t in tables):
        raise MixedOrders("all tables in a catalog must have the same order")
    if n > 256:
        raise ValueError("cells are stored in one byte; order must be at most 256")
    raw_name = name.encode("utf-8")
    if len(raw_name) > 255:
        raise ValueError("catalog name too long")
    out = bytearray(MAGIC)
    out += bytes([len(raw_name)]) + raw_name
    out += struct.pack(">HI", n, len(tables))
    prev = None
    for t in tables:
        cells = t.ravel().astype(np.uint8).tobytes()
        shared = 0
        if prev is not None:
            while shared < len(cells) and cells[shared] == prev[shared]:
                shared += 1
        out += struct.pack(">H", shared) + cells[shared:]
        prev = cells
    return bytes(out)


def decode_catalog_header(data: bytes) -> tuple[str, int, list[np.ndarray]]:
    """Return ``(name, order, tables)``."""
    if data[: len(MAGIC)] != MAGIC:
        raise BadMagic("not a loop catalog")
    pos = len(MAGIC)

    def take(k):
        nonlocal pos
        if pos + k > len(data):
            raise TruncatedPayload(f"catalog ends at byte {len(data)}, needed {pos + k}")
        chunk = data[pos : pos + k]
        pos += k
        return chunk

    name = take(take(1)[0]).decode("utf-8")
    n, count = struct.unpack(">HI", take(6))
    size = n * n
    tables, prev = [], b""
    for _ in range(count):
        (shared,) = struct.unpack(">H", take(2))
        if shared > size or (shared and shared > len(prev)):
            raise TruncatedPayload("shared prefix longer than the previous table")
        cells = prev[:shared] + take(size - shared)
        tables.append(np.frombuffer(cells, dtype=np.uint8).astype(np.intp).reshape(n, n))
        prev = cells
    if pos != len(data):
        raise TruncatedPayload(f"{len(data) - pos} unexpected trailing bytes")
    return name, n, tables


def decode_catalog(data: bytes) -> list[Loop]:
    _, _, tables = decode_catalog_header(data)
    return [Loop(t) for t in tables]


def export_text(loops) -> str:
    """Tables in the plain text format read by :func:`loopkit.core.parse_raw_table`."""
    blocks = []
    for m, L in enumerate(loops, 1):
        blocks.append(f"# loop {m}\n" + format_table(L.table))
    return "\n\n".join(blocks) + "\n"


# ---------------------------------------------------------------------------
# shipped catalogs

SHIPPED = {"all-loops": range(1, MAX_ENUM_ORDER + 1)}
FILTERS = {"nonassociative-loops": ("all-loops", lambda L: not _is_associative(L.table))}


def shipped_file_name(name: str, n: int) -> str:
    return f"{name}-{n}.lcat"


def write_shipped_catalogs(directory) -> list[Path]:
    directory = Path(directory)
    written = []
    for name, orders in SHIPPED.items():
        for n in orders:
            path = directory / shipped_file_name(name, n)
            path.write_bytes(encode_catalog(enumerate_loops(n), name))
            written.append(path)
    return written


_LOADED: dict[tuple[str, int], list[Loop]] = {}


def register_catalog(data: bytes) -> tuple[str, int]:
    """Make a catalog available to :func:`catalog_get` under its own name."""
    name, n, tables = decode_catalog_header(data)
    _LOADED[(name, n)] = [Loop(t) for t in tables]
    return name, n


def catalog_loops(name: str, n: int) -> list[Loop]:
    if (name, n) in _LOADED:
        return _LOADED[(name, n)]
    if name in FILTERS:
        base, keep = FILTERS[name]
        loops = [L for L in catalog_loops(base, n) if keep(L)]
    elif name in SHIPPED and n in SHIPPED[name]:
        data = resources.files("loopkit").joinpath("data", shipped_file_name(name, n)).read_bytes()
        stored, order, tables = decode_catalog_header(data)
        if (stored, order) != (name, n):
            raise UnknownCatalog(f"shipped file for {name}/{n} holds {stored}/{order}")
        loops = [Loop(t, check=False) for t in tables]
    else:
        raise UnknownCatalog(f"no catalog {name!r} of order {n}")
    _LOADED[(name, n)] = loops
    return loops


def catalog_get(name: str, n: int, m: int) -> Loop:
    """The ``m``-th loop (1-based) of order ``n`` in catalog ``name``."""
    loops = catalog_loops(name, n)
    if not 1 <= m <= len(loops):
        raise IndexOutOfRange(f"{name} has {len(loops)} loops of order {n}; asked for {m}")
    return loops[m - 1]


def catalog_names() -> list[str]:
    return sorted(set(SHIPPED) | set(FILTERS) | {k for k, _ in _LOADED})
