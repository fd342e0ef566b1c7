"""Cayley tables, quasigroups, loops and their elements.

Elements are referred to by 0-based position.  A Cayley table is stored as an
``n x n`` numpy array with entries ``0 .. n-1``; text input and output use the
conventional 1-based symbols.

Subquasigroups keep a reference to the root quasigroup they were cut from and
their sorted positions inside it, so results can always be mapped back.
"""

from __future__ import annotations

import itertools
import math
import re
import threading
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .errors import (
    AttributeConflict,
    CosetsDoNotPartition,
    DegreeMismatch,
    EmptyGeneratingSet,
    EmptyList,
    ForeignElement,
    IdentityMoved,
    LoopRequired,
    NonSquare,
    NotASubloop,
    NotLatin,
    NotNormalized,
    NotPowerAssociative,
    SymbolMismatch,
)
from .perm import Permutation, PermGroup

# ---------------------------------------------------------------------------
# raw tables


@dataclass(frozen=True)
class RawTable:
    """A Latin square over arbitrary distinct integer symbols."""

    rows: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.rows)

    @property
    def symbols(self) -> tuple[int, ...]:
        return tuple(sorted(self.rows[0])) if self.rows else ()

    def canonical(self) -> np.ndarray:
        """Replace the i-th smallest symbol by ``i`` (0-based)."""
        lookup = {s: i for i, s in enumerate(self.symbols)}
        n = self.order
        return np.array([[lookup[x] for x in row] for row in self.rows], dtype=np.intp).reshape(n, n)

    def is_normalized(self) -> bool:
        sym = self.symbols
        return tuple(self.rows[0]) == sym and tuple(r[0] for r in self.rows) == sym


def raw_table(rows: Iterable[Iterable[int]]) -> RawTable:
    """Validate nested rows and wrap them as a :class:`RawTable`."""
    rows = tuple(tuple(int(x) for x in r) for r in rows)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NonSquare("a Cayley table must be a nonempty square array")
    symbols = None
    for i, r in enumerate(rows):
        if len(set(r)) != n:
            raise NotLatin(f"row {i + 1} repeats a symbol")
        s = frozenset(r)
        if symbols is None:
            symbols = s
        elif s != symbols:
            raise SymbolMismatch(f"row {i + 1} uses a different symbol set than row 1")
    for j in range(n):
        if len({r[j] for r in rows}) != n:
            raise NotLatin(f"column {j + 1} repeats a symbol")
    return RawTable(rows)


_TOKEN = re.compile(r"[^\s,\[\]]+")


def parse_raw_table(text: str) -> RawTable:
    """Read a Cayley table from text.

    Tokens are integers separated by whitespace and/or commas; square
    brackets are ignored and lines starting with ``#`` are comments.  The
    tokens are laid out row by row, regardless of where the line breaks fall.
    """
    tokens: list[int] = []
    for line in text.splitlines():
        if line.lstrip().startswith("#"):
            continue
        for tok in _TOKEN.findall(line):
            try:
                tokens.append(int(tok))
            except ValueError:
                raise NonSquare(f"non-integer token {tok!r}") from None
    n = math.isqrt(len(tokens))
    if n == 0 or n * n != len(tokens):
        raise NonSquare(f"{len(tokens)} tokens do not form a square table")
    return raw_table(tokens[i * n : (i + 1) * n] for i in range(n))


def read_table(path) -> RawTable:
    with open(path, encoding="utf-8") as fh:
        return parse_raw_table(fh.read())


def format_table(table: np.ndarray | Sequence[Sequence[int]], *, one_based: bool = True) -> str:
    """Render a canonical table in the text format accepted by :func:`parse_raw_table`."""
    t = np.asarray(table)
    shift = 1 if one_based else 0
    width = len(str(int(t.max()) + shift)) if t.size else 1
    return "\n".join(" ".join(str(int(x) + shift).rjust(width) for x in row) for row in t) + "\n"


def is_latin(table: np.ndarray) -> bool:
    t = np.asarray(table)
    n = t.shape[0]
    if t.shape != (n, n) or n == 0 or t.min() < 0 or t.max() >= n:
        return False
    want = np.arange(n)
    return bool((np.sort(t, axis=1) == want).all() and (np.sort(t, axis=0) == want[:, None]).all())


def is_normalized(table: np.ndarray) -> bool:
    t = np.asarray(table)
    want = np.arange(t.shape[0])
    return bool(np.array_equal(t[0], want) and np.array_equal(t[:, 0], want))


def normalize_table(table: np.ndarray) -> np.ndarray:
    """Normalized isotope of a canonical table.

    Columns are permuted so that the first row reads ``0..n-1``, then rows
    are permuted so that the first column does.
    """
    t = np.asarray(table)
    cols = np.argsort(t[0], kind="stable")
    t = t[:, cols]
    rows = np.argsort(t[:, 0], kind="stable")
    return t[rows, :].copy()


def _ldiv_table(t: np.ndarray) -> np.ndarray:
    n = t.shape[0]
    ld = np.empty_like(t)
    rows = np.arange(n)[:, None]
    ld[rows, t] = np.arange(n)[None, :]
    return ld


def _rdiv_table(t: np.ndarray) -> np.ndarray:
    n = t.shape[0]
    rd = np.empty_like(t)
    cols = np.arange(n)[None, :]
    rd[t, cols] = np.arange(n)[:, None]
    return rd


def closure_mask(t: np.ndarray, ld: np.ndarray, rd: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Close a boolean element mask under multiplication and both divisions."""
    mask = mask.copy()
    while True:
        idx = np.nonzero(mask)[0]
        if idx.size == 0:
            return mask
        grid = np.ix_(idx, idx)
        new = mask.copy()
        new[t[grid].ravel()] = True
        new[ld[grid].ravel()] = True
        new[rd[grid].ravel()] = True
        if np.array_equal(new, mask):
            return mask
        mask = new


# ---------------------------------------------------------------------------
# attribute storage


class AttributeStore:
    """Write-once memo of computed facts about a quasigroup.

    Each entry carries a provenance mark: ``"computed"`` for values obtained
    by direct calculation and ``"deduced"`` for values inferred from others.
    Rewriting an entry with the same value is a no-op; a different value
    raises :class:`AttributeConflict`.
    """

    def __init__(self):
        self._values: dict[str, Any] = {}
        self._provenance: dict[str, str] = {}
        self._lock = threading.Lock()

    def __contains__(self, name: str) -> bool:
        return name in self._values

    def __len__(self) -> int:
        return len(self._values)

    def get(self, name: str, default=None):
        return self._values.get(name, default)

    def provenance(self, name: str) -> str | None:
        return self._provenance.get(name)

    def set(self, name: str, value, provenance: str = "computed"):
        if provenance not in ("computed", "deduced"):
            raise ValueError(f"unknown provenance {provenance!r}")
        with self._lock:
            if name in self._values:
                old = self._values[name]
                if not _same(old, value):
                    raise AttributeConflict(f"attribute {name!r}: stored {old!r}, new {value!r}")
                return old
            self._values[name] = value
            self._provenance[name] = provenance
            return value

    def compute(self, name: str, fn: Callable[[], Any]):
        if name in self._values:
            return self._values[name]
        return self.set(name, fn())

    def items(self):
        with self._lock:
            return [(k, v, self._provenance[k]) for k, v in self._values.items()]

    def flags(self) -> dict[str, bool]:
        return {k: v for k, v in self._values.items() if isinstance(v, bool)}


def _same(a, b) -> bool:
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(a, b)
    if isinstance(a, PermGroup) and isinstance(b, PermGroup):
        return a.order() == b.order() and all(g in a for g in b.generators)
    try:
        return bool(a == b)
    except Exception:  # noqa: BLE001 - incomparable values are treated as different
        return a is b


# ---------------------------------------------------------------------------
# elements


class Element:
    """An element of a quasigroup family, identified by its root position."""

    __slots__ = ("family", "pos")

    def __init__(self, family: Quasigroup, pos: int):
        self.family = family
        self.pos = int(pos)

    def _check(self, other: Element) -> None:
        if not isinstance(other, Element) or other.family is not self.family:
            raise ForeignElement("elements belong to different quasigroups")

    def __mul__(self, other: Element) -> Element:
        self._check(other)
        return Element(self.family, self.family.table[self.pos, other.pos])

    def __truediv__(self, other: Element) -> Element:
        self._check(other)
        return Element(self.family, self.family.rdiv_table[self.pos, other.pos])

    def ldiv(self, other: Element) -> Element:
        """``self \\ other``."""
        self._check(other)
        return Element(self.family, self.family.ldiv_table[self.pos, other.pos])

    def __pow__(self, k: int) -> Element:
        fam = self.family
        if not isinstance(fam, Loop):
            raise LoopRequired("powers are defined in loops")
        if k < 0:
            k %= fam.element_order(self.pos)
        r = 0
        for _ in range(k):
            r = int(fam.table[r, self.pos])
        return Element(fam, r)

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and other.family is self.family and other.pos == self.pos

    def __hash__(self) -> int:
        return hash((id(self.family), self.pos))

    def __repr__(self) -> str:
        return f"{self.family._prefix}{self.pos + 1}"


# ---------------------------------------------------------------------------
# quasigroups and loops

# Display names by decreasing strength; the first flag known to be true wins.
_DISPLAY = [
    ("associative", "associative"),
    ("extra", "extra"),
    ("moufang", "Moufang"),
    ("cLoop", "C"),
    ("leftBruck", "left Bruck"),
    ("rightBruck", "right Bruck"),
    ("leftBol", "left Bol"),
    ("rightBol", "right Bol"),
    ("CC", "CC"),
    ("LCC", "LCC"),
    ("RCC", "RCC"),
    ("steinerQuasigroup", "Steiner"),
]


class Quasigroup:
    """A quasigroup given by its Cayley table."""

    _kind = "quasigroup"
    _prefix = "q"

    def __init__(
        self,
        table: np.ndarray | Sequence[Sequence[int]] | None,
        *,
        parent: Quasigroup | None = None,
        positions: Sequence[int] | None = None,
        check: bool = True,
    ):
        self.attrs = AttributeStore()
        self._ld = self._rd = None
        if parent is None:
            t = np.array(table, dtype=np.intp)
            if check and not is_latin(t):
                raise NotLatin("table is not a Latin square on 0..n-1")
            t.setflags(write=False)
            self._table = t
            self._parent = self
            self._positions = tuple(range(t.shape[0]))
        else:
            self._parent = parent._parent
            self._positions = tuple(int(p) for p in positions)
            self._table = None
            if list(self._positions) != sorted(set(self._positions)):
                raise ValueError("positions must be strictly increasing")

    # -- structure -----------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self._positions)

    size = order

    def __len__(self) -> int:
        return self.order

    @property
    def parent(self) -> Quasigroup:
        return self._parent

    @property
    def pos_in_parent(self) -> tuple[int, ...]:
        return self._positions

    def is_root(self) -> bool:
        return self._parent is self

    def has_cayley_table(self) -> bool:
        return self._table is not None

    @property
    def table(self) -> np.ndarray:
        """The canonical table relative to this object's own positions."""
        if self._table is None:
            pos = np.array(self._positions)
            sub = self._parent.table[np.ix_(pos, pos)]
            lookup = np.full(self._parent.order, -1, dtype=np.intp)
            lookup[pos] = np.arange(pos.shape[0])
            t = lookup[sub]
            t.setflags(write=False)
            self._table = t
        return self._table

    def cayley_table(self) -> list[list[int]]:
        """The table labelled by 1-based positions in the parent."""
        pos = np.array(self._positions)
        return (pos[self.table] + 1).tolist()

    @property
    def ldiv_table(self) -> np.ndarray:
        if self._ld is None:
            self._ld = _ldiv_table(self.table)
            self._ld.setflags(write=False)
        return self._ld

    @property
    def rdiv_table(self) -> np.ndarray:
        if self._rd is None:
            self._rd = _rdiv_table(self.table)
            self._rd.setflags(write=False)
        return self._rd

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Quasigroup)
            and other._parent is self._parent
            and other._positions == self._positions
        )

    def __hash__(self) -> int:
        return hash((id(self._parent), self._positions))

    def __repr__(self) -> str:
        label = self._kind
        for flag, name in _DISPLAY:
            if self.attrs.get(flag) is True:
                label = f"{name} {self._kind}"
                break
        return f"<{label} of order {self.order}>"

    # -- elements --------------------------------------------------------------

    def index(self, x: int | Element) -> int:
        """Relative position of an element, accepting an int or an Element."""
        if isinstance(x, Element):
            if x.family is not self._parent:
                raise ForeignElement(f"{x!r} is not an element of {self!r}")
            try:
                return self._positions.index(x.pos) if not self.is_root() else x.pos
            except ValueError:
                raise ForeignElement(f"{x!r} is not an element of {self!r}") from None
        i = int(x)
        if not 0 <= i < self.order:
            raise ForeignElement(f"index {i} outside 0..{self.order - 1}")
        return i

    def element(self, i: int) -> Element:
        return Element(self._parent, self._positions[self.index(i)])

    __getitem__ = element

    def elements(self) -> list[Element]:
        return [Element(self._parent, p) for p in self._positions]

    def __iter__(self):
        return iter(self.elements())

    def mul(self, x, y) -> int:
        return int(self.table[self.index(x), self.index(y)])

    def ldiv(self, x, y) -> int:
        """The unique ``z`` with ``x*z = y``."""
        return int(self.ldiv_table[self.index(x), self.index(y)])

    def rdiv(self, x, y) -> int:
        """The unique ``z`` with ``z*y = x``."""
        return int(self.rdiv_table[self.index(x), self.index(y)])

    def left_translation(self, x) -> Permutation:
        return Permutation._trusted(self.table[self.index(x)].copy())

    def right_translation(self, x) -> Permutation:
        return Permutation._trusted(self.table[:, self.index(x)].copy())

    def left_section(self) -> list[Permutation]:
        return [self.left_translation(i) for i in range(self.order)]

    def right_section(self) -> list[Permutation]:
        return [self.right_translation(i) for i in range(self.order)]

    def neutral_element(self) -> int | None:
        """Position of a two-sided neutral element, or None."""
        t = self.table
        want = np.arange(self.order)
        for k in range(self.order):
            if np.array_equal(t[k], want) and np.array_equal(t[:, k], want):
                return k
        return None


class Loop(Quasigroup):
    """A quasigroup whose element 0 is a two-sided neutral element."""

    _kind = "loop"
    _prefix = "l"

    def __init__(self, table=None, **kw):
        super().__init__(table, **kw)
        if self.is_root() and kw.get("check", True) and not is_normalized(self.table):
            raise NotNormalized("element 0 must be neutral in a loop table")

    @property
    def one(self) -> Element:
        return self.element(0)

    def left_inverse(self, x) -> int:
        return int(self.rdiv_table[0, self.index(x)])

    def right_inverse(self, x) -> int:
        return int(self.ldiv_table[self.index(x), 0])

    def inverse(self, x) -> int | None:
        a, b = self.left_inverse(x), self.right_inverse(x)
        return a if a == b else None

    def inverses(self, x) -> dict[str, int | None]:
        return {"left": self.left_inverse(x), "right": self.right_inverse(x), "two_sided": self.inverse(x)}

    def cyclic_closure(self, x) -> np.ndarray:
        mask = np.zeros(self.order, dtype=bool)
        mask[[0, self.index(x)]] = True
        return np.nonzero(closure_mask(self.table, self.ldiv_table, self.rdiv_table, mask))[0]

    def element_order(self, x) -> int:
        """Order of ``x``; requires the subloop generated by ``x`` to be a group."""
        x = self.index(x)
        cache = self.attrs.get("_element_orders")
        if cache is not None:
            if cache[x] < 0:
                raise NotPowerAssociative(f"the subloop generated by element {x} is not associative")
            return int(cache[x])
        sub = self.cyclic_closure(x)
        t = self.table
        st = t[np.ix_(sub, sub)]
        lookup = np.full(self.order, -1)
        lookup[sub] = np.arange(sub.size)
        rel = lookup[st]
        if not _is_associative(rel):
            raise NotPowerAssociative(f"the subloop generated by element {x} is not associative")
        return int(sub.size)

    def element_orders(self) -> np.ndarray:
        """Order of every element; raises unless the loop is power associative."""

        def compute():
            out = np.empty(self.order, dtype=np.intp)
            for x in range(self.order):
                try:
                    out[x] = self.element_order(x)
                except NotPowerAssociative:
                    out[x] = -1
            return out

        orders = self.attrs.compute("_element_orders", compute)
        if (orders < 0).any():
            raise NotPowerAssociative("loop is not power associative")
        return orders

    def exponent(self) -> int:
        return math.lcm(*(int(k) for k in self.element_orders()))

    def associator(self, x, y, z) -> int:
        """The unique ``u`` with ``(xy)z = (x(yz))u``."""
        x, y, z = self.index(x), self.index(y), self.index(z)
        t = self.table
        return int(self.ldiv_table[t[x, t[y, z]], t[t[x, y], z]])

    def commutator(self, x, y) -> int:
        """The unique ``v`` with ``xy = (yx)v``."""
        x, y = self.index(x), self.index(y)
        t = self.table
        return int(self.ldiv_table[t[y, x], t[x, y]])

    def associator_array(self) -> np.ndarray:
        t = self.table
        return self.ldiv_table[t[:, t], t[t]]

    def commutator_array(self) -> np.ndarray:
        t = self.table
        return self.ldiv_table[t.T, t]


def _is_associative(t: np.ndarray) -> bool:
    return bool(np.array_equal(t[t], t[:, t]))


# ---------------------------------------------------------------------------
# construction


def make_quasigroup(t: RawTable | Sequence[Sequence[int]], kind: str = "quasigroup") -> Quasigroup:
    """Create a quasigroup or loop from a Cayley table over arbitrary symbols."""
    if not isinstance(t, RawTable):
        t = raw_table(t)
    if kind == "loop":
        if not t.is_normalized():
            raise NotNormalized("first row and column must list the symbols in increasing order")
        return Loop(t.canonical(), check=False)
    if kind != "quasigroup":
        raise ValueError(f"unknown kind {kind!r}")
    return Quasigroup(t.canonical(), check=False)


def quasigroup_by_cayley_table(t) -> Quasigroup:
    return make_quasigroup(t, "quasigroup")


def loop_by_cayley_table(t) -> Loop:
    return make_quasigroup(t, "loop")


def isomorphic_copy_by_perm(Q: Quasigroup, p: Permutation | Sequence[int]) -> Quasigroup:
    """Copy of ``Q`` relabelled by ``p``: the new table satisfies ``T'[p(i), p(j)] = p(T[i, j])``."""
    a = p.array if isinstance(p, Permutation) else np.asarray(p, dtype=np.intp)
    if a.shape[0] != Q.order:
        raise DegreeMismatch(f"permutation of degree {a.shape[0]} for order {Q.order}")
    t = Q.table
    new = np.empty_like(t)
    new[a[:, None], a[None, :]] = a[t]
    if isinstance(Q, Loop):
        if a[0] != 0:
            raise IdentityMoved("a relabelling of a loop must fix the neutral element")
        return Loop(new, check=False)
    return Quasigroup(new, check=False)


def _transposition(n: int, k: int) -> np.ndarray:
    a = np.arange(n)
    a[[0, k]] = a[[k, 0]]
    return a


def principal_isotope(Q: Quasigroup, f, g) -> Loop:
    """The principal loop isotope with ``x o y = (x/g)(f\\y)``.

    Its neutral element ``f*g`` is moved to position 0 by a transposition.
    """
    f, g = Q.index(f), Q.index(g)
    t = Q.table
    new = t[Q.rdiv_table[:, g][:, None], Q.ldiv_table[f][None, :]]
    e = int(t[f, g])
    a = _transposition(Q.order, e)
    out = np.empty_like(new)
    out[a[:, None], a[None, :]] = a[new]
    return Loop(out, check=False)


def as_quasigroup(Q: Quasigroup) -> Quasigroup:
    return Quasigroup(Q.table, check=False)


def as_loop(Q: Quasigroup | PermGroup) -> Loop:
    """Convert a quasigroup (or a permutation group) to a loop."""
    if isinstance(Q, PermGroup):
        Q = _quasigroup_from_group(Q)
    if isinstance(Q, Loop):
        return Q
    k = Q.neutral_element()
    if k is None:
        return principal_isotope(Q, 0, 0)
    a = _transposition(Q.order, k)
    t = Q.table
    out = np.empty_like(t)
    out[a[:, None], a[None, :]] = a[t]
    return Loop(out, check=False)


def _quasigroup_from_group(G: PermGroup) -> Quasigroup:
    elems = G.elements()
    lookup = {e: i for i, e in enumerate(elems)}
    t = np.array([[lookup[x * y] for y in elems] for x in elems], dtype=np.intp)
    return Quasigroup(t, check=False)


def direct_product(*factors: Quasigroup) -> Quasigroup:
    """Direct product; tuple ``(i1, ..., ik)`` sits at its lexicographic rank."""
    if len(factors) == 1 and not isinstance(factors[0], Quasigroup):
        factors = tuple(factors[0])
    if not factors:
        raise EmptyList("direct product of an empty list")
    if len(factors) == 1:
        return factors[0]
    t = factors[0].table
    for F in factors[1:]:
        m = F.order
        u = F.table
        t = (t[:, None, :, None] * m + u[None, :, None, :]).reshape(t.shape[0] * m, t.shape[0] * m)
    cls = Loop if all(isinstance(F, Loop) for F in factors) else Quasigroup
    return cls(t, check=False)


# ---------------------------------------------------------------------------
# subobjects


def _relative(Q: Quasigroup, S: Iterable) -> list[int]:
    return [Q.index(x) for x in S]


def _sub(Q: Quasigroup, rel: Iterable[int], cls=None) -> Quasigroup:
    rel = sorted(int(i) for i in rel)
    if cls is None:
        cls = Loop if isinstance(Q, Loop) else Quasigroup
    if rel == list(range(Q.order)):
        if cls is type(Q) or (cls is Quasigroup and not isinstance(Q, Loop)):
            return Q
    pos = [Q.pos_in_parent[i] for i in rel]
    return cls(None, parent=Q.parent, positions=pos)


def closure(Q: Quasigroup, S: Iterable[int]) -> np.ndarray:
    """Sorted relative positions of the subquasigroup generated by ``S``."""
    mask = np.zeros(Q.order, dtype=bool)
    mask[list(S)] = True
    return np.nonzero(closure_mask(Q.table, Q.ldiv_table, Q.rdiv_table, mask))[0]


def subquasigroup(Q: Quasigroup, S: Iterable) -> Quasigroup:
    """The subquasigroup generated by ``S``, attached to ``Q``'s parent."""
    rel = _relative(Q, S)
    if not rel:
        raise EmptyGeneratingSet("cannot generate a subquasigroup from nothing")
    cls = Loop if isinstance(Q, Loop) else Quasigroup
    return _sub(Q, closure(Q, rel), cls)


def subloop(L: Loop, S: Iterable) -> Loop:
    if not isinstance(L, Loop):
        raise LoopRequired("subloops are taken in loops")
    rel = _relative(L, S)
    if not rel:
        raise EmptyGeneratingSet("cannot generate a subloop from nothing")
    return _sub(L, closure(L, rel + [0]), Loop)


def trivial_subloop(L: Loop) -> Loop:
    return _sub(L, [0], Loop)


def positions_in(L: Quasigroup, S: Quasigroup) -> list[int]:
    """Relative positions of the elements of ``S`` inside ``L``."""
    if S.parent is not L.parent:
        raise NotASubloop(f"{S!r} and {L!r} have different parents")
    lookup = {p: i for i, p in enumerate(L.pos_in_parent)}
    try:
        return [lookup[p] for p in S.pos_in_parent]
    except KeyError:
        raise NotASubloop(f"{S!r} is not contained in {L!r}") from None


def is_subloop(L: Loop, S: Quasigroup) -> bool:
    try:
        rel = positions_in(L, S)
    except NotASubloop:
        return False
    return 0 in rel and len(closure(L, rel)) == len(rel)


def as_sub(L: Loop, S) -> list[int]:
    """Accept a subloop object or an iterable of positions; return relative positions."""
    if isinstance(S, Quasigroup):
        rel = positions_in(L, S)
    else:
        rel = sorted({L.index(x) for x in S})
    if 0 not in rel or len(closure(L, rel)) != len(rel):
        raise NotASubloop("the given elements do not form a subloop")
    return rel


def all_subloops(L: Loop) -> list[Loop]:
    """Every subloop once, sorted by order and then by positions."""
    n = L.order
    seen = {(0,)}
    frontier = [np.array([0])]
    while frontier:
        nxt = []
        for H in frontier:
            inside = np.zeros(n, dtype=bool)
            inside[H] = True
            for x in range(n):
                if inside[x]:
                    continue
                K = closure(L, np.append(H, x))
                key = tuple(int(i) for i in K)
                if key not in seen:
                    seen.add(key)
                    nxt.append(K)
        frontier = nxt
    keys = sorted(seen, key=lambda k: (len(k), k))
    return [_sub(L, k, Loop) for k in keys]


def right_cosets(L: Loop, S) -> tuple[list[list[int]], list[int]]:
    """Right cosets ``S*x`` built greedily from the least uncovered element.

    Returns ``(cosets, transversal)``.  Raises :class:`CosetsDoNotPartition`
    if two cosets overlap, which can happen in loops.
    """
    rel = as_sub(L, S)
    t = L.table
    covered = np.zeros(L.order, dtype=bool)
    cosets, reps = [], []
    for x in range(L.order):
        if covered[x]:
            continue
        c = np.unique(t[rel, x])
        if covered[c].any():
            raise CosetsDoNotPartition(f"coset of representative {x} meets an earlier coset")
        covered[c] = True
        cosets.append([int(i) for i in c])
        reps.append(x)
    return cosets, reps


def right_transversal(L: Loop, S) -> list[int]:
    return right_cosets(L, S)[1]


def isomorphic_copy_by_normal_subloop(L: Loop, S) -> Loop:
    """Copy of ``L`` where ``S`` occupies the first ``|S|`` positions.

    The remaining positions are filled coset by coset, cosets ordered by least
    element, each coset ``S*x`` listed as ``s*x`` for ``s`` in ``S`` order.
    """
    from .structure import is_normal
    from .errors import NotNormal

    rel = as_sub(L, S)
    if not is_normal(L, rel):
        raise NotNormal("the subloop is not normal")
    _, reps = right_cosets(L, rel)
    order = [int(L.table[s, x]) for x in reps for s in rel]
    p = np.empty(L.order, dtype=np.intp)
    p[np.array(order)] = np.arange(L.order)
    return isomorphic_copy_by_perm(L, p)


def generators_smallest(Q: Quasigroup) -> list[int]:
    """Greedy generating set: repeatedly adjoin the least element not yet generated."""
    n = Q.order
    mask = np.zeros(n, dtype=bool)
    if isinstance(Q, Loop):
        mask[0] = True
    gens = []
    while not mask.all():
        x = int(np.argmin(mask))
        gens.append(x)
        mask[x] = True
        mask = closure_mask(Q.table, Q.ldiv_table, Q.rdiv_table, mask)
    return gens


def cyclic_group(n: int) -> Loop:
    """The cyclic group of order ``n`` as a loop (``i*j = i+j mod n``)."""
    i = np.arange(n)
    return Loop((i[:, None] + i[None, :]) % n, check=False)


def elementary_abelian(p: int, k: int) -> Loop:
    return direct_product(*([cyclic_group(p)] * k)) if k > 1 else cyclic_group(p ** k)


def random_relabelling(n: int, rng: np.random.Generator, fix_zero: bool = True) -> Permutation:
    if fix_zero:
        rest = rng.permutation(np.arange(1, n)) if n > 1 else np.array([], dtype=np.intp)
        return Permutation._trusted(np.concatenate([[0], rest]).astype(np.intp))
    return Permutation._trusted(rng.permutation(n))


def all_identity_fixing_perms(n: int) -> np.ndarray:
    """All permutations of ``0..n-1`` fixing 0, as rows of an array."""
    rest = list(itertools.permutations(range(1, n)))
    return np.array([(0, *r) for r in rest], dtype=np.intp).reshape(len(rest), n)
