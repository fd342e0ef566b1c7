"""Permutations and permutation groups with a deterministic stabilizer chain.

Points are ``0 .. n-1``.  Products act on the right, as in GAP: ``p * q``
applies ``p`` first, then ``q``.  Cycle notation produced by :func:`str` is
1-based, matching the usual printed form ``(1 2 3)``.
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Sequence

import numpy as np

from .errors import DegreeMismatch, NotTransitive, PointOutOfRange

MAX_DEGREE = 1000


class Permutation:
    """An immutable bijection of ``{0, ..., n-1}``."""

    __slots__ = ("_a", "_hash")

    def __init__(self, images: Iterable[int]):
        a = np.array(list(images) if not isinstance(images, np.ndarray) else images, dtype=np.intp)
        if a.ndim != 1:
            raise ValueError("permutation images must be one-dimensional")
        n = a.shape[0]
        if n and (a.min() < 0 or a.max() >= n or np.unique(a).shape[0] != n):
            raise ValueError(f"not a permutation: {a.tolist()}")
        a.setflags(write=False)
        self._a = a
        self._hash = None

    @classmethod
    def _trusted(cls, a: np.ndarray) -> Permutation:
        p = cls.__new__(cls)
        a = np.asarray(a, dtype=np.intp)
        a.setflags(write=False)
        p._a = a
        p._hash = None
        return p

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls._trusted(np.arange(n))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        """Build from 0-based cycles, e.g. ``[(0, 1, 2)]``."""
        a = np.arange(degree)
        seen = set()
        for cyc in cycles:
            for i, x in enumerate(cyc):
                if x in seen or not 0 <= x < degree:
                    raise ValueError(f"bad cycle {cyc!r}")
                seen.add(x)
                a[x] = cyc[(i + 1) % len(cyc)]
        return cls._trusted(a)

    @classmethod
    def parse(cls, text: str, degree: int) -> Permutation:
        """Parse 1-based cycle notation such as ``"(1 2 3)(4,5)"``."""
        cycles = []
        body = text.strip()
        if body in ("", "()"):
            return cls.identity(degree)
        for m in re.finditer(r"\(([^()]*)\)|(\S)", body):
            if m.group(2) is not None:
                raise ValueError(f"could not parse permutation {text!r}")
            nums = [int(t) - 1 for t in re.split(r"[\s,]+", m.group(1).strip()) if t]
            if nums:
                cycles.append(nums)
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return self._a.shape[0]

    @property
    def array(self) -> np.ndarray:
        """Read-only image array."""
        return self._a

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self._a)

    def __call__(self, x: int) -> int:
        return int(self._a[x])

    def __len__(self) -> int:
        return self.degree

    def __mul__(self, other: Permutation) -> Permutation:
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
        return Permutation._trusted(other._a[self._a])

    def inverse(self) -> Permutation:
        inv = np.empty_like(self._a)
        inv[self._a] = np.arange(self.degree)
        return Permutation._trusted(inv)

    __invert__ = inverse

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self._a, other._a)

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._a.tobytes())
        return self._hash

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._a, np.arange(self.degree)))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 0-based, each starting at its least point."""
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for i in range(self.degree):
            if seen[i] or self._a[i] == i:
                continue
            cyc = [i]
            seen[i] = True
            j = int(self._a[i])
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = int(self._a[j])
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def moved_points(self) -> list[int]:
        return [int(i) for i in np.nonzero(self._a != np.arange(self.degree))[0]]

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


# ---------------------------------------------------------------------------
# stabilizer chain


class _Level:
    __slots__ = ("base", "gens", "orbit", "trans", "inv", "checked")

    def __init__(self, base: int, n: int):
        self.base = base
        self.gens: list[np.ndarray] = []
        self.orbit: list[int] = [base]
        ident = np.arange(n)
        self.trans: dict[int, np.ndarray] = {base: ident}
        self.inv: dict[int, np.ndarray] = {base: ident}
        self.checked: set[tuple[int, int]] = set()

    def extend_orbit(self) -> None:
        i = 0
        while i < len(self.orbit):
            b = self.orbit[i]
            t = self.trans[b]
            for s in self.gens:
                c = int(s[b])
                if c not in self.trans:
                    u = s[t]
                    inv = np.empty_like(u)
                    inv[u] = np.arange(u.shape[0])
                    self.trans[c] = u
                    self.inv[c] = inv
                    self.orbit.append(c)
            i += 1


class _Chain:
    """Mutable stabilizer chain built by deterministic Schreier-Sims.

    Base points are taken from ``base_prefix`` first, then the least point
    moved by the element that needs a new level.  Transversal entries are
    never replaced once set, so Schreier generators checked once stay valid.
    """

    def __init__(self, n: int, base_prefix: Sequence[int] = ()):
        if n > MAX_DEGREE:
            raise ValueError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")
        self.n = n
        self.levels: list[_Level] = [_Level(int(b), n) for b in base_prefix]
        self.ident = np.arange(n)

    def copy(self) -> _Chain:
        c = _Chain.__new__(_Chain)
        c.n = self.n
        c.ident = self.ident
        c.levels = []
        for lv in self.levels:
            nl = _Level.__new__(_Level)
            nl.base = lv.base
            nl.gens = list(lv.gens)
            nl.orbit = list(lv.orbit)
            nl.trans = dict(lv.trans)
            nl.inv = dict(lv.inv)
            nl.checked = set(lv.checked)
            c.levels.append(nl)
        return c

    def strip(self, h: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        for j in range(start, len(self.levels)):
            lv = self.levels[j]
            b = int(h[lv.base])
            if b not in lv.inv:
                return h, j
            h = lv.inv[b][h]
        return h, len(self.levels)

    def contains(self, g: np.ndarray) -> bool:
        h, j = self.strip(g)
        return j == len(self.levels) and bool(np.array_equal(h, self.ident))

    def _place(self, h: np.ndarray, lo: int, hi: int) -> None:
        # h fixes the base points of levels < hi
        if hi == len(self.levels):
            moved = np.nonzero(h != self.ident)[0]
            self.levels.append(_Level(int(moved[0]), self.n))
        for lv in self.levels[lo : hi + 1]:
            lv.gens.append(h)
            lv.extend_orbit()

    def add(self, g: np.ndarray) -> bool:
        """Adjoin ``g``; return False when it was already a member."""
        g = np.asarray(g, dtype=np.intp)
        if self.contains(g):
            return False
        j = 0
        while j < len(self.levels) and g[self.levels[j].base] == self.levels[j].base:
            j += 1
        self._place(g, 0, j)
        self._complete(j)
        return True

    def _complete(self, start: int) -> None:
        i = min(start, len(self.levels) - 1)
        while i >= 0:
            lv = self.levels[i]
            found = None
            for b in lv.orbit:
                tb = lv.trans[b]
                for gi, s in enumerate(lv.gens):
                    if (b, gi) in lv.checked:
                        continue
                    lv.checked.add((b, gi))
                    c = int(s[b])
                    sg = lv.inv[c][s[tb]]
                    h, j = self.strip(sg, i + 1)
                    if j < len(self.levels) or not np.array_equal(h, self.ident):
                        found = (h, j)
                        break
                if found:
                    break
            if found is None:
                i -= 1
                continue
            h, j = found
            self._place(h, i + 1, j)
            i = j

    def order(self) -> int:
        return math.prod(len(lv.orbit) for lv in self.levels)


# ---------------------------------------------------------------------------


def _as_array(p, n: int) -> np.ndarray:
    a = p.array if isinstance(p, Permutation) else np.asarray(p, dtype=np.intp)
    if a.shape[0] != n:
        raise DegreeMismatch(f"expected degree {n}, got {a.shape[0]}")
    return a


class PermGroup:
    """A finitely generated permutation group of fixed degree."""

    def __init__(
        self,
        generators: Iterable[Permutation | Sequence[int]] = (),
        degree: int | None = None,
        base: Sequence[int] = (),
        *,
        _chain: _Chain | None = None,
    ):
        gens = [g if isinstance(g, Permutation) else Permutation(g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatch(f"generator of degree {g.degree} in a group of degree {degree}")
        self.degree = degree
        self.generators: tuple[Permutation, ...] = tuple(gens)
        if _chain is None:
            _chain = _Chain(degree, base)
            for g in gens:
                _chain.add(g.array)
        self._chain = _chain
        self._order: int | None = None

    # -- basic queries -----------------------------------------------------

    def order(self) -> int:
        if self._order is None:
            self._order = self._chain.order()
        return self._order

    __len__ = order

    def __contains__(self, p) -> bool:
        return self._chain.contains(_as_array(p, self.degree))

    contains = __contains__

    @property
    def base(self) -> list[int]:
        return [lv.base for lv in self._chain.levels]

    @property
    def strong_generators(self) -> list[Permutation]:
        seen = {}
        for lv in self._chain.levels:
            for g in lv.gens:
                seen.setdefault(g.tobytes(), g)
        return [Permutation._trusted(g) for g in seen.values()]

    def small_generators(self) -> list[Permutation]:
        """Generators actually needed by the incremental construction."""
        if not self._chain.levels:
            return []
        return [Permutation._trusted(g) for g in self._chain.levels[0].gens]

    def is_trivial(self) -> bool:
        return self.order() == 1

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def _check_point(self, p: int) -> None:
        if not 0 <= p < self.degree:
            raise PointOutOfRange(f"point {p} outside 0..{self.degree - 1}")

    def orbit(self, point: int) -> list[int]:
        self._check_point(point)
        gens = [g.array for g in self.small_generators()]
        seen = {point}
        stack = [point]
        while stack:
            x = stack.pop()
            for g in gens:
                y = int(g[x])
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return sorted(seen)

    def orbits(self) -> list[list[int]]:
        out, done = [], set()
        for p in range(self.degree):
            if p not in done:
                o = self.orbit(p)
                done.update(o)
                out.append(o)
        return out

    def is_transitive(self) -> bool:
        return self.degree <= 1 or len(self.orbit(0)) == self.degree

    def stabilizer(self, point: int) -> PermGroup:
        self._check_point(point)
        chain = _Chain(self.degree, [point])
        for g in self.small_generators():
            chain.add(g.array)
        sub = _Chain.__new__(_Chain)
        sub.n = self.degree
        sub.ident = chain.ident
        sub.levels = chain.levels[1:]
        gens = [Permutation._trusted(g) for g in chain.levels[1].gens] if len(chain.levels) > 1 else []
        return PermGroup(gens, self.degree, _chain=sub)

    def is_abelian(self) -> bool:
        gens = self.small_generators()
        for i, a in enumerate(gens):
            for b in gens[i + 1 :]:
                if a * b != b * a:
                    return False
        return True

    def elements(self) -> list[Permutation]:
        """All elements, sorted by image tuple.  Only sensible for small groups."""
        elems = [self._chain.ident]
        for lv in reversed(self._chain.levels):
            elems = [t[e] for t in lv.trans.values() for e in elems]
        return sorted(Permutation._trusted(e) for e in elems)

    # -- blocks --------------------------------------------------------------

    def minimal_block_system(self, a: int, b: int) -> list[list[int]]:
        """Finest block system in which ``a`` and ``b`` share a block."""
        n = self.degree
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        gens = [g.array for g in self.small_generators()]
        parent[find(b)] = find(a)
        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            for g in gens:
                gx, gy = find(int(g[x])), find(int(g[y]))
                if gx != gy:
                    parent[gy] = gx
                    queue.append((int(g[x]), int(g[y])))
        blocks: dict[int, list[int]] = {}
        for x in range(n):
            blocks.setdefault(find(x), []).append(x)
        return sorted(blocks.values())

    def block_system(self) -> list[list[int]] | None:
        """A nontrivial block system seeded on the least possible pair ``{0, k}``.

        Returns None for primitive groups.
        """
        if not self.is_transitive():
            raise NotTransitive("primitivity is defined for transitive groups only")
        for k in range(1, self.degree):
            blocks = self.minimal_block_system(0, k)
            if len(blocks) > 1:
                return blocks
        return None

    def is_primitive(self) -> bool:
        return self.block_system() is None

    # -- series ----------------------------------------------------------------

    def _closure_chain(self) -> _Chain:
        return self._chain.copy()

    def normal_closure(self, elements: Iterable[Permutation]) -> PermGroup:
        """Smallest normal subgroup of ``self`` containing ``elements``."""
        chain = _Chain(self.degree)
        gens: list[np.ndarray] = []
        for e in elements:
            a = _as_array(e, self.degree)
            if chain.add(a):
                gens.append(a)
        conj = [(g.inverse().array, g.array) for g in self.small_generators()]
        i = 0
        while i < len(gens):
            h = gens[i]
            for ginv, g in conj:
                c = g[h[ginv]]
                if chain.add(c):
                    gens.append(c)
            i += 1
        return PermGroup([Permutation._trusted(g) for g in gens], self.degree, _chain=chain)

    def commutator_subgroup(self, other: PermGroup) -> PermGroup:
        """``[self, other]`` as a normal closure in the group generated by both."""
        comms = []
        for a in self.small_generators():
            ai = a.inverse()
            for b in other.small_generators():
                comms.append(ai * b.inverse() * a * b)
        ambient = PermGroup(self.small_generators() + other.small_generators(), self.degree)
        return ambient.normal_closure(comms)

    def derived_subgroup(self) -> PermGroup:
        return self.commutator_subgroup(self)

    def derived_series(self) -> list[PermGroup]:
        series = [self]
        while True:
            d = series[-1].derived_subgroup()
            if d.order() == series[-1].order():
                return series
            series.append(d)

    def lower_central_series(self) -> list[PermGroup]:
        series = [self]
        while True:
            comms = []
            for a in series[-1].small_generators():
                ai = a.inverse()
                for b in self.small_generators():
                    comms.append(ai * b.inverse() * a * b)
            nxt = self.normal_closure(comms)
            if nxt.order() == series[-1].order():
                return series
            series.append(nxt)

    def is_nilpotent(self) -> bool:
        return self.lower_central_series()[-1].is_trivial()

    def is_solvable(self) -> bool:
        return self.derived_series()[-1].is_trivial()

    def __repr__(self) -> str:
        return f"<permutation group of degree {self.degree} and order {self.order()}>"


def group_from(generators: Iterable[Permutation], degree: int | None = None) -> PermGroup:
    return PermGroup(generators, degree)


def naive_closure(generators: Sequence[Permutation], degree: int) -> set[Permutation]:
    """Every element of the generated group by breadth-first multiplication."""
    ident = Permutation.identity(degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen
