"""Isomorphisms, automorphisms and isotopisms of loops.

Elements are first sorted into classes by a tuple of isomorphism
invariants.  An isomorphism search then maps a small generating set of the
first loop, generator by generator, onto elements of matching classes of
the second loop; the images of the remaining elements follow from recorded
products and are checked as they are produced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Loop, Quasigroup, closure_mask, principal_isotope
from .perm import PermGroup, Permutation


@dataclass
class Signature:
    """Per-element invariant tuples of a quasigroup.

    ``tuples[x]`` is ``(phi1, phi2, phi3, ((k, phi4_k), ...))`` where
    ``phi1`` is the size of the subloop generated by ``x``, ``phi2`` and
    ``phi3`` count square and fourth roots of ``x``, and ``phi4_k`` counts
    elements of cyclic size ``k`` commuting with ``x`` (nonzero ``k`` only).
    """

    tuples: list[tuple]
    classes: dict[tuple, list[int]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.classes:
            for x, tup in enumerate(self.tuples):
                self.classes.setdefault(tup, []).append(x)

    @property
    def profile(self) -> list[tuple[tuple, int]]:
        return sorted((tup, len(xs)) for tup, xs in self.classes.items())

    def class_sizes(self) -> list[int]:
        return sorted(len(xs) for xs in self.classes.values())


def _cyclic_sizes(Q: Quasigroup) -> np.ndarray:
    n = Q.order
    t, ld, rd = Q.table, Q.ldiv_table, Q.rdiv_table
    out = np.empty(n, dtype=np.intp)
    for x in range(n):
        mask = np.zeros(n, dtype=bool)
        mask[x] = True
        out[x] = closure_mask(t, ld, rd, mask).sum()
    return out


def invariant_signature(Q: Quasigroup) -> Signature:
    """Invariant tuples for every element; cached on ``Q``."""

    def compute():
        n = Q.order
        t = Q.table
        size = _cyclic_sizes(Q)
        sq = t[np.arange(n), np.arange(n)]
        phi2 = np.bincount(sq, minlength=n)
        phi3 = np.bincount(sq[sq], minlength=n)
        commute = t == t.T
        ks = sorted(set(size.tolist()))
        phi4 = {k: commute[:, size == k].sum(axis=1) for k in ks}
        tuples = []
        for x in range(n):
            c = tuple((k, int(phi4[k][x])) for k in ks if phi4[k][x])
            tuples.append((int(size[x]), int(phi2[x]), int(phi3[x]), c))
        return Signature(tuples)

    return Q.attrs.compute("_signature", compute)


# ---------------------------------------------------------------------------
# search plan


@dataclass
class _Plan:
    gens: list[int]
    # for each generator: the elements it adds to the closure, each with the
    # pair whose product produced it
    steps: list[list[tuple[int, int, int]]]
    # elements known before each generator is placed
    known_before: list[np.ndarray]


def _plan(Q: Quasigroup, sig: Signature) -> _Plan:
    cached = Q.attrs.get("_iso_plan")
    if cached is not None:
        return cached
    n = Q.order
    t = Q.table
    inside = np.zeros(n, dtype=bool)
    known: list[int] = []
    gens, steps, before = [], [], []
    class_size = [len(sig.classes[tup]) for tup in sig.tuples]
    while len(known) < n:
        g = min((x for x in range(n) if not inside[x]), key=lambda x: (class_size[x], x))
        before.append(np.array(known, dtype=np.intp))
        gens.append(g)
        inside[g] = True
        known.append(g)
        added: list[tuple[int, int, int]] = []
        frontier = [g]
        while frontier:
            x = frontier.pop(0)
            for y in list(known):
                for a, b in ((x, y), (y, x)):
                    c = int(t[a, b])
                    if not inside[c]:
                        inside[c] = True
                        known.append(c)
                        added.append((c, a, b))
                        frontier.append(c)
        steps.append(added)
    plan = _Plan(gens, steps, before)
    Q.attrs.set("_iso_plan", plan)
    return plan


def _search(L: Quasigroup, M: Quasigroup, plan: _Plan, cls_L: np.ndarray, cls_M: np.ndarray, fixed=None):
    """Yield maps (as arrays) that are isomorphisms ``L -> M``.

    ``fixed`` optionally forces the images of the first generators.
    """
    n = L.order
    tL, tM = L.table, M.table
    image = np.full(n, -1, dtype=np.intp)
    used = np.zeros(n, dtype=bool)
    fixed = fixed or {}
    by_class: dict[int, list[int]] = {}
    for y in range(n):
        by_class.setdefault(int(cls_M[y]), []).append(y)

    def place(level):
        if level == len(plan.gens):
            if np.array_equal(image[tL], tM[image[:, None], image[None, :]]):
                yield image.copy()
            return
        g = plan.gens[level]
        cands = [fixed[level]] if level in fixed else by_class.get(int(cls_L[g]), [])
        prev = plan.known_before[level]
        for c in cands:
            if used[c] or cls_M[c] != cls_L[g]:
                continue
            image[g] = c
            used[c] = True
            done = [g]
            ok = True
            for e, a, b in plan.steps[level]:
                img = tM[image[a], image[b]]
                if used[img] or cls_M[img] != cls_L[e]:
                    ok = False
                    break
                image[e] = img
                used[img] = True
                done.append(e)
            if ok:
                new = np.array(done, dtype=np.intp)
                allk = np.concatenate([prev, new])
                ok = np.array_equal(image[tL[np.ix_(new, allk)]], tM[np.ix_(image[new], image[allk])]) and np.array_equal(
                    image[tL[np.ix_(allk, new)]], tM[np.ix_(image[allk], image[new])]
                )
            if ok:
                yield from place(level + 1)
            for e in done:
                used[image[e]] = False
                image[e] = -1

    yield from place(0)


def _class_ids(sL: Signature, sM: Signature) -> tuple[np.ndarray, np.ndarray]:
    ids: dict[tuple, int] = {}
    for tup in sL.tuples + sM.tuples:
        ids.setdefault(tup, len(ids))
    return np.array([ids[t] for t in sL.tuples]), np.array([ids[t] for t in sM.tuples])


def isomorphism_between(L: Quasigroup, M: Quasigroup) -> Permutation | None:
    """An isomorphism ``p`` with ``p(xy) = p(x)p(y)``, or None if there is none."""
    if L.order != M.order:
        return None
    sL, sM = invariant_signature(L), invariant_signature(M)
    if sL.profile != sM.profile:
        return None
    cL, cM = _class_ids(sL, sM)
    for image in _search(L, M, _plan(L, sL), cL, cM):
        return Permutation._trusted(image)
    return None


def are_isomorphic(L: Quasigroup, M: Quasigroup) -> bool:
    return isomorphism_between(L, M) is not None


def _orbit(point: int, gens: list[np.ndarray]) -> set[int]:
    orbit, todo = {point}, [point]
    while todo:
        x = todo.pop()
        for g in gens:
            y = int(g[x])
            if y not in orbit:
                orbit.add(y)
                todo.append(y)
    return orbit


def automorphism_group(L: Quasigroup) -> PermGroup:
    """The automorphism group, as a permutation group on positions.

    Works down a chain of stabilizers of the search generators: at each
    level one automorphism is found for every new image of the generator
    that the automorphisms found so far cannot already reach.
    """

    def compute():
        n = L.order
        sig = invariant_signature(L)
        plan = _plan(L, sig)
        cls, _ = _class_ids(sig, sig)
        found: list[np.ndarray] = []
        gens = plan.gens
        for level in range(len(gens) - 1, -1, -1):
            g = gens[level]
            fixed = {j: gens[j] for j in range(level)}
            for c in sig.classes[sig.tuples[g]]:
                if c in _orbit(g, found):
                    continue
                fixed[level] = c
                for image in _search(L, L, plan, cls, cls, fixed):
                    found.append(image)
                    break
        return PermGroup([Permutation._trusted(a) for a in found], degree=n)

    return L.attrs.compute("_automorphism_group", compute)


def up_to_isomorphism(loops: list) -> list:
    """First representative of each isomorphism class, in input order."""
    kept: list = []
    buckets: dict[tuple, list] = {}
    for L in loops:
        key = (L.order, repr(invariant_signature(L).profile))
        bucket = buckets.setdefault(key, [])
        if any(isomorphism_between(K, L) is not None for K in bucket):
            continue
        bucket.append(L)
        kept.append(L)
    return kept


# ---------------------------------------------------------------------------
# isotopism


def _is_isotopism(L: Quasigroup, M: Quasigroup, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> bool:
    return bool(np.array_equal(M.table[a[:, None], b[None, :]], c[L.table]))


def isotopism_between(L: Loop, M: Loop) -> tuple[Permutation, Permutation, Permutation] | None:
    """A triple ``(alpha, beta, gamma)`` with ``alpha(x) beta(y) = gamma(xy)``, or None.

    Every loop isotope of ``L`` is isomorphic to a principal isotope, so it
    suffices to test each principal isotope ``(f, g)`` against ``M``.
    """
    if L.order != M.order:
        return None
    n = L.order
    t = L.table
    profile = invariant_signature(M).profile
    for f in range(n):
        for g in range(n):
            P = principal_isotope(L, f, g)
            if invariant_signature(P).profile != profile:
                continue
            phi = isomorphism_between(P, M)
            if phi is None:
                continue
            # P is (x/g)(f\y) renumbered by swapping 0 with f*g
            swap = np.arange(n)
            e = int(t[f, g])
            swap[[0, e]] = swap[[e, 0]]
            gamma = phi.array[swap]
            alpha = gamma[t[:, g]]
            beta = gamma[t[f]]
            if not _is_isotopism(L, M, alpha, beta, gamma):
                raise AssertionError("isotopism failed verification")
            return Permutation._trusted(alpha), Permutation._trusted(beta), Permutation._trusted(gamma)
    return None


def are_isotopic(L: Loop, M: Loop) -> bool:
    return isotopism_between(L, M) is not None


def up_to_isotopism(loops: list) -> list:
    kept: list = []
    for L in loops:
        if not any(K.order == L.order and isotopism_between(K, L) is not None for K in kept):
            kept.append(L)
    return kept
