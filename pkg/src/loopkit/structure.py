"""Multiplication groups, nuclei, normal subloops, factor loops and series.

Most questions about normality and simplicity are answered through the
permutation groups generated by translations.  Results are memoized in the
owner's attribute store.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .core import Loop, Quasigroup, _sub, as_sub, closure, closure_mask, right_cosets
from .errors import LoopRequired, NotNormal
from .perm import Permutation, PermGroup

_SIDES = ("left", "right", "full")


def _require_loop(L) -> None:
    if not isinstance(L, Loop):
        raise LoopRequired(f"{L!r} is not a loop")


# ---------------------------------------------------------------------------
# permutation groups


def multiplication_group(Q: Quasigroup, side: str = "full", relative_to=None) -> PermGroup:
    """Group generated by the left, right, or all translations of ``Q``.

    With ``relative_to=S`` only translations by elements of the subloop ``S``
    are used; they still act on all of ``Q``.
    """
    if side not in _SIDES:
        raise ValueError(f"side must be one of {_SIDES}")
    n = Q.order
    t = Q.table
    if relative_to is not None:
        _require_loop(Q)
        xs = as_sub(Q, relative_to)
    else:
        xs = range(n)

    def build():
        gens = []
        if side in ("left", "full"):
            gens += [Permutation._trusted(t[x].copy()) for x in xs]
        if side in ("right", "full"):
            gens += [Permutation._trusted(t[:, x].copy()) for x in xs]
        return PermGroup(gens, n)

    if relative_to is not None:
        return build()
    return Q.attrs.compute(f"Mlt_{side}", build)


def left_inner_mappings(L: Loop) -> list[Permutation]:
    """All maps ``z -> (yx) \\ (y(xz))``."""
    t, ld = L.table, L.ldiv_table
    out = {}
    for x in range(L.order):
        for y in range(L.order):
            p = ld[t[y, x]][t[y][t[x]]]
            out.setdefault(p.tobytes(), p)
    return [Permutation._trusted(p) for p in out.values()]


def right_inner_mappings(L: Loop) -> list[Permutation]:
    """All maps ``z -> ((zx)y) / (xy)``."""
    t, rd = L.table, L.rdiv_table
    out = {}
    for x in range(L.order):
        for y in range(L.order):
            p = rd[t[t[:, x], y], t[x, y]]
            out.setdefault(p.tobytes(), p)
    return [Permutation._trusted(p) for p in out.values()]


def middle_inner_mappings(L: Loop) -> list[Permutation]:
    """All maps ``z -> x \\ (zx)``."""
    t, ld = L.table, L.ldiv_table
    out = {}
    for x in range(L.order):
        p = ld[x][t[:, x]]
        out.setdefault(p.tobytes(), p)
    return [Permutation._trusted(p) for p in out.values()]


def inner_mapping_group(L: Loop, side: str = "full") -> PermGroup:
    """Inner mapping group; ``full`` is the stabilizer of the neutral element in Mlt."""
    _require_loop(L)
    if side == "full":
        return L.attrs.compute("Inn_full", lambda: multiplication_group(L).stabilizer(0))
    if side == "left":
        return L.attrs.compute("Inn_left", lambda: PermGroup(left_inner_mappings(L), L.order))
    if side == "right":
        return L.attrs.compute("Inn_right", lambda: PermGroup(right_inner_mappings(L), L.order))
    raise ValueError(f"side must be one of {_SIDES}")


# ---------------------------------------------------------------------------
# nuclei, commutant, center


def _assoc_mask(Q: Quasigroup) -> np.ndarray:
    t = Q.table
    return t[t] == t[:, t]


def _as_result(Q: Quasigroup, mask: np.ndarray):
    rel = np.nonzero(mask)[0]
    if isinstance(Q, Loop):
        return _sub(Q, rel, Loop)
    return [int(i) for i in rel]


def left_nucleus(Q: Quasigroup):
    return Q.attrs.compute("leftNucleus", lambda: _as_result(Q, _assoc_mask(Q).all(axis=(1, 2))))


def middle_nucleus(Q: Quasigroup):
    return Q.attrs.compute("middleNucleus", lambda: _as_result(Q, _assoc_mask(Q).all(axis=(0, 2))))


def right_nucleus(Q: Quasigroup):
    return Q.attrs.compute("rightNucleus", lambda: _as_result(Q, _assoc_mask(Q).all(axis=(0, 1))))


def _positions(Q, obj) -> set[int]:
    if isinstance(obj, Quasigroup):
        lookup = {p: i for i, p in enumerate(Q.pos_in_parent)}
        return {lookup[p] for p in obj.pos_in_parent}
    return set(obj)


def nucleus(Q: Quasigroup):
    def compute():
        a = _assoc_mask(Q)
        return _as_result(Q, a.all(axis=(1, 2)) & a.all(axis=(0, 2)) & a.all(axis=(0, 1)))

    return Q.attrs.compute("nucleus", compute)


def commutant(Q: Quasigroup):
    def compute():
        t = Q.table
        mask = (t == t.T).all(axis=1)
        return [int(i) for i in np.nonzero(mask)[0]]

    return Q.attrs.compute("commutant", compute)


def center(Q: Quasigroup):
    def compute():
        mask = np.zeros(Q.order, dtype=bool)
        mask[commutant(Q)] = True
        nuc = np.zeros(Q.order, dtype=bool)
        nuc[sorted(_positions(Q, nucleus(Q)))] = True
        return _as_result(Q, mask & nuc)

    return Q.attrs.compute("center", compute)


def central_parts(Q: Quasigroup, kind: str):
    funcs = {
        "leftNucleus": left_nucleus,
        "rightNucleus": right_nucleus,
        "middleNucleus": middle_nucleus,
        "nucleus": nucleus,
        "commutant": commutant,
        "center": center,
    }
    try:
        return funcs[kind](Q)
    except KeyError:
        raise ValueError(f"unknown kind {kind!r}") from None


def rel_positions(L: Quasigroup, S) -> list[int]:
    """Relative positions for a subloop object or an iterable of positions."""
    return sorted(_positions(L, S))


# ---------------------------------------------------------------------------
# normality


def _inn_arrays(L: Loop) -> list[np.ndarray]:
    return [g.array for g in inner_mapping_group(L).small_generators()]


def is_normal(L: Loop, S) -> bool:
    """True iff ``S`` is mapped onto itself by every inner mapping of ``L``."""
    _require_loop(L)
    rel = np.array(as_sub(L, S))
    mask = np.zeros(L.order, dtype=bool)
    mask[rel] = True
    return all(mask[g[rel]].all() for g in _inn_arrays(L))


def normal_closure(L: Loop, S: Iterable[int]) -> Loop:
    """Smallest normal subloop of ``L`` containing the positions ``S``."""
    _require_loop(L)
    if isinstance(S, Quasigroup):
        S = rel_positions(L, S)
    mask = np.zeros(L.order, dtype=bool)
    mask[0] = True
    mask[[L.index(x) for x in S]] = True
    gens = _inn_arrays(L)
    t, ld, rd = L.table, L.ldiv_table, L.rdiv_table
    while True:
        mask = closure_mask(t, ld, rd, mask)
        idx = np.nonzero(mask)[0]
        new = mask.copy()
        for g in gens:
            new[g[idx]] = True
        if np.array_equal(new, mask):
            return _sub(L, idx, Loop)
        mask = new


def all_normal_subloops(L: Loop) -> list[Loop]:
    from .core import all_subloops

    return [S for S in all_subloops(L) if is_normal(L, S)]


def is_simple(L: Loop) -> bool:
    """A loop is simple iff its multiplication group is primitive."""
    _require_loop(L)
    if L.order == 1:
        return False
    return L.attrs.compute("simple", lambda: multiplication_group(L).is_primitive())


# ---------------------------------------------------------------------------
# factor loops


def natural_homomorphism(L: Loop, N) -> np.ndarray:
    """Map each position of ``L`` to its coset index in ``L/N``."""
    rel = as_sub(L, N)
    if not is_normal(L, rel):
        raise NotNormal("the subloop is not normal")
    cosets, _ = right_cosets(L, rel)
    cmap = np.empty(L.order, dtype=np.intp)
    for i, c in enumerate(cosets):
        cmap[c] = i
    return cmap


def factor_loop(L: Loop, N) -> Loop:
    """``L/N`` with cosets ordered by least representative."""
    return factor_loop_with_map(L, N)[0]


def factor_loop_with_map(L: Loop, N) -> tuple[Loop, np.ndarray]:
    cmap = natural_homomorphism(L, N)
    k = int(cmap.max()) + 1
    reps = np.array([int(np.argmax(cmap == i)) for i in range(k)])
    t = L.table
    ft = cmap[t[np.ix_(reps, reps)]]
    if not np.array_equal(ft[cmap[:, None], cmap[None, :]], cmap[t]):
        raise NotNormal("coset multiplication is not well defined")
    return Loop(ft, check=False), cmap


# ---------------------------------------------------------------------------
# verbal subloops


def _unique(a: np.ndarray) -> list[int]:
    return [int(x) for x in np.unique(a)]


def associator_subloop(L: Loop) -> Loop:
    _require_loop(L)
    return L.attrs.compute("associatorSubloop", lambda: normal_closure(L, _unique(L.associator_array())))


def derived_subloop(L: Loop) -> Loop:
    _require_loop(L)

    def compute():
        elems = set(_unique(L.associator_array())) | set(_unique(L.commutator_array()))
        return normal_closure(L, sorted(elems))

    return L.attrs.compute("derivedSubloop", compute)


def frattini_subloop(L: Loop) -> Loop:
    """Normal closure of all squares, commutators and associators.

    This agrees with the intersection of maximal subloops for nilpotent
    p-loops; elsewhere it is just the generated normal subloop.
    """
    _require_loop(L)

    def compute():
        t = L.table
        elems = set(_unique(np.diagonal(t)))
        elems |= set(_unique(L.associator_array())) | set(_unique(L.commutator_array()))
        return normal_closure(L, sorted(elems))

    return L.attrs.compute("frattiniSubloop", compute)


def verbal_subloop(L: Loop, kind: str) -> Loop:
    funcs = {"associator": associator_subloop, "derived": derived_subloop, "frattini": frattini_subloop}
    try:
        return funcs[kind](L)
    except KeyError:
        raise ValueError(f"unknown kind {kind!r}") from None


# ---------------------------------------------------------------------------
# nilpotency and solvability


def upper_central_series(L: Loop) -> list[Loop]:
    """``Z_0 = 1``, ``Z_{i+1}`` the preimage of the center of ``L/Z_i``, until stable."""
    _require_loop(L)

    def compute():
        series = [_sub(L, [0], Loop)]
        while True:
            F, cmap = factor_loop_with_map(L, series[-1])
            zc = np.zeros(F.order, dtype=bool)
            zc[rel_positions(F, center(F))] = True
            nxt = np.nonzero(zc[cmap])[0]
            if nxt.size == series[-1].order:
                return series
            series.append(_sub(L, nxt, Loop))

    return L.attrs.compute("upperCentralSeries", compute)


def lower_central_series(L: Loop) -> list[Loop]:
    """``L_1 = L``; ``L_{i+1}`` is the normal closure of all commutators and
    associators having an argument in ``L_i``."""
    _require_loop(L)

    def compute():
        comm = L.commutator_array()
        assoc = L.associator_array()
        series = [L]
        while True:
            a = np.array(rel_positions(L, series[-1]))
            elems = set(_unique(comm[a])) | set(_unique(assoc[a])) | set(_unique(assoc[:, a])) | set(
                _unique(assoc[:, :, a])
            )
            nxt = normal_closure(L, sorted(elems))
            if nxt.order == series[-1].order:
                return series
            series.append(nxt)

    return L.attrs.compute("lowerCentralSeries", compute)


def nilpotency_class(L: Loop) -> int | None:
    """Central nilpotency class, or None when ``L`` is not nilpotent."""
    series = upper_central_series(L)
    if series[-1].order != L.order:
        return None
    return len(series) - 1


def is_nilpotent(L: Loop) -> bool:
    return nilpotency_class(L) is not None


def derived_series(L: Loop) -> list[Loop]:
    """``L, L', L'', ...`` each derived subloop taken inside the previous term."""
    _require_loop(L)

    def compute():
        series = [L]
        while True:
            d = derived_subloop(series[-1])
            if d.order == series[-1].order:
                return series
            series.append(d)

    return L.attrs.compute("derivedSeries", compute)


def is_solvable(L: Loop) -> bool:
    return derived_series(L)[-1].order == 1


def derived_length(L: Loop) -> int | None:
    series = derived_series(L)
    return len(series) - 1 if series[-1].order == 1 else None


def solvability(L: Loop) -> dict:
    series = derived_series(L)
    ok = series[-1].order == 1
    return {"solvable": ok, "derived_length": len(series) - 1 if ok else None, "derived_series": series}


def is_strongly_nilpotent(L: Loop) -> bool:
    _require_loop(L)
    return L.attrs.compute("stronglyNilpotent", lambda: multiplication_group(L).is_nilpotent())


def subloop_closure(L: Loop, S: Iterable[int]) -> np.ndarray:
    return closure(L, list(S) + [0])
