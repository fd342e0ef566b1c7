"""A walk through the smallest nonassociative loops.

Run with ``python demos/tour_small_loops.py``.
"""

from loopkit import properties as pr
from loopkit import structure as st
from loopkit.isomorphism import automorphism_group, up_to_isotopism
from loopkit.library import catalog_loops
from loopkit.symmetrize import mu

five = catalog_loops("all-loops", 5)
print(f"{len(five)} loops of order 5")
for m, L in enumerate(five, 1):
    assoc = pr.has_property(L, "associative")
    print(
        f"  #{m}: associative={assoc} mu={mu(L)} "
        f"|Mlt|={st.multiplication_group(L).order()} |Aut|={automorphism_group(L).order()} "
        f"simple={st.is_simple(L)}"
    )

nonassoc = [L for L in five if not pr.has_property(L, "associative")]
print(f"nonassociative loops of order 5 up to isotopism: {len(up_to_isotopism(nonassoc))}")

six = catalog_loops("all-loops", 6)
counts = {name: sum(pr.has_property(L, name) for L in six) for name in ("commutative", "flexible", "powerAssociative")}
print(f"order 6: {len(six)} loops, {counts}")
