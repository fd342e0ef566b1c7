"""Lower the number of nonassociative triples of a code loop by block flips.

Run with ``python demos/greedy_flips.py``.
"""

from loopkit import properties as pr
from loopkit.codeloops import SymplecticCubicSpace, code_loop_from_space
from loopkit.structure import frattini_subloop, nucleus
from loopkit.symmetrize import greedy_symmetrize

L = code_loop_from_space(SymplecticCubicSpace.from_constants(3, alpha=[(0, 1, 2)]))
N = nucleus(L)
h = frattini_subloop(L).pos_in_parent[1]
print(f"order {L.order}, nucleus of order {N.order}, h at position {h + 1}")

res = greedy_symmetrize(L, N, h)
print(f"initial mu={res.initial_mu}")
for line in res.trace_lines():
    print(line)
K = res.loop
print(f"final loop: moufang={pr.evaluate(K, 'moufang')} flexible={pr.evaluate(K, 'flexible')}")
