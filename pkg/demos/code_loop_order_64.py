"""Build a Moufang loop of order 64 from a symplectic cubic space and read the space back.

Run with ``python demos/code_loop_order_64.py``.
"""

import time

from loopkit import properties as pr
from loopkit import structure as st
from loopkit.codeloops import SymplecticCubicSpace, build_code_loop, space_from_code_loop

S = SymplecticCubicSpace.from_constants(5, alpha=[(0, 1, 2)])
print(S.to_text(), end="")

start = time.perf_counter()
C = build_code_loop(S)
L = C.loop
print(f"built a loop of order {L.order} in {time.perf_counter() - start:.2f}s")
print(f"moufang: {pr.evaluate(L, 'moufang')}, associative: {pr.evaluate(L, 'associative')}")
print(f"nilpotency class: {st.nilpotency_class(L)}, |Frattini| = {st.frattini_subloop(L).order}")
print(f"nucleus order: {st.nucleus(L).order}, center order: {st.center(L).order}")

back, basis = space_from_code_loop(L, C.basis)
print(f"recovered space equals input: {back == S}")
