import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopkit.errors import NotTransitive, PointOutOfRange
from loopkit.perm import PermGroup, Permutation, naive_closure


def P(text, n):
    return Permutation.parse(text, n)


def test_parse_and_print_roundtrip():
    p = P("(1 2 3)(4,5)", 6)
    assert p.images == (1, 2, 0, 4, 3, 5)
    assert str(p) == "(1 2 3)(4 5)"
    assert str(Permutation.identity(3)) == "()"


def test_product_acts_on_the_right():
    p, q = P("(1 2)", 3), P("(2 3)", 3)
    # 1 -> 2 under p, then 2 -> 3 under q
    assert (p * q)(0) == 2
    assert (q * p)(0) == 1


def test_inverse_power_order():
    p = P("(1 2 3 4)(5 6)", 6)
    assert (p * p.inverse()).is_identity()
    assert p.order() == 4
    assert p**4 == Permutation.identity(6)
    assert p**-1 == p.inverse()


def test_symmetric_group_facts():
    S5 = PermGroup([P("(1 2 3 4 5)", 5), P("(1 2)", 5)], degree=5)
    assert S5.order() == 120
    assert S5.stabilizer(0).order() == 24
    assert S5.is_primitive()
    assert not S5.is_solvable()
    assert [G.order() for G in S5.derived_series()] == [120, 60]


def test_cyclic_blocks_and_nilpotency():
    C4 = PermGroup([P("(1 2 3 4)", 4)], degree=4)
    assert C4.block_system() == [[0, 2], [1, 3]]
    assert not C4.is_primitive()
    assert C4.is_nilpotent()
    assert C4.is_abelian()


def test_block_system_requires_transitivity():
    G = PermGroup([P("(1 2)", 4)], degree=4)
    with pytest.raises(NotTransitive):
        G.block_system()
    with pytest.raises(PointOutOfRange):
        G.orbit(7)


def test_membership():
    A4 = PermGroup([P("(1 2 3)", 4), P("(2 3 4)", 4)], degree=4)
    assert A4.order() == 12
    assert P("(1 2)(3 4)", 4) in A4
    assert P("(1 2)", 4) not in A4


def test_elements_sorted_and_complete():
    S3 = PermGroup([P("(1 2 3)", 3), P("(1 2)", 3)], degree=3)
    els = S3.elements()
    assert len(els) == 6 and els == sorted(els)
    assert set(els) == {Permutation(p) for p in itertools.permutations(range(3))}


perm_strategy = st.integers(min_value=2, max_value=7).flatmap(
    lambda n: st.lists(st.permutations(list(range(n))), min_size=1, max_size=3)
)


@settings(max_examples=150, deadline=None)
@given(perm_strategy)
def test_chain_matches_naive_closure(gens):
    n = len(gens[0])
    perms = [Permutation(g) for g in gens]
    G = PermGroup(perms, degree=n)
    closure = naive_closure(perms, n)
    assert G.order() == len(closure)
    for x in closure:
        assert x in G
    # orbit-stabilizer at point 0
    assert G.order() == len(G.orbit(0)) * G.stabilizer(0).order()


def test_large_symmetric_group_order():
    n = 40
    G = PermGroup([Permutation(list(range(1, n)) + [0]), Permutation.from_cycles([(0, 1)], n)], degree=n)
    assert G.order() == math.factorial(n)


def test_random_element_membership():
    rng = np.random.default_rng(3)
    G = PermGroup([P("(1 2 3 4 5 6)", 6), P("(1 2)(3 4)", 6)], degree=6)
    for _ in range(20):
        a = Permutation(rng.permutation(6))
        assert (a in G) == (a in naive_closure(G.generators, 6))
