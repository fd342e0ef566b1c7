import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopkit import codeloops as cl
from loopkit.core import cyclic_group, elementary_abelian
from loopkit.errors import DimensionMismatch, InvalidSpace, NotPowerOfTwo, NotSmallFrattini
from loopkit.isomorphism import are_isomorphic
from loopkit.properties import evaluate
from loopkit.structure import center, frattini_subloop, nilpotency_class

ALPHA123 = cl.SymplecticCubicSpace.from_constants(3, alpha=[(0, 1, 2)])


def vectors(n):
    return [np.array(v, dtype=np.uint8) for v in itertools.product((0, 1), repeat=n)]


def test_eval_forms_examples():
    Z = cl.SymplecticCubicSpace.zero(3)
    for u, v in itertools.product(vectors(3), repeat=2):
        assert cl.eval_forms(Z, u) == cl.eval_forms(Z, u, v) == cl.eval_forms(Z, u, v, u) == 0
    assert cl.eval_forms(ALPHA123, [1, 1, 0], [0, 0, 1]) == 1
    assert cl.eval_forms(ALPHA123, [1, 0, 0], [0, 1, 0], [0, 0, 1]) == 1
    with pytest.raises(DimensionMismatch):
        cl.eval_forms(ALPHA123, [1, 0])
    with pytest.raises(DimensionMismatch):
        cl.eval_forms(ALPHA123)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=10**6))
def test_form_identities(n, seed):
    S = cl.SymplecticCubicSpace.random(n, np.random.default_rng(seed))
    vs = vectors(n)
    for u, v in itertools.product(vs, repeat=2):
        k = cl.eval_forms(S, u, v)
        assert cl.eval_forms(S, u ^ v) == (cl.eval_forms(S, u) + cl.eval_forms(S, v) + k) % 2
        assert k == cl.eval_forms(S, v, u)
        assert cl.eval_forms(S, u, u) == 0
        for w in vs:
            lhs = cl.eval_forms(S, u ^ v, w)
            rhs = (cl.eval_forms(S, u, w) + cl.eval_forms(S, v, w) + cl.eval_forms(S, u, v, w)) % 2
            assert lhs == rhs
            assert cl.eval_forms(S, u, u, w) == 0


def test_space_constructor_rejects_repeated_indices():
    with pytest.raises(InvalidSpace):
        cl.SymplecticCubicSpace.from_constants(3, alpha=[(0, 0, 1)])
    with pytest.raises(InvalidSpace):
        cl.SymplecticCubicSpace.from_constants(3, kappa=[(1, 1)])


def test_space_text_roundtrip():
    S = cl.SymplecticCubicSpace.from_constants(4, sigma=[0], kappa=[(1, 3)], alpha=[(0, 2, 3)])
    text = S.to_text()
    assert text == "n 4\nsigma 1\nkappa 2 4\nalpha 1 3 4\n"
    assert cl.SymplecticCubicSpace.parse(text) == S
    assert cl.SymplecticCubicSpace.parse("# comment\nn 2\n\nsigma 2  # trailing\n").constants() == ([1], [], [])
    for bad in ("n 3\nbeta 1", "sigma 1", "n 3\nsigma 4", "n 3\nkappa 1"):
        with pytest.raises(ValueError):
            cl.SymplecticCubicSpace.parse(bad)


def closure_size(G) -> int:
    seen = {G.identity}
    frontier = [G.identity]
    gens = [G._gens[k] for k in range(G.N)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def test_group_orders_by_enumeration():
    Z2 = cl.build_triality_group(cl.SymplecticCubicSpace.zero(2))
    assert closure_size(Z2) == 2**8
    # nonabelian even for the zero space: [g_i, h_i] = u
    g1, h1 = Z2._gens[Z2.g[0]], Z2._gens[Z2.h[0]]
    assert Z2.mul(g1, h1) != Z2.mul(h1, g1)
    G = cl.build_triality_group(ALPHA123)
    assert closure_size(G) == 2**11


def test_relations_and_associativity():
    rng = np.random.default_rng(11)
    for n in (2, 3, 4):
        S = cl.SymplecticCubicSpace.random(n, rng)
        G = cl.build_triality_group(S)
        G.check_relations(samples=10_000 if n == 3 else 2000, rng=rng)


def test_automorphisms_and_s3():
    rng = np.random.default_rng(4)
    G = cl.build_triality_group(cl.SymplecticCubicSpace.random(3, rng))
    assert len(G.automorphisms) == 6
    tau = G._tau_images
    for k in range(G.N):
        assert G.apply(tau, G.apply(tau, G._gens[k])) == G._gens[k]
    for _ in range(200):
        x, y = (tuple(int(b) for b in rng.integers(0, 2, G.N)) for _ in range(2))
        for images in (G._tau_images, G._rho_images):
            assert G.apply(images, G.mul(x, y)) == G.mul(G.apply(images, x), G.apply(images, y))


def test_tau_class_sizes():
    rng = np.random.default_rng(8)
    for n in (1, 2, 3, 4):
        for _ in range(2):
            G = cl.build_triality_group(cl.SymplecticCubicSpace.random(n, rng))
            cls = cl.tau_class(G)
            assert len(cls) == 2 ** (n + 1)
            assert cls == sorted(cls)


def test_zero_spaces_give_elementary_abelian_loops():
    L = cl.code_loop_from_space(cl.SymplecticCubicSpace.zero(2))
    assert are_isomorphic(L, elementary_abelian(2, 3))
    L = cl.code_loop_from_space(cl.SymplecticCubicSpace.zero(3))
    assert are_isomorphic(L, elementary_abelian(2, 4))


def test_alpha_space_gives_nonassociative_moufang_loop():
    L = cl.code_loop_from_space(ALPHA123)
    assert L.order == 16
    assert evaluate(L, "moufang") and not evaluate(L, "associative")


def check_code_loop(L, n):
    assert L.order == 2 ** (n + 1)
    assert evaluate(L, "moufang")
    c = nilpotency_class(L)
    assert c is not None and c <= 2
    Phi = frattini_subloop(L)
    assert Phi.order <= 2
    assert set(Phi.pos_in_parent) <= set(center(L).pos_in_parent)


def test_constructed_loops_are_small_frattini_moufang():
    rng = np.random.default_rng(2)
    for n in (1, 2, 3, 4):
        for _ in range(3):
            check_code_loop(cl.code_loop_from_space(cl.SymplecticCubicSpace.random(n, rng)), n)


def test_order_64_code_loop():
    S = cl.SymplecticCubicSpace.from_constants(5, alpha=[(0, 1, 2)])
    L = cl.code_loop_from_space(S)
    check_code_loop(L, 5)
    G = cl.build_triality_group(S)
    assert len(cl.tau_class(G)) == 64


def test_roundtrip_on_canonical_basis():
    rng = np.random.default_rng(20)
    done = 0
    while done < 20:
        S = cl.SymplecticCubicSpace.random(3, rng)
        if S == cl.SymplecticCubicSpace.zero(3):
            continue
        C = cl.build_code_loop(S)
        T, basis = cl.space_from_code_loop(C.loop, C.basis)
        assert T == S and basis == C.basis
        assert tuple(C.basis) == C.loop.attrs.get("codeLoopBasis")
        done += 1


def test_roundtrip_alpha_example():
    C = cl.build_code_loop(ALPHA123)
    T, _ = cl.space_from_code_loop(C.loop, C.basis)
    assert T.constants() == ([], [], [(0, 1, 2)])
    # any basis recovers a space of the same dimension
    U, basis = cl.space_from_code_loop(C.loop)
    assert U.n == 3 and len(basis) == 3


def test_space_from_code_loop_errors():
    with pytest.raises(NotSmallFrattini):
        cl.space_from_code_loop(cl.code_loop_from_space(cl.SymplecticCubicSpace.zero(2)))
    with pytest.raises(NotPowerOfTwo):
        cl.space_from_code_loop(cyclic_group(6))
    with pytest.raises(DimensionMismatch):
        cl.space_from_code_loop(cl.code_loop_from_space(ALPHA123), basis=[1, 1, 1])


def test_cyclic_group_of_order_four():
    S, basis = cl.space_from_code_loop(cyclic_group(4))
    assert S.n == 1 and S.constants() == ([0], [], [])
