import itertools

import numpy as np
import pytest
from conftest import is_assoc_oracle, random_latin_square

from loopkit import properties as pr
from loopkit.codeloops import SymplecticCubicSpace, build_code_loop
from loopkit.core import Loop, cyclic_group, loop_by_cayley_table, quasigroup_by_cayley_table, subloop
from loopkit.errors import LoopRequired, NotPowerAssociative, UnknownIdentity, UnknownProperty

STEINER_ROWS = [[1, 3, 2], [3, 2, 1], [2, 1, 3]]


def direct(Q, name) -> bool:
    try:
        return pr.evaluate(Q, name)
    except NotPowerAssociative:
        return False


def test_catalogue_is_complete_and_unique():
    text = pr.catalogue_text()
    ids = [line.split()[0] for line in text.splitlines() if line.strip() and not line.startswith("#")]
    assert len(ids) == len(set(ids)) == len(pr.IDENTITIES)
    for name in ("moufang", "extra", "leftBol", "weakInverseProperty", "entropic"):
        assert name in pr.IDENTITIES
    for ident in pr.IDENTITIES.values():
        assert len(ident.variables) <= 4
        assert set(ident.lhs.variables()) | set(ident.rhs.variables()) == set(ident.variables)


def test_parse_term_roundtrip():
    t = pr.parse_term("* x \\ y ^l z")
    assert t.variables() == ["x", "y", "z"]
    assert pr.parse_term(str(t)) == t
    with pytest.raises(ValueError):
        pr.parse_term("* x")


def test_identity_examples(n5):
    assert pr.satisfies_identity(loop_by_cayley_table([[1, 2], [2, 1]]), "leftBol")
    assert not pr.satisfies_identity(n5, "associative")
    assert pr.counterexample(n5, "associative") is not None
    assert pr.satisfies_identity(cyclic_group(3), "commutative")


def test_counterexample_is_first_in_row_major_order(n5):
    t = n5.table
    first = next(
        (a, b, c) for a, b, c in itertools.product(range(5), repeat=3) if t[t[a, b], c] != t[a, t[b, c]]
    )
    assert pr.counterexample(n5, "associative") == first
    # the (2,2,3) triple in 1-based labels is a witness
    assert t[t[1, 1], 2] != t[1, t[1, 2]]


def test_chunked_evaluation_matches_direct(rng):
    Q = quasigroup_by_cayley_table((random_latin_square(40, rng) + 1).tolist())
    pr._CHUNK, saved = 1 << 10, pr._CHUNK
    try:
        small = pr.counterexample(Q, "entropic")
    finally:
        pr._CHUNK = saved
    assert small == pr.counterexample(Q, "entropic")


def test_errors(z4):
    Q = quasigroup_by_cayley_table(STEINER_ROWS)
    with pytest.raises(LoopRequired):
        pr.satisfies_identity(Q, "moufang")
    with pytest.raises(UnknownIdentity):
        pr.satisfies_identity(z4, "nonsense")
    with pytest.raises(UnknownProperty):
        pr.property_predicate(z4, "nonsense")
    with pytest.raises(UnknownProperty):
        pr.has_property(z4, "nonsense")


def test_predicate_examples(n5):
    Q = quasigroup_by_cayley_table(STEINER_ROWS)
    assert pr.property_predicate(Q, "steinerQuasigroup")
    assert pr.has_property(Q, "steiner")
    assert pr.property_predicate(cyclic_group(6), "CC")
    expected = all(is_assoc_oracle(subloop(n5, [x]).table.tolist()) for x in range(5))
    assert pr.property_predicate(n5, "powerAssociative") == expected


def test_steiner_needs_idempotency():
    # totally symmetric but not idempotent: Z2
    Z2 = quasigroup_by_cayley_table([[1, 2], [2, 1]])
    assert pr.evaluate(Z2, "totallySymmetric")
    assert not pr.evaluate(Z2, "steinerQuasigroup")


def test_power_alternative_requires_power_associativity(small_loops):
    bad = next(L for L in small_loops if not pr.evaluate(L, "powerAssociative"))
    with pytest.raises(NotPowerAssociative):
        pr.evaluate(bad, "leftPowerAlternative")


def test_predicates_by_definition(small_loops):
    """Diassociativity and LCC against direct definitions."""
    for L in small_loops:
        t = L.table
        n = L.order
        dia = all(is_assoc_oracle(subloop(L, [x, y]).table.tolist()) for x in range(n) for y in range(n))
        assert pr.evaluate(L, "diassociative") == dia
        lefts = [tuple(t[x]) for x in range(n)]
        inv = [tuple(np.argsort(t[x])) for x in range(n)]
        section = set(lefts)
        lcc = True
        for x in range(n):
            for y in range(n):
                # z -> x(y(z / x)) written with left translations as L_x^-1 L_y L_x
                conj = tuple(lefts[x][lefts[y][inv[x][z]]] for z in range(n))
                if conj not in section:
                    lcc = False
        assert pr.evaluate(L, "LCC") == lcc


def test_deduction_examples():
    L = Loop(np.array([[0, 1], [1, 0]]))
    L.attrs.set("leftBol", True)
    L.attrs.set("commutative", True)
    pr.deduce_properties(L)
    assert L.attrs.get("moufang") is True and L.attrs.provenance("moufang") == "deduced"

    M = Loop(np.array([[0, 1], [1, 0]]))
    M.attrs.set("leftBol", True)
    M.attrs.set("rightBol", True)
    pr.deduce_properties(M)
    assert M.attrs.get("moufang") is True

    G = cyclic_group(4)
    G.attrs.set("associative", True)
    pr.deduce_properties(G)
    for name in pr.GROUP_LAWS:
        assert G.attrs.get(name) is True


def test_deduction_never_overrides_computed():
    L = cyclic_group(3)
    L.attrs.set("flexible", True, "computed")
    L.attrs.set("associative", True)
    pr.deduce_properties(L)
    assert L.attrs.provenance("flexible") == "computed"


def test_deduction_skips_direct_evaluation():
    G = cyclic_group(5)
    pr.has_property(G, "associative")
    before = sum(pr.EVALUATIONS.values())
    assert pr.has_property(G, "moufang")
    assert pr.has_property(G, "diassociative")
    assert sum(pr.EVALUATIONS.values()) == before


def test_deduction_on_quasigroups_skips_loop_properties():
    Q = quasigroup_by_cayley_table(STEINER_ROWS)
    Q.attrs.set("associative", True)  # false, but only loop-scoped flags would follow
    pr.deduce_properties(Q)
    assert Q.attrs.get("moufang") is None


def test_rule_soundness_sweep(small_loops):
    """Premises by direct test imply the conclusion by direct test."""
    for L in small_loops:
        values = {name: direct(L, name) for name in pr.ALL_PROPERTIES}
        for rule in pr.RULES:
            if all(values[p] for p in rule.premises):
                assert values[rule.conclusion], (rule, L.cayley_table())


def test_cache_coherence(small_loops):
    for L in small_loops[:60]:
        for name in pr.IDENTITIES:
            if pr.loops_only(name) and not isinstance(L, Loop):
                continue
            assert pr.has_property(L, name) == pr.evaluate(L, name)
            assert pr.has_property(L, name) == pr.evaluate(L, name)


def test_deduced_flags_agree_with_direct_tests(small_loops):
    for L in small_loops:
        for name in ("leftBol", "rightBol", "commutative", "associative"):
            pr.has_property(L, name)
        for name, (value, prov) in pr.known_properties(L).items():
            if prov == "deduced":
                assert direct(L, name) == value


def test_moufang_implications(small_loops):
    loops = list(small_loops)
    for n in (1, 2, 3):
        S = SymplecticCubicSpace.random(n, np.random.default_rng(n))
        loops.append(build_code_loop(S).loop)
    found = 0
    for L in loops:
        if pr.evaluate(L, "moufang"):
            found += 1
            for name in ("leftBol", "rightBol", "flexible"):
                assert pr.evaluate(L, name)
    assert found > 0


def test_code_loops_of_order_16_are_moufang():
    for seed in range(4):
        S = SymplecticCubicSpace.random(3, np.random.default_rng(seed))
        L = build_code_loop(S).loop
        assert L.order == 16
        assert pr.evaluate(L, "moufang")
