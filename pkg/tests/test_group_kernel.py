"""Table groups: constructions, invariants, isomorphism, splitting."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbgroups import group_kernel as gk
from sbgroups import residue_arith as ra

import oracles


def crt(v1, m1, v2, m2):
    return ra.crt_combine([(v1, m1), (v2, m2)]).value


def assert_is_isomorphism(G, H, f):
    assert sorted(f) == list(range(G.order))
    arr = np.array(f)
    assert np.array_equal(arr[G.table], H.table[arr[:, None], arr[None, :]])


# ------------------------------------------------------------- constructions


def test_build_cyclic_trivial():
    G = gk.build_cyclic(1)
    assert G.order == 1
    assert gk.element_orders(G) == {1: 1}


def test_build_semidirect_7_3_2():
    G = gk.build_semidirect(7, 3, 2)
    assert G.order == 21
    assert not G.is_abelian()
    assert gk.element_orders(G) == {1: 1, 3: 14, 7: 6}


def test_build_semidirect_trivial_character_is_direct_product():
    for n in (1, 5, 12):
        G = gk.build_semidirect(n, 3, 1)
        assert G.is_abelian()
        assert gk.is_isomorphic(G, gk.direct_product(gk.build_cyclic(3), gk.build_cyclic(n)))


def test_build_semidirect_rejects_bad_character():
    with pytest.raises(gk.BadCharacter):
        gk.build_semidirect(7, 3, 3)
    with pytest.raises(gk.BadCharacter):
        gk.build_semidirect(9, 3, 2)
    # non-units can never satisfy d^m = 1
    with pytest.raises(gk.BadCharacter):
        gk.build_semidirect(9, 3, 6)


def test_build_semidirect_presentation_relations():
    n, m, d = 7, 3, 2
    G = gk.build_semidirect(n, m, d)
    x, y = 1, n  # (0, 1) and (1, 0)
    assert G.element_order(x) == n
    assert G.element_order(y) == m
    lhs = G.mul(G.mul(G.inv(y), x), y)
    assert lhs == G.power(x, d)


def test_semidirect_91_non_balanced_center_has_order_7():
    d = crt(1, 7, 3, 13)  # trivial on the 7-part, order 3 on the 13-part
    G = gk.build_semidirect(91, 3, d)
    assert len(gk.center(G)) == 7


def test_direct_product_order_63():
    G = gk.direct_product(gk.build_cyclic(3), gk.build_semidirect(7, 3, 2))
    assert G.order == 63
    assert not G.is_abelian()


def test_elementary_abelian():
    E = gk.elementary_abelian_3(2)
    assert E.order == 9
    assert gk.element_orders(E) == {1: 1, 3: 8}
    assert gk.elementary_abelian_3(0).order == 1
    assert gk.elementary_abelian_3(3).order == 27
    with pytest.raises(ValueError):
        gk.elementary_abelian_3(4)


def test_from_mul_function_heisenberg():
    table = oracles.heisenberg_table(3)
    G = gk.FiniteGroup(table, validate="full")
    assert G.order == 27
    assert not G.is_abelian()
    assert gk.element_orders(G) == {1: 1, 3: 26}
    assert len(gk.center(G)) == 3


@given(st.integers(min_value=1, max_value=60), st.integers(min_value=1, max_value=4))
@settings(max_examples=40)
def test_semidirect_against_pair_oracle(n, m):
    import math

    # pick the smallest valid character of exact order dividing m
    d = next(
        (
            dd
            for dd in range(n)
            if math.gcd(dd, n) == 1 and pow(dd, m, n) == 1 % n
        ),
        None,
    )
    if d is None:
        return
    G = gk.build_semidirect(n, m, d)
    mul = oracles.semidirect_product(m, n, d)
    elements = [(r, s) for r in range(m) for s in range(n)]
    want = oracles.table_from_mul(elements, mul)
    assert G.table.tolist() == want


# ---------------------------------------------------------------- invariants


def test_element_orders_and_powers():
    G = gk.build_cyclic(12)
    assert gk.element_orders(G) == {1: 1, 2: 1, 3: 2, 4: 2, 6: 2, 12: 4}
    assert G.power(1, 25) == 1
    assert G.power(5, -1) == 7


@given(st.integers(min_value=1, max_value=200))
@settings(max_examples=30)
def test_orders_match_naive(n):
    G = gk.build_cyclic(n)
    assert dict(enumerate(G.orders().tolist())) == oracles.naive_element_orders(
        G.table.tolist()
    )


def test_abelian_invariants_examples():
    assert gk.abelian_invariants(gk.build_cyclic(21)) == [21]
    assert gk.abelian_invariants(gk.build_cyclic(1)) == []
    assert gk.abelian_invariants(gk.elementary_abelian_3(2)) == [3, 3]
    G = gk.direct_product(gk.build_cyclic(6), gk.build_cyclic(15))
    assert gk.abelian_invariants(G) == [3, 30]
    with pytest.raises(gk.NotAbelian):
        gk.abelian_invariants(gk.build_semidirect(7, 3, 2))


@given(st.lists(st.integers(min_value=1, max_value=24), min_size=1, max_size=3))
@settings(max_examples=40)
def test_abelian_invariants_of_cyclic_products(orders):
    G = gk.build_cyclic(orders[0])
    for k in orders[1:]:
        G = gk.direct_product(G, gk.build_cyclic(k))
    inv = gk.abelian_invariants(G)
    # divisor chain, correct total order
    assert all(inv[i + 1] % inv[i] == 0 for i in range(len(inv) - 1))
    prod = 1
    for f in inv:
        prod *= f
    assert prod == G.order
    # the chain rebuilds an isomorphic group
    H = gk.build_cyclic(1)
    for f in inv:
        H = gk.direct_product(H, gk.build_cyclic(f))
    assert gk.is_isomorphic(G, H)


def test_center_of_heisenberg():
    G = gk.FiniteGroup(oracles.heisenberg_table(3), validate=None)
    assert len(gk.center(G)) == 3


def test_derived_subgroup():
    G = gk.build_semidirect(7, 3, 2)
    assert gk.derived_subgroup(G) == list(range(7))  # the mu_7 part
    assert gk.derived_subgroup(gk.build_cyclic(10)) == [0]


# ----------------------------------------------------------------- subgroups


def test_normal_abelian_index3_of_semidirect():
    G = gk.build_semidirect(7, 3, 2)
    subs = gk.normal_abelian_index3_subgroups(G)
    assert subs == [tuple(range(7))]


def test_normal_abelian_index3_of_mu3_squared():
    E = gk.elementary_abelian_3(2)
    subs = gk.normal_abelian_index3_subgroups(E)
    assert len(subs) == 4
    for sub in subs:
        assert len(sub) == 3


def test_normal_abelian_index3_without_3_divisibility():
    assert gk.normal_abelian_index3_subgroups(gk.build_cyclic(7)) == []


def test_normal_abelian_index3_of_mu3_cubed():
    assert len(gk.normal_abelian_index3_subgroups(gk.elementary_abelian_3(3))) == 13


def test_normal_abelian_index3_of_heisenberg():
    G = gk.FiniteGroup(oracles.heisenberg_table(3), validate=None)
    subs = gk.normal_abelian_index3_subgroups(G)
    assert len(subs) == 4
    for sub in subs:
        H = G.subgroup_table(sub)
        assert H.is_abelian()
        assert gk.abelian_invariants(H) == [3, 3]


def test_normal_abelian_index3_subgroups_are_verified_normal():
    G = gk.build_semidirect(91, 3, crt(2, 7, 3, 13))
    subs = gk.normal_abelian_index3_subgroups(G)
    assert subs == [tuple(range(91))]
    inv = G.inverses()
    sub = np.array(subs[0])
    member = np.zeros(G.order, dtype=bool)
    member[sub] = True
    for g in range(G.order):
        assert member[G.table[G.table[g, sub], inv[g]]].all()


# ------------------------------------------------------------------ splitting


def test_split_over_semidirect():
    G = gk.build_semidirect(7, 3, 2)
    comp = gk.split_over(G, range(7))
    assert len(comp) == 3 and 0 in comp
    f = [c for c in comp if c != 0][0]
    assert G.element_order(f) == 3
    assert not set(comp) <= set(range(7))


def test_split_over_mu9_fails():
    G = gk.build_cyclic(9)
    with pytest.raises(gk.NoSplit):
        gk.split_over(G, [0, 3, 6])


def test_split_over_direct_factor():
    E = gk.direct_product(gk.build_cyclic(3), gk.build_cyclic(3))
    assert gk.split_over(E, [0, 3, 6]) == (0, 1, 2)
    assert gk.split_over(E, [0, 1, 2]) == (0, 3, 6)


def test_split_over_order27_semidirect_with_order9_elements():
    # Elements of order 9 exist, but complements still do: ones outside
    # the mu_9 all have order 3 here.
    G = gk.build_semidirect(9, 3, 4)
    comp = gk.split_over(G, range(9))
    assert len(comp) == 3


def test_split_over_rejects_non_normal_or_wrong_index():
    G = gk.build_semidirect(7, 3, 2)
    with pytest.raises(ValueError):
        gk.split_over(G, range(3))  # wrong size, not closed
    S3_like = gk.build_semidirect(3, 3, 1)
    with pytest.raises(ValueError):
        gk.split_over(S3_like, [0, 1, 5])


def test_split_over_succeeds_on_every_order9_free_corpus_group():
    corpus = [
        gk.build_semidirect(7, 3, 2),
        gk.build_semidirect(13, 3, 3),
        gk.build_semidirect(91, 3, crt(2, 7, 3, 13)),
        gk.direct_product(gk.build_cyclic(3), gk.build_semidirect(7, 3, 2)),
        gk.elementary_abelian_3(3),
        gk.FiniteGroup(oracles.heisenberg_table(3), validate=None),
        gk.build_cyclic(21),
    ]
    for G in corpus:
        assert 9 not in gk.element_orders(G)
        for sub in gk.normal_abelian_index3_subgroups(G):
            comp = gk.split_over(G, sub)
            assert len(comp) == 3
            assert set(comp) & set(sub) == {0}


# --------------------------------------------------------------- isomorphism


def test_isomorphic_semidirects_7():
    G, H = gk.build_semidirect(7, 3, 2), gk.build_semidirect(7, 3, 4)
    f = gk.find_isomorphism(G, H)
    assert f is not None
    assert_is_isomorphism(G, H, f)


def test_non_isomorphic_91_classes():
    d1 = crt(2, 7, 3, 13)
    d2 = crt(2, 7, 9, 13)
    G1 = gk.build_semidirect(91, 3, d1)
    G2 = gk.build_semidirect(91, 3, d2)
    assert not gk.is_isomorphic(G1, G2)


def test_mu9_vs_mu3_squared():
    assert not gk.is_isomorphic(gk.build_cyclic(9), gk.elementary_abelian_3(2))


def test_isomorphism_found_under_relabeling():
    import random

    G = gk.direct_product(gk.build_cyclic(3), gk.build_semidirect(7, 3, 2))
    rng = random.Random(5)
    perm = [0] + rng.sample(range(1, G.order), G.order - 1)
    inv_perm = np.argsort(perm)
    pa = np.array(perm)
    H = gk.FiniteGroup(inv_perm[G.table[pa[:, None], pa[None, :]]], validate="basic")
    f = gk.find_isomorphism(G, H)
    assert f is not None
    assert_is_isomorphism(G, H, f)


def test_isomorphism_vs_naive_oracle_on_small_groups():
    candidates = [
        gk.build_cyclic(9),
        gk.elementary_abelian_3(2),
        gk.build_cyclic(12),
        gk.direct_product(gk.build_cyclic(2), gk.build_cyclic(6)),
        gk.build_semidirect(7, 3, 2),
        gk.build_semidirect(7, 3, 4),
        gk.build_cyclic(21),
    ]
    for G, H in itertools.combinations(candidates, 2):
        want = oracles.naive_is_isomorphic(G.table.tolist(), H.table.tolist())
        assert gk.is_isomorphic(G, H) == want


def test_isomorphism_is_equivalence_on_corpus():
    corpus = [
        gk.build_cyclic(21),
        gk.build_semidirect(7, 3, 2),
        gk.build_semidirect(7, 3, 4),
        gk.build_semidirect(13, 3, 3),
        gk.elementary_abelian_3(2),
    ]
    for G in corpus:
        assert gk.is_isomorphic(G, G)
    for G, H in itertools.combinations(corpus, 2):
        assert gk.is_isomorphic(G, H) == gk.is_isomorphic(H, G)
    for G, H, K in itertools.combinations(corpus, 3):
        if gk.is_isomorphic(G, H) and gk.is_isomorphic(H, K):
            assert gk.is_isomorphic(G, K)


def test_heisenberg_not_isomorphic_to_abelian_peers():
    G = gk.FiniteGroup(oracles.heisenberg_table(3), validate=None)
    assert not gk.is_isomorphic(G, gk.elementary_abelian_3(3))
    assert not gk.is_isomorphic(G, gk.build_semidirect(9, 3, 4))


# ------------------------------------------------------------------ plumbing


def test_group_element_sugar():
    G = gk.build_semidirect(7, 3, 2)
    x = gk.GroupElement(G, 1)
    y = gk.GroupElement(G, 7)
    assert (x * y).id == G.mul(1, 7)
    assert x.inverse().id == G.inv(1)
    assert y.order() == 3
    with pytest.raises(ValueError):
        gk.GroupElement(G, 21)


def test_json_roundtrip():
    G = gk.build_semidirect(7, 3, 2)
    H = gk.FiniteGroup.from_json(G.to_json())
    assert G == H


def test_from_json_validates():
    with pytest.raises(ValueError):
        gk.FiniteGroup.from_json({"order": 3, "table": [[0, 1], [1, 0]]})
    with pytest.raises(ValueError):
        gk.FiniteGroup.from_json({"order": 2, "table": [[0, 1], [1, 1]]})
    with pytest.raises(ValueError):
        gk.FiniteGroup.from_json({"order": 2, "table": [[1, 0], [0, 1]]})


def test_validation_catches_nonassociative_loop():
    # Find a small latin square with identity that is not associative.
    base = list(range(5))
    found = None
    for rows in itertools.permutations(itertools.permutations(base), 4):
        table = [base] + [list(r) for r in rows]
        if any(table[i][0] != i for i in range(5)):
            continue
        cols = list(zip(*table))
        if any(sorted(c) != base for c in cols):
            continue
        ok = all(
            table[table[a][b]][c] == table[a][table[b][c]]
            for a in range(5)
            for b in range(5)
            for c in range(5)
        )
        if not ok:
            found = table
            break
    assert found is not None
    gk.FiniteGroup(found, validate="basic")  # latin + identity pass
    with pytest.raises(ValueError):
        gk.FiniteGroup(found, validate="full")


def test_closure_table_matches_naive_closure():
    # permutations of three letters under composition
    def compose(p, q):
        return tuple(p[q[i]] for i in range(3))

    identity = (0, 1, 2)
    gens = [(1, 0, 2), (1, 2, 0)]
    group, reps = gk.closure_table(identity, gens, compose, lambda p: p, cap=10)
    assert group.order == 6
    assert sorted(reps) == oracles.naive_closure(gens, compose, identity)
    assert not group.is_abelian()
    assert gk.element_orders(group) == {1: 1, 2: 3, 3: 2}
    want = gk.from_mul_function(reps, compose, identity)
    assert gk.is_isomorphic(group, want)


def test_closure_table_cap():
    def compose(p, q):
        return tuple(p[q[i]] for i in range(4))

    identity = (0, 1, 2, 3)
    gens = [(1, 0, 2, 3), (1, 2, 3, 0)]
    with pytest.raises(gk.CapExceeded):
        gk.closure_table(identity, gens, compose, lambda p: p, cap=10)
