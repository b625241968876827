import pickle
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isoscreen.gl2core import (
    ImageGroup,
    Mat2,
    ModulusMismatch,
    NotInvertible,
    StabilizerChain,
    _inv,
    _mul,
    natural_base,
    vector_order,
)
from isoscreen.levels import gl2_order_formula


def test_mat2_reduces_and_multiplies():
    A = Mat2(6, 7, -1, 0, 1)
    assert A.entries == (1, 5, 0, 1)
    B = Mat2.of(6, (0, 5, 1, 0))
    assert (A @ B).entries == (5, 5, 1, 0)
    assert (A @ A.inverse()) == Mat2.identity(6)
    assert A.apply((1, 1)) == (0, 1)


def test_mat2_rejects_non_units():
    with pytest.raises(NotInvertible):
        Mat2(4, 2, 0, 0, 2)
    with pytest.raises(ModulusMismatch):
        Mat2.identity(4) @ Mat2.identity(6)


def test_mat2_reduce_requires_divisor():
    A = Mat2(12, 5, 1, 0, 7)
    assert A.reduce(4).entries == (1, 1, 0, 3)
    with pytest.raises(ValueError):
        A.reduce(5)


def test_group_rejects_bad_generators():
    with pytest.raises(NotInvertible):
        ImageGroup(4, [(2, 0, 0, 2)])
    with pytest.raises(ModulusMismatch):
        ImageGroup(4, [Mat2.identity(8)])
    with pytest.raises(ValueError):
        ImageGroup(0, [])


@pytest.mark.parametrize("n", range(1, 31))
def test_full_group_order_formula(n):
    assert ImageGroup.full(n).order() == gl2_order_formula(n)


def test_full_group_large_level():
    # 5180 = 4 * 5 * 7 * 37: the chain works prime power by prime power
    assert ImageGroup.full(5180).order() == gl2_order_formula(5180)


def test_trivial_and_mod_one():
    assert ImageGroup(1, []).order() == 1
    assert ImageGroup(7, []).order() == 1
    assert ImageGroup(7, [(1, 0, 0, 1)]).order() == 1


def test_gl2_z4_closure():
    G = ImageGroup.full(4)
    assert len(G.elements()) == G.order() == 96


def test_natural_base_is_per_prime_power():
    assert natural_base(12) == [(3, 0), (0, 3), (0 + 4, 0), (0, 4)]
    assert natural_base(1) == []


def test_chain_order_matches_closure(random_corpus):
    for G in random_corpus:
        els = G.elements()
        assert G.order() == len(els), G
        assert all(G.contains(g) for g in list(els)[:50])


def test_membership_rejects_outsiders():
    B = ImageGroup(5, [(1, 1, 0, 1), (2, 0, 0, 1), (1, 0, 0, 2)])
    assert B.order() == 80
    assert (3, 4, 0, 2) in B
    assert (1, 0, 1, 1) not in B
    assert Mat2(5, 1, 0, 1, 1) not in B


def test_orbits_partition_and_divide(random_corpus):
    for G in random_corpus:
        n = G.modulus
        table = G.orbits()
        assert sum(r.size for r in table) == n * n
        for oid, r in enumerate(table):
            assert G.order() % r.size == 0
            members = table.members(oid)
            assert len(members) == r.size
            assert min(members) == r.representative
            assert {vector_order(v, n) for v in members} == {r.vector_order}


def test_orbit_table_ids_follow_least_member():
    table = ImageGroup.full(6).orbits()
    reps = [r.representative for r in table]
    assert reps == sorted(reps)
    assert table.orbit_id((0, 0)) == 0


def test_reduce_and_project():
    G = ImageGroup.full(12)
    assert G.reduce_mod(4).order() == 96
    assert G.crt_project(3).order() == 48
    with pytest.raises(ValueError):
        G.crt_project(2)
    with pytest.raises(ValueError):
        G.reduce_mod(5)


def test_adjoin_minus_identity():
    B1 = ImageGroup(7, [(1, 1, 0, 1), (1, 0, 0, 3)])
    H = B1.adjoin_minus_identity()
    assert H.order() == 2 * B1.order()
    assert H.adjoin_minus_identity() is H


def test_det_and_sl2_part():
    G = ImageGroup.full(9)
    assert G.has_surjective_det()
    assert G.sl2_part().order() * 6 == G.order()
    S = ImageGroup(9, [(1, 1, 0, 1), (1, 0, 1, 1)])
    assert not S.has_surjective_det()
    assert S.det_image() == {1}


def test_same_group_ignores_generating_set():
    a = ImageGroup(5, [(1, 1, 0, 1), (2, 0, 0, 1), (1, 0, 0, 2)])
    b = ImageGroup(5, [(2, 1, 0, 1), (1, 0, 0, 2), (1, 3, 0, 1)])
    assert a.same_group(b)
    assert not a.same_group(ImageGroup.full(5))


def test_pickle_round_trip():
    G = ImageGroup.full(10)
    G.order()
    H = pickle.loads(pickle.dumps(G))
    assert H.raw_generators == G.raw_generators
    assert H.order() == G.order()


def test_canonical_coset_is_constant_on_cosets():
    gens = [(1, 1, 0, 1), (5, 0, 0, 5)]
    S = StabilizerChain(6, gens)
    g = (1, 2, 3, 1)
    canon = S.canonical_coset(g)
    assert {S.canonical_coset(_mul(g, s, 6)) for s in ImageGroup(6, gens).elements()} == {canon}
    assert S.canonical_coset((1, 0, 1, 1)) != canon or S.contains(_mul(_inv(g, 6), (1, 0, 1, 1), 6))


@st.composite
def small_groups(draw):
    n = draw(st.integers(2, 12))
    mats = st.tuples(*[st.integers(0, n - 1)] * 4).filter(lambda g: gcd(g[0] * g[3] - g[1] * g[2], n) == 1)
    return ImageGroup(n, draw(st.lists(mats, min_size=1, max_size=3)))


@settings(max_examples=60, deadline=None)
@given(small_groups())
def test_property_order_is_closure_size(G):
    assert G.order() == len(G.elements())


@settings(max_examples=60, deadline=None)
@given(small_groups(), st.data())
def test_property_reduction_is_a_quotient(G, data):
    n = G.modulus
    a = data.draw(st.sampled_from([d for d in range(1, n + 1) if n % d == 0]))
    assert G.order() % G.reduce_mod(a).order() == 0
