from collections import Counter
from math import gcd

import pytest

from isoscreen.arith import divisors
from isoscreen.degrees import (
    degree_from_orbit,
    map_degree,
    point_classes,
    primitive_degrees,
    primitive_target,
    qualifying_divisors,
    record_degree,
)
from isoscreen.gl2core import ImageGroup, vector_order


def coset_index_oracle(a: int, b: int) -> int:
    """[+-Gamma1(a) : +-Gamma1(ab)] by counting.

    Inside SL2(Z/abZ), +-Gamma1(ab) is the stabilizer of the pair {e1, -e1},
    and the preimage of +-Gamma1(a) moves e1 onto every vector of order ab
    congruent to +-e1 mod a.  The index is the number of such pairs {v, -v}.
    """
    n = a * b
    vs = {
        (x, y)
        for x in range(n)
        for y in range(n)
        if gcd(gcd(x, y), n) == 1 and y % a == 0 and (x % a == 1 % a or x % a == -1 % a)
    }
    return len({frozenset({v, ((-v[0]) % n, (-v[1]) % n)}) for v in vs})


PAIRS = [(a, b) for a in range(1, 41) for b in range(1, 41) if a * b <= 40]


@pytest.mark.parametrize("a, b", PAIRS)
def test_map_degree_matches_coset_index(a, b):
    assert map_degree(a, b) == coset_index_oracle(a, b)


def test_map_degree_examples():
    assert map_degree(1, 37) == 684
    assert map_degree(37, 4) == 12
    assert map_degree(2, 2) == 2
    with pytest.raises(ValueError):
        map_degree(0, 3)


def test_degree_from_orbit():
    assert degree_from_orbit(2, 3) == 3
    assert degree_from_orbit(37, 36) == 18
    with pytest.raises(ValueError):
        degree_from_orbit(5, 3)


def test_1225_b1_mod_37_orbits(fixtures):
    H = fixtures["1225.b1"].group().reduce_mod(37).adjoin_minus_identity()
    sizes = sorted(r.size for r in H.orbits() if r.vector_order == 37)
    assert sizes == [36, 444, 444, 444]
    degrees = sorted(c.degree for c in point_classes(H.orbits()) if c.level == 37)
    assert degrees == [18, 222, 222, 222]


def _fixture_tables(fixtures):
    from isoscreen.levels import reduce_level

    for rec in fixtures.values():
        G = rec.group()
        H = G.reduce_mod(reduce_level(G).reduced_level).adjoin_minus_identity()
        yield rec.label, H


def test_qualifying_divisors_form_a_lattice(fixtures):
    for label, H in _fixture_tables(fixtures):
        table = H.orbits()
        for r in table:
            qual = qualifying_divisors(table, r.representative)
            top = qual[-1]
            assert qual[0] == 1, label
            assert all(top % e == 0 for e in qual), label
            assert set(qual) == set(divisors(top)), label
            primitive_target(table, H, r.representative)


def test_primitive_targets_divide_m0(fixtures):
    for label, H in _fixture_tables(fixtures):
        for e in primitive_degrees(H):
            assert H.modulus % e.target_level == 0, label
            assert e.source_level % e.target_level == 0, label


def test_primitive_point_sets(fixtures):
    def targets(label):
        H = dict(_fixture_tables({label: fixtures[label]}))[label]
        return Counter({(e.target_level, e.target_orbit): e.target for e in primitive_degrees(H)}.values())

    assert targets("147.b1") == Counter({(1, 1): 1, (13, 39): 2, (13, 6): 1})
    assert targets("232544.f1") == Counter({(1, 1): 1})
    assert set(targets("15.a7")) == {(1, 1), (2, 1), (2, 2), (4, 1), (8, 2), (16, 4), (32, 8)}


def test_no_primitive_points_above_37_for_1225_b1(fixtures):
    H = dict(_fixture_tables({"1225.b1": fixtures["1225.b1"]}))["1225.b1"]
    assert H.modulus == 148
    D = primitive_degrees(H)
    assert {e.target_level for e in D} == {1, 37}
    assert {e.source_level for e in D} == {1, 2, 4, 37, 74, 148}


def test_scaling_bijection_preserves_degrees(random_corpus):
    """A vector of order n mod m is (m/n) w for w of order n mod n, with equal orbit sizes."""
    for G in random_corpus:
        m = G.modulus
        H = G.adjoin_minus_identity()
        table = H.orbits()
        small = {}
        for r in table:
            n = r.vector_order
            if n not in small:
                small[n] = G.reduce_mod(n).adjoin_minus_identity().orbits()
            s = m // n
            v = r.representative
            w = (v[0] // s, v[1] // s)
            assert vector_order(w, n) == n
            rec = small[n].record(w)
            assert rec.size == r.size
            assert record_degree(rec) == record_degree(r)
