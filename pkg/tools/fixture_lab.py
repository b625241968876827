"""Helpers for constructing fixture images as fiber products of local groups.

Repo tooling only: used by build_fixtures.py, not part of the package.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Sequence
from math import prod

from isoscreen.gl2core import ImageGroup, Tup, _act, _det, _mul
from isoscreen.arith import prime_powers

Components = dict[int, Tup]


def legendre(x: int, p: int) -> int:
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def chi4(u: int) -> int:
    """Nontrivial character of (Z/4Z)^*."""
    return 1 if u % 4 == 1 else -1


def chi8(u: int, kind: int) -> int:
    """Quadratic characters of (Z/8Z)^* cutting out Q(sqrt(kind)), kind in {2, -2}."""
    u %= 8
    if kind == 2:
        return 1 if u in (1, 7) else -1
    return 1 if u in (1, 3) else -1


def sgn2(g: Tup) -> int:
    """Sign of g mod 2 as a permutation of the three nonzero vectors of F2^2."""
    pts = [(1, 0), (0, 1), (1, 1)]
    img = [pts.index(_act(tuple(x % 2 for x in g), v, 2)) for v in pts]
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if img[i] > img[j])
    return -1 if inv % 2 else 1


def det(g: Tup, q: int) -> int:
    return _det(g, q)


def random_element(G: ImageGroup, rng: random.Random) -> Tup:
    n = G.modulus
    chain = G.chain
    g = (1 % n, 0, 0, 1 % n)
    for trans in chain.trans:
        g = _mul(g, rng.choice(list(trans.values())), n)
    return g


def crt(parts: Components, n: int) -> Tup:
    out = []
    for k in range(4):
        x = 0
        for q, g in parts.items():
            m = n // q
            x += g[k] * m * pow(m, -1, q)
        out.append(x % n)
    return tuple(out)


def fiber_product(
    n: int,
    local: dict[int, ImageGroup],
    constraints: Sequence[Callable[[Components], bool]] = (),
    index: int | None = None,
    ngens: int = 6,
    seed: int = 0,
) -> ImageGroup:
    """Subgroup of prod_q local[q] cut out by ``constraints``, as a group mod n.

    ``index`` is the expected index of the result in the product (defaults
    to 2 per constraint); generators are drawn until the order matches.
    """
    assert sorted(local) == sorted(prime_powers(n)), (sorted(local), n)
    rng = random.Random(seed)
    expected = prod(G.order() for G in local.values()) // (index if index is not None else 2 ** len(constraints))
    gens: list[Tup] = []
    while True:
        while True:
            parts = {q: random_element(G, rng) for q, G in local.items()}
            if all(c(parts) for c in constraints):
                break
        gens.append(crt(parts, n))
        if len(gens) >= ngens:
            G = ImageGroup(n, gens)
            order = G.order()
            if order == expected:
                return G
            if len(gens) > 60:
                raise RuntimeError(f"generated order {order}, expected {expected}")


def borel(p: int, cond: Callable[[int, int], bool], k: int = 6, seed: int = 1) -> ImageGroup:
    """Subgroup {[[a, b], [0, d]] : cond(a, d)} of GL2(F_p), from random generators."""
    els = [(a, b, 0, d) for a in range(1, p) for d in range(1, p) for b in range(p) if cond(a, d)]
    rng = random.Random(seed)
    while True:
        G = ImageGroup(p, rng.sample(els, k))
        if G.order() == len(els):
            return G


def subgroup_of(n: int, els: Sequence[Tup], k: int = 8, seed: int = 2) -> ImageGroup:
    """Group generated by random members of the subgroup with element list ``els``."""
    rng = random.Random(seed)
    while True:
        G = ImageGroup(n, rng.sample(list(els), k))
        if G.order() == len(els):
            return G


def cubic_class(x: int, p: int, root: int) -> int:
    """Class of x in F_p^* / cubes, as k with x^((p-1)/3) = root^k."""
    y = pow(x, (p - 1) // 3, p)
    for k in range(3):
        if pow(root, k, p) == y:
            return k
    raise ValueError(f"{root} is not a primitive cube root of unity mod {p}")


def quadratic_characters(G: ImageGroup) -> list[Callable[[Tup], int]]:
    """All nontrivial homomorphisms G -> {1, -1}, via cosets of G^2[G, G]."""
    from itertools import combinations

    from isoscreen.gl2core import _inv

    n = G.modulus
    els = sorted(G.elements())
    gens = {_mul(g, g, n) for g in els}
    gens |= {_mul(_mul(g, h, n), _mul(_inv(g, n), _inv(h, n), n), n) for g in els for h in els}
    K = ImageGroup(n, sorted(gens)).elements()
    cosets: list[frozenset] = []
    seen: set[Tup] = set()
    for g in els:
        if g not in seen:
            c = frozenset(_mul(g, k, n) for k in K)
            cosets.append(c)
            seen |= c
    idx = {g: i for i, c in enumerate(cosets) for g in c}
    one = idx[(1 % n, 0, 0, 1 % n)]
    reps = [min(c) for c in cosets]
    r = len(cosets)
    chars = []
    others = [i for i in range(r) if i != one]
    for S in combinations(others, r // 2 - 1):
        S = frozenset(S) | {one}
        if all(idx[_mul(reps[i], reps[j], n)] in S for i in S for j in S):
            chars.append(lambda g, S=S: 1 if idx[g] in S else -1)
    return chars
