"""Genus of modular curves X_H via the coset action of SL2(Z/NZ)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import divisors, euler_phi, prime_divisors, unit_generators
from .gl2core import ImageGroup, _identity, _mul

SIGMA = (0, -1, 1, 0)
TAU = (1, 1, 0, 1)


class DeterminantError(ValueError):
    """The determinant of the group is not all of (Z/NZ)^*."""


@dataclass(frozen=True)
class CongruenceSignature:
    level: int
    index: int
    nu2: int
    nu3: int
    cusps: int
    genus: int


def _genus_from(index: int, nu2: int, nu3: int, cusps: int) -> int:
    g = 1 + Fraction(index, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(cusps, 2)
    if g.denominator != 1 or g < 0:
        raise ArithmeticError(f"non-integral genus {g} from ({index}, {nu2}, {nu3}, {cusps})")
    return int(g)


def _fixed(perm: list[int]) -> int:
    return sum(1 for i, j in enumerate(perm) if i == j)


def _cycles(perm: list[int]) -> int:
    seen = [False] * len(perm)
    count = 0
    for i in range(len(perm)):
        if not seen[i]:
            count += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return count


def genus_of_image(H: ImageGroup) -> CongruenceSignature:
    """Signature of X_H for H <= GL2(Z/NZ) with surjective determinant.

    Enumerates the cosets of S = +-(H cap SL2) in SL2(Z/NZ), which is
    generated by sigma and tau, and reads off elliptic points and cusps
    from the permutation action.  Adjoining -I does not change X_H.
    """
    n = H.modulus
    if n == 1:
        return CongruenceSignature(1, 1, 1, 1, 1, 0)
    if not H.has_surjective_det():
        raise DeterminantError(f"det of the mod-{n} image is not surjective")
    chain = H.sl2_part().adjoin_minus_identity().chain
    sigma = tuple(x % n for x in SIGMA)
    tau = tuple(x % n for x in TAU)

    start = chain.canonical_coset(_identity(n))
    index = {start: 0}
    reps = [start]
    perm_s: list[int] = []
    perm_t: list[int] = []
    i = 0
    while i < len(reps):
        h = reps[i]
        for t, perm in ((sigma, perm_s), (tau, perm_t)):
            key = chain.canonical_coset(_mul(t, h, n))
            j = index.get(key)
            if j is None:
                j = len(reps)
                index[key] = j
                reps.append(key)
            perm.append(j)
        i += 1

    perm_st = [perm_s[perm_t[k]] for k in range(len(reps))]
    mu = len(reps)
    nu2 = _fixed(perm_s)
    nu3 = _fixed(perm_st)
    cusps = _cycles(perm_t)
    return CongruenceSignature(n, mu, nu2, nu3, cusps, _genus_from(mu, nu2, nu3, cusps))


def b1_group(n: int) -> ImageGroup:
    """B1(n): upper triangular with upper-left entry 1.  X_{B1(n)} = X1(n)."""
    gens = [(1, 1, 0, 1)] + [(1, 0, 0, u) for u in unit_generators(n)]
    return ImageGroup(n, gens)


@lru_cache(maxsize=None)
def genus_X1(n: int) -> int:
    return genus_of_image(b1_group(n)).genus


def genus_X1_formula(n: int) -> int:
    """Closed form for the genus of X1(n); independent of the coset enumeration."""
    if n <= 4:
        return 0
    mu = Fraction(n * n, 2)
    for p in prime_divisors(n):
        mu *= 1 - Fraction(1, p * p)
    cusps = Fraction(sum(euler_phi(d) * euler_phi(n // d) for d in divisors(n)), 2)
    return _genus_from(int(mu), 0, 0, int(cusps))
