"""Non-surjective primes and the level of the m-adic representation."""

from __future__ import annotations

from dataclasses import dataclass

from .arith import divisors, factor, prime_divisors, valuation
from .genus import DeterminantError
from .gl2core import ImageGroup


def gl2_order_formula(n: int) -> int:
    """#GL2(Z/nZ) = n^4 prod_{p | n} (1 - 1/p)(1 - 1/p^2)."""
    out = 1
    for p, e in factor(n):
        out *= p ** (4 * (e - 1)) * (p * p - 1) * (p * p - p)
    return out


def kernel_size(n: int, m0: int) -> int:
    """#ker(GL2(Z/nZ) -> GL2(Z/m0Z)); reduction is surjective so this is a quotient."""
    if n % m0:
        raise ValueError(f"{m0} does not divide {n}")
    return gl2_order_formula(n) // gl2_order_formula(m0)


@dataclass(frozen=True)
class LevelProfile:
    adelic_level: int
    nonsurjective_primes: tuple[int, ...]
    m: int
    restricted_level: int
    reduced_level: int


def nonsurjective_primes(G: ImageGroup) -> set[int]:
    """{2, 3} together with every prime l >= 5 dividing N where G mod l is not GL2(F_l).

    For l >= 5 a full mod-l image forces a full l-adic image, so the mod-l
    test decides l-adic surjectivity.
    """
    if not G.has_surjective_det():
        raise DeterminantError(f"det of the mod-{G.modulus} image is not surjective")
    out = {2, 3}
    for ell in prime_divisors(G.modulus):
        if ell >= 5 and G.reduce_mod(ell).order() != gl2_order_formula(ell):
            out.add(ell)
    return out


def reduce_level(G: ImageGroup) -> LevelProfile:
    N = G.modulus
    primes = sorted(nonsurjective_primes(G))
    m = 1
    n = 1
    for ell in primes:
        m *= ell
        n *= ell ** valuation(N, ell)
    order_n = G.reduce_mod(n).order()
    for d in divisors(n):
        if order_n == G.reduce_mod(d).order() * kernel_size(n, d):
            m0 = d
            break
    else:  # pragma: no cover - d = n always satisfies the identity
        raise AssertionError("no divisor satisfies the counting identity")
    return LevelProfile(N, tuple(primes), m, n, m0)
