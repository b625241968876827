"""Small integer helpers: factorization, divisors, unit groups."""

from __future__ import annotations

from functools import lru_cache
from math import gcd


@lru_cache(maxsize=4096)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n`` as ``((p, e), ...)`` with increasing ``p``."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factor(n)]


def prime_powers(n: int) -> list[int]:
    """The unitary prime-power divisors ``p^e || n``."""
    return [p**e for p, e in factor(n)]


def valuation(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@lru_cache(maxsize=4096)
def divisors(n: int) -> tuple[int, ...]:
    ds = [1]
    for p, e in factor(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return tuple(sorted(ds))


def is_prime(n: int) -> bool:
    return n >= 2 and factor(n) == ((n, 1),)


def euler_phi(n: int) -> int:
    out = n
    for p in prime_divisors(n):
        out = out // p * (p - 1)
    return out


def is_unitary_divisor(q: int, n: int) -> bool:
    return q >= 1 and n % q == 0 and gcd(q, n // q) == 1


def units(n: int) -> list[int]:
    if n == 1:
        return [0]
    return [u for u in range(1, n) if gcd(u, n) == 1]


def unit_closure(gens: list[int], n: int) -> set[int]:
    """Subgroup of ``(Z/nZ)^*`` generated by ``gens``."""
    one = 1 % n
    seen = {one}
    frontier = [one]
    gens = [g % n for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % n
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def unit_generators(n: int) -> list[int]:
    """A small generating set of ``(Z/nZ)^*`` (greedy, deterministic)."""
    target = euler_phi(n)
    gens: list[int] = []
    have = unit_closure(gens, n)
    for u in units(n):
        if len(have) == target:
            break
        if u not in have:
            gens.append(u)
            have = unit_closure(gens, n)
    return gens
