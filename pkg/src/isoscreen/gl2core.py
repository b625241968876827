"""Subgroups of GL2(Z/NZ): matrices, stabilizer chains, reductions and orbits.

Matrices act on column vectors, ``g.(x, y) = (ax + by, cx + dy)``, so the
stabilizer of ``e1 = (1, 0)`` in GL2(Z/NZ) is the group of matrices with
first column ``(1, 0)``, i.e. the structure behind X1(N).

Internally a matrix is a plain 4-tuple ``(a, b, c, d)`` reduced mod N; the
public :class:`Mat2` wraps one together with its modulus.
"""

from __future__ import annotations

import threading
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from math import gcd

from .arith import is_unitary_divisor, prime_powers, unit_closure, euler_phi

Tup = tuple[int, int, int, int]
Vec = tuple[int, int]


class ModulusMismatch(ValueError):
    pass


class NotInvertible(ValueError):
    pass


# -- raw tuple arithmetic -------------------------------------------------


def _mul(x: Tup, y: Tup, n: int) -> Tup:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n)


def _inv(x: Tup, n: int) -> Tup:
    if n == 1:
        return (0, 0, 0, 0)
    a, b, c, d = x
    t = pow((a * d - b * c) % n, -1, n)
    return (d * t % n, -b * t % n, -c * t % n, a * t % n)


def _act(g: Tup, v: Vec, n: int) -> Vec:
    return ((g[0] * v[0] + g[1] * v[1]) % n, (g[2] * v[0] + g[3] * v[1]) % n)


def _det(x: Tup, n: int) -> int:
    return (x[0] * x[3] - x[1] * x[2]) % n


def _identity(n: int) -> Tup:
    one = 1 % n
    return (one, 0, 0, one)


def _reduce(x: Sequence[int], n: int) -> Tup:
    return (x[0] % n, x[1] % n, x[2] % n, x[3] % n)


def vector_order(v: Vec, n: int) -> int:
    """Additive order of ``v`` in ``(Z/nZ)^2``."""
    return n // gcd(gcd(v[0], v[1]), n)


# -- Mat2 -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Mat2:
    """An invertible 2x2 matrix over Z/NZ, entries reduced into [0, N)."""

    modulus: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        n = self.modulus
        if n < 1:
            raise ValueError(f"modulus must be positive, got {n}")
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) % n)
        if gcd(self.det, n) != 1:
            raise NotInvertible(f"det {self.det} is not a unit mod {n}")

    @classmethod
    def of(cls, n: int, entries: Sequence[int]) -> Mat2:
        a, b, c, d = entries
        return cls(n, a, b, c, d)

    @classmethod
    def identity(cls, n: int) -> Mat2:
        return cls(n, 1, 0, 0, 1)

    @property
    def entries(self) -> Tup:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.modulus

    def __matmul__(self, other: Mat2) -> Mat2:
        return mat_mul(self, other)

    def inverse(self) -> Mat2:
        return Mat2.of(self.modulus, _inv(self.entries, self.modulus))

    def apply(self, v: Vec) -> Vec:
        return _act(self.entries, v, self.modulus)

    def reduce(self, m: int) -> Mat2:
        if self.modulus % m:
            raise ValueError(f"{m} does not divide {self.modulus}")
        return Mat2.of(m, self.entries)

    def __repr__(self) -> str:
        return f"Mat2(mod {self.modulus}: [[{self.a},{self.b}],[{self.c},{self.d}]])"


def mat_mul(A: Mat2, B: Mat2) -> Mat2:
    if A.modulus != B.modulus:
        raise ModulusMismatch(f"cannot multiply mod {A.modulus} by mod {B.modulus}")
    return Mat2.of(A.modulus, _mul(A.entries, B.entries, A.modulus))


# -- stabilizer chain -----------------------------------------------------


def natural_base(n: int) -> list[Vec]:
    """Base for GL2(Z/nZ) acting on (Z/nZ)^2.

    For each prime power q || n the vectors (n/q)e1, (n/q)e2.  Their
    pointwise stabilizer is trivial by CRT, and each orbit lives in the
    q-torsion, so orbit sizes stay below q^2 even when n is large.
    """
    base: list[Vec] = []
    for q in prime_powers(n):
        s = n // q
        base.append((s, 0))
        base.append((0, s))
    return base


class StabilizerChain:
    """Deterministic Schreier-Sims over the natural base.

    ``levels[i]`` holds the strong generators fixing ``base[:i]`` and a
    transversal ``{point: u}`` with ``u . base[i] == point``.
    """

    def __init__(self, n: int, generators: Iterable[Tup]):
        self.n = n
        self.base = natural_base(n)
        ident = _identity(n)
        k = len(self.base)
        self.gens: list[list[Tup]] = [[] for _ in range(k)]
        self.trans: list[dict[Vec, Tup]] = [{b: ident} for b in self.base]
        self._itrans: list[dict[Vec, Tup]] = [{b: ident} for b in self.base]
        # Schreier generators (point, generator) already sifted, per level
        self._done: list[set[tuple[Vec, Tup]]] = [set() for _ in range(k)]
        gens = [g for g in dict.fromkeys(generators) if g != ident]
        for g in gens:
            for i in range(k):
                self.gens[i].append(g)
                if _act(g, self.base[i], n) != self.base[i]:
                    break
        for i in range(k):
            self._extend(i)
        self._complete()

    def _extend(self, i: int) -> None:
        """Grow the orbit of base[i] under gens[i]; existing transversal entries are kept."""
        n = self.n
        gens = self.gens[i]
        trans = self.trans[i]
        itrans = self._itrans[i]
        frontier = list(trans)
        while frontier:
            nxt = []
            for x in frontier:
                u = trans[x]
                for g in gens:
                    y = _act(g, x, n)
                    if y not in trans:
                        v = _mul(g, u, n)
                        trans[y] = v
                        itrans[y] = _inv(v, n)
                        nxt.append(y)
            frontier = nxt

    def sift(self, h: Tup, start: int = 0) -> tuple[Tup, int]:
        """Strip ``h`` from level ``start``; returns the residue and the level it stopped at."""
        n = self.n
        base = self.base
        for i in range(start, len(base)):
            w = self._itrans[i].get(_act(h, base[i], n))
            if w is None:
                return h, i
            h = _mul(w, h, n)
        return h, len(base)

    def _complete(self) -> None:
        n = self.n
        k = len(self.base)
        i = k - 1
        # Schreier-Sims: restart at the deepest level that received a new
        # generator; transversals only grow, so checked pairs stay checked
        while i >= 0:
            added = False
            trans = self.trans[i]
            itrans = self._itrans[i]
            done = self._done[i]
            for x, u in list(trans.items()):
                for s in self.gens[i]:
                    if (x, s) in done:
                        continue
                    su = _mul(s, u, n)
                    y = _act(s, x, n)
                    if trans[y] == su:  # tree edge, trivial generator
                        done.add((x, s))
                        continue
                    res, j = self.sift(_mul(itrans[y], su, n), i + 1)
                    if j < k:
                        for level in range(i + 1, j + 1):
                            self.gens[level].append(res)
                            self._extend(level)
                        i = j
                        added = True
                        break
                    done.add((x, s))
                if added:
                    break
            if not added:
                i -= 1

    def order(self) -> int:
        out = 1
        for t in self.trans:
            out *= len(t)
        return out

    def contains(self, h: Tup) -> bool:
        _, j = self.sift(h)
        return j == len(self.base)

    def canonical_coset(self, h: Tup) -> Tup:
        """Canonical representative of the left coset ``h.S`` of this group ``S``.

        Picks, level by level, the element of ``h.S`` whose base images are
        lexicographically least.
        """
        n = self.n
        for i in range(len(self.base)):
            best = None
            best_u = None
            for x, u in self.trans[i].items():
                y = _act(h, x, n)
                if best is None or y < best:
                    best, best_u = y, u
            h = _mul(h, best_u, n)
        return h


# -- groups ---------------------------------------------------------------


@dataclass(frozen=True)
class OrbitRecord:
    representative: Vec
    size: int
    vector_order: int


class OrbitTable:
    """Partition of (Z/NZ)^2 into orbits, numbered by least member."""

    def __init__(self, modulus: int, ids: list[int], records: list[OrbitRecord]):
        self.modulus = modulus
        self._ids = ids
        self.records = records

    def orbit_id(self, v: Vec) -> int:
        n = self.modulus
        return self._ids[(v[0] % n) * n + v[1] % n]

    def record(self, v: Vec) -> OrbitRecord:
        return self.records[self.orbit_id(v)]

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[OrbitRecord]:
        return iter(self.records)

    def members(self, oid: int) -> list[Vec]:
        n = self.modulus
        return [(i // n, i % n) for i, o in enumerate(self._ids) if o == oid]


class ImageGroup:
    """A subgroup of GL2(Z/NZ) given by generators.

    Order, membership and the stabilizer chain are computed lazily, once.
    Modulus 1 is the trivial group.
    """

    def __init__(self, modulus: int, generators: Iterable[Mat2 | Sequence[int]] = ()):
        if modulus < 1:
            raise ValueError(f"modulus must be positive, got {modulus}")
        self.modulus = modulus
        gens: list[Tup] = []
        for g in generators:
            if isinstance(g, Mat2):
                if g.modulus != modulus:
                    raise ModulusMismatch(f"generator mod {g.modulus} in group mod {modulus}")
                t = g.entries
            else:
                t = _reduce(g, modulus)
            if gcd(_det(t, modulus), modulus) != 1:
                raise NotInvertible(f"generator {list(t)} is not invertible mod {modulus}")
            gens.append(t)
        self._gens: tuple[Tup, ...] = tuple(dict.fromkeys(gens))
        self._lock = threading.Lock()
        self._chain: StabilizerChain | None = None
        self._orbits: OrbitTable | None = None

    def __reduce__(self):
        # cached chain and lock stay behind; the copy recomputes on demand
        return (ImageGroup, (self.modulus, self._gens))

    @classmethod
    def full(cls, n: int) -> ImageGroup:
        """GL2(Z/nZ) from a small generating set."""
        from .arith import unit_generators

        gens: list[Sequence[int]] = [(1, 1, 0, 1), (0, -1, 1, 0)]
        gens += [(u, 0, 0, 1) for u in unit_generators(n)]
        return cls(n, gens)

    @property
    def generators(self) -> list[Mat2]:
        return [Mat2.of(self.modulus, g) for g in self._gens]

    @property
    def raw_generators(self) -> tuple[Tup, ...]:
        return self._gens

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            with self._lock:
                if self._chain is None:
                    self._chain = StabilizerChain(self.modulus, self._gens)
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def contains(self, A: Mat2 | Sequence[int]) -> bool:
        if isinstance(A, Mat2):
            if A.modulus != self.modulus:
                raise ModulusMismatch(f"matrix mod {A.modulus} vs group mod {self.modulus}")
            A = A.entries
        return self.chain.contains(_reduce(A, self.modulus))

    def __contains__(self, A: Mat2 | Sequence[int]) -> bool:
        return self.contains(A)

    def same_group(self, other: ImageGroup) -> bool:
        return (
            self.modulus == other.modulus
            and all(self.contains(g) for g in other._gens)
            and all(other.contains(g) for g in self._gens)
        )

    def reduce_mod(self, a: int) -> ImageGroup:
        if a < 1 or self.modulus % a:
            raise ValueError(f"{a} does not divide {self.modulus}")
        return ImageGroup(a, [_reduce(g, a) for g in self._gens])

    def crt_project(self, q: int) -> ImageGroup:
        if not is_unitary_divisor(q, self.modulus):
            raise ValueError(f"{q} is not a unitary divisor of {self.modulus}")
        return self.reduce_mod(q)

    def adjoin_minus_identity(self) -> ImageGroup:
        n = self.modulus
        minus = _reduce((-1, 0, 0, -1), n)
        if self.contains(minus):
            return self
        return ImageGroup(n, list(self._gens) + [minus])

    def det_image(self) -> set[int]:
        return unit_closure([_det(g, self.modulus) for g in self._gens], self.modulus)

    def has_surjective_det(self) -> bool:
        return len(self.det_image()) == euler_phi(self.modulus)

    def sl2_part(self) -> ImageGroup:
        """The kernel of det on this group, via Schreier generators over the det image."""
        n = self.modulus
        gens = self._gens
        # transversal over the det image
        rep = {1 % n: _identity(n)}
        frontier = [1 % n]
        while frontier:
            nxt = []
            for d in frontier:
                for g in gens:
                    e = d * _det(g, n) % n
                    if e not in rep:
                        rep[e] = _mul(rep[d], g, n)
                        nxt.append(e)
            frontier = nxt
        out = []
        for d, t in rep.items():
            for g in gens:
                e = d * _det(g, n) % n
                out.append(_mul(_mul(t, g, n), _inv(rep[e], n), n))
        return ImageGroup(n, out)

    def elements(self, limit: int = 10**6) -> set[Tup]:
        """Brute-force closure; the cross-check oracle for small groups."""
        n = self.modulus
        ident = _identity(n)
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self._gens:
                    y = _mul(g, x, n)
                    if y not in seen:
                        seen.add(y)
                        if len(seen) > limit:
                            raise RuntimeError(f"closure exceeded {limit} elements")
                        nxt.append(y)
            frontier = nxt
        return seen

    def orbits(self) -> OrbitTable:
        if self._orbits is None:
            table = _orbit_table(self.modulus, self._gens)
            with self._lock:
                if self._orbits is None:
                    self._orbits = table
        return self._orbits

    def __repr__(self) -> str:
        return f"ImageGroup(mod {self.modulus}, {len(self._gens)} generators)"


def _orbit_table(n: int, gens: Sequence[Tup]) -> OrbitTable:
    size = n * n
    ids = [-1] * size
    records: list[OrbitRecord] = []
    for start in range(size):
        if ids[start] >= 0:
            continue
        oid = len(records)
        ids[start] = oid
        frontier = [start]
        count = 1
        while frontier:
            nxt = []
            for i in frontier:
                x, y = divmod(i, n)
                for a, b, c, d in gens:
                    j = ((a * x + b * y) % n) * n + (c * x + d * y) % n
                    if ids[j] < 0:
                        ids[j] = oid
                        count += 1
                        nxt.append(j)
            frontier = nxt
        rep = divmod(start, n)
        records.append(OrbitRecord(rep, count, vector_order(rep, n)))
    return OrbitTable(n, ids, records)


# -- module-level operations ----------------------------------------------


def group_order(G: ImageGroup) -> int:
    return G.order()


def contains(G: ImageGroup, A: Mat2) -> bool:
    return G.contains(A)


def adjoin_minus_identity(G: ImageGroup) -> ImageGroup:
    return G.adjoin_minus_identity()


def reduce_mod(G: ImageGroup, a: int) -> ImageGroup:
    return G.reduce_mod(a)


def crt_project(G: ImageGroup, q: int) -> ImageGroup:
    return G.crt_project(q)


def orbits(G: ImageGroup) -> OrbitTable:
    return G.orbits()
