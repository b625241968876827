"""Degrees of points on X1(n) from orbit data, and primitive points.

A nonzero vector v of order n in (Z/mZ)^2 stands for a point x on X1(n)
above j(E); with H = <G, -I> its degree is #Hv/2 when n > 2 and #Hv
otherwise.  Multiplying v by e | n moves x down to X1(n/e).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import divisors, prime_divisors
from .gl2core import ImageGroup, OrbitRecord, OrbitTable, Vec


def map_degree(a: int, b: int) -> int:
    """Degree of the natural map X1(ab) -> X1(a)."""
    if a < 1 or b < 1:
        raise ValueError("levels must be positive")
    cf = Fraction(1, 2) if a <= 2 < a * b else Fraction(1)
    deg = cf * b * b
    for p in prime_divisors(b):
        if a % p:
            deg *= 1 - Fraction(1, p * p)
    assert deg.denominator == 1, (a, b, deg)
    return int(deg)


def degree_from_orbit(order: int, orbit_size: int) -> int:
    if order <= 2:
        return orbit_size
    if orbit_size % 2:
        raise ValueError(f"odd orbit size {orbit_size} at level {order}: -I missing from the group")
    return orbit_size // 2


def record_degree(rec: OrbitRecord) -> int:
    return degree_from_orbit(rec.vector_order, rec.size)


def point_degree(H: ImageGroup, v: Vec, orbit_size: int) -> int:
    from .gl2core import vector_order

    return degree_from_orbit(vector_order(v, H.modulus), orbit_size)


@dataclass(frozen=True)
class PointClass:
    level: int
    degree: int
    orbit_ref: int
    representative: Vec


@dataclass(frozen=True, order=True)
class PrimitiveEntry:
    """<n, (a, d)>: a point of level n whose primitive point has level a and degree d."""

    source_level: int
    target_level: int
    target_degree: int
    source_orbit: int = 0
    target_orbit: int = 0

    @property
    def target(self) -> tuple[int, int]:
        return (self.target_level, self.target_degree)


def point_classes(table: OrbitTable) -> list[PointClass]:
    return [
        PointClass(r.vector_order, record_degree(r), oid, r.representative)
        for oid, r in enumerate(table.records)
    ]


def qualifying_divisors(table: OrbitTable, v: Vec) -> list[int]:
    """All e | n with deg(x) = deg(image of x on X1(n/e)) * deg(X1(n) -> X1(n/e))."""
    m = table.modulus
    rec = table.record(v)
    n = rec.vector_order
    d = record_degree(rec)
    out = []
    for e in divisors(n):
        w = (e * v[0] % m, e * v[1] % m)
        if d == record_degree(table.record(w)) * map_degree(n // e, e):
            out.append(e)
    return out


def primitive_target(table: OrbitTable, H: ImageGroup, v: Vec) -> PrimitiveEntry:
    """Primitive point below the point of v: the largest qualifying divisor.

    The qualifying set should be closed under taking divisors with a
    single maximum; both are checked here.
    """
    m = table.modulus
    qual = qualifying_divisors(table, v)
    top = qual[-1]
    if any(top % e for e in qual) or any(e not in qual for e in divisors(top)):
        raise AssertionError(f"qualifying divisors {qual} of {v} mod {m} are not a divisor lattice")
    n = table.record(v).vector_order
    w = (top * v[0] % m, top * v[1] % m)
    rec = table.record(w)
    return PrimitiveEntry(n, n // top, record_degree(rec), table.orbit_id(v), table.orbit_id(w))


def primitive_degrees(G: ImageGroup) -> list[PrimitiveEntry]:
    """One entry per orbit of <G, -I> on (Z/m0Z)^2, the zero orbit included."""
    H = G.adjoin_minus_identity()
    table = H.orbits()
    return [primitive_target(table, H, r.representative) for r in table.records]
