"""Regenerate the bundled image fixtures.

Each image is assembled as a fiber product of local groups whose shape
(Borel, Cartan normalizer, entanglement characters) is chosen so that the
screening outcome recorded for the curve is reproduced.  All randomness is
seeded, so the output is byte-stable.  Every fixture is screened before it
is written and the expected outcome is asserted.

    python3 tools/build_fixtures.py [--date YYYY-MM-DD]
"""

from __future__ import annotations

import argparse
import datetime as dt
import itertools
import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from fixture_lab import (  # noqa: E402
    borel,
    chi4,
    chi8,
    cubic_class,
    det,
    fiber_product,
    legendre,
    quadratic_characters,
    sgn2,
    subgroup_of,
)

from isoscreen.genus import genus_of_image  # noqa: E402
from isoscreen.gl2core import ImageGroup, _inv, _mul  # noqa: E402
from isoscreen.pipeline import screen  # noqa: E402
from isoscreen.records import ImageRecord  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "src" / "isoscreen" / "data"


def sq(x: int, p: int) -> bool:
    return legendre(x, p) == 1


def curve_1225(which: str) -> ImageGroup:
    """Level 5180; mod-37 image Borel with d (b1) or a (b2) a cube, entangled with 4, 5, 7."""
    cube = lambda x: pow(x, 12, 37) == 1  # noqa: E731
    cond = (lambda a, d: cube(d)) if which == "b1" else (lambda a, d: cube(a))
    local = {4: ImageGroup.full(4), 5: ImageGroup.full(5), 7: ImageGroup.full(7), 37: borel(37, cond)}
    cons = [
        lambda c: sgn2(c[4]) == chi4(det(c[4], 4)),
        lambda c: legendre(c[37][0], 37) == legendre(det(c[5], 5), 5) * legendre(det(c[7], 7), 7),
    ]
    return fiber_product(5180, local, cons, seed=3)


def curve_21() -> ImageGroup:
    local = {2: ImageGroup.full(2), 3: borel(3, lambda a, d: a == 1), 7: borel(7, lambda a, d: sq(a, 7))}
    return fiber_product(42, local, [lambda c: sgn2(c[2]) == legendre(det(c[3], 3), 3)])


def curve_borel_sq(p: int) -> ImageGroup:
    """Level 2p; Borel mod p with a square, d tied to the mod-2 sign."""
    local = {2: ImageGroup.full(2), p: borel(p, lambda a, d: sq(a, p))}
    return fiber_product(2 * p, local, [lambda c: sgn2(c[2]) == legendre(c[p][3], p)])


def curve_24() -> ImageGroup:
    """Index-2 subgroup of B0(24) not containing -I; {+-1} times it is B0(24)."""
    els = [
        (a, b, 0, d)
        for a in range(24)
        for b in range(24)
        for d in range(24)
        if a % 2 and a % 3 and d % 2 and d % 3 and legendre(a, 3) == chi8(d, 2)
    ]
    return subgroup_of(24, els, k=6, seed=5)


def curve_28() -> ImageGroup:
    """Mod 4 an S3 with a size-3 orbit; mod 7 Borel with a square."""
    s3 = ImageGroup(4, [(0, 3, 1, 3), (0, 1, 1, 0)])
    return fiber_product(28, {4: s3, 7: borel(7, lambda a, d: sq(a, 7))}, [], ngens=4)


def curve_147() -> ImageGroup:
    local = {
        2: ImageGroup.full(2),
        3: ImageGroup.full(3),
        7: ImageGroup.full(7),
        13: borel(13, lambda a, d: sq(d, 13)),
    }
    c13 = lambda x: cubic_class(x, 13, 3)  # noqa: E731
    c7 = lambda x: cubic_class(x, 7, 2)  # noqa: E731
    cons = [
        lambda c: sgn2(c[2]) == legendre(det(c[3], 3), 3) * legendre(c[13][0], 13),
        lambda c: c13(c[13][3]) == c7(det(c[7], 7)),
    ]
    return fiber_product(546, local, cons, index=6)


def curve_232544() -> ImageGroup:
    """Mod 11 the normalizer of a nonsplit Cartan, entangled with 4 and 43."""
    nns = ImageGroup(11, [(1, 10, 1, 1), (2, 8, 3, 2), (5, 10, 1, 5), (1, 0, 0, 10)])
    assert nns.order() == 240
    eps = lambda g: 1 if g[0] == g[3] and (g[1] + g[2]) % 11 == 0 else -1  # noqa: E731
    local = {4: ImageGroup.full(4), 11: nns, 43: ImageGroup.full(43)}
    cons = [
        lambda c: sgn2(c[4]) * chi4(det(c[4], 4)) == eps(c[11]),
        lambda c: sgn2(c[4]) == legendre(det(c[43], 43), 43),
    ]
    return fiber_product(1892, local, cons)


def curve_75072() -> ImageGroup:
    """Mod 2 image of order 2; two non-det quadratic characters of the mod-4 image tied to 17, 23, 3."""
    c2 = ImageGroup(2, [(1, 1, 0, 1)]).elements()
    g4 = ImageGroup(4, [g for g in ImageGroup.full(4).elements() if tuple(x % 2 for x in g) in c2])
    pre = sorted(g4.elements())
    det_char = lambda g: chi4(det(g, 4))  # noqa: E731
    nondet = [ch for ch in quadratic_characters(g4) if not all(ch(g) == det_char(g) for g in pre)]
    for ch1, ch2 in itertools.combinations(nondet, 2):
        prod = lambda g: ch1(g) * ch2(g)  # noqa: E731
        if not (all(prod(g) == det_char(g) for g in pre) or all(prod(g) == 1 for g in pre)):
            break
    local = {4: g4, 3: ImageGroup.full(3), 17: ImageGroup.full(17), 23: ImageGroup.full(23)}
    cons = [
        lambda c: ch1(c[4]) == legendre(det(c[17], 17), 17),
        lambda c: ch2(c[4]) == legendre(det(c[23], 23), 23) * legendre(det(c[3], 3), 3),
    ]
    return fiber_product(4692, local, cons)


def curve_54() -> ImageGroup:
    full8 = ImageGroup.full(8)
    g8 = subgroup_of(8, [g for g in full8.elements() if sgn2(g) == chi8(det(g, 8), -2)])
    g9 = subgroup_of(9, [g for g in ImageGroup.full(9).elements() if g[2] % 9 == 0])
    return fiber_product(72, {8: g8, 9: g9}, [])


def _frattini(n: int, gens: list) -> ImageGroup:
    F = ImageGroup(n, [_mul(g, g, n) for g in gens] + [
        _mul(_mul(g, h, n), _mul(_inv(g, n), _inv(h, n), n), n) for g in gens for h in gens
    ])
    changed = True
    while changed:
        changed = False
        for s in list(F.raw_generators):
            for g in gens:
                c = _mul(_mul(g, s, n), _inv(g, n), n)
                if not F.contains(c):
                    F = ImageGroup(n, list(F.raw_generators) + [c])
                    changed = True
    return F


def curve_15() -> ImageGroup:
    """Index-2 subgroup of the preimage of B0(16) in GL2(Z/32), cut out by one F2-functional."""
    n = 32
    P = ImageGroup(n, [(1, 1, 0, 1), (5, 0, 0, 1), (31, 0, 0, 1), (1, 0, 0, 5), (1, 0, 0, 31), (1, 0, 16, 1)])
    gens = list(P.raw_generators)
    F = _frattini(n, gens)
    basis: list = []
    for g in gens:
        if not ImageGroup(n, list(F.raw_generators) + basis).contains(g):
            basis.append(g)
    functional = (0, 1, 0, 0, 0, 1)
    els = []
    for bits in itertools.product((0, 1), repeat=len(basis)):
        if sum(f * b for f, b in zip(functional, bits)) % 2 == 0:
            g = (1, 0, 0, 1)
            for b, h in zip(bits, basis):
                if b:
                    g = _mul(g, h, n)
            els.append(g)
    return ImageGroup(n, list(F.raw_generators) + els)


def prune(G: ImageGroup) -> ImageGroup:
    """Drop generators that do not change the order."""
    gens = list(G.raw_generators)
    order = G.order()
    for g in list(gens):
        rest = [h for h in gens if h != g]
        if rest and ImageGroup(G.modulus, rest).order() == order:
            gens = rest
    return ImageGroup(G.modulus, gens)


def _check(rec: ImageRecord, expect: dict) -> None:
    G = rec.group()
    R = screen(G, rec.label, rec.j)
    p = R.level_profile
    got = {
        "m0": p.reduced_level,
        "n": p.restricted_level,
        "M": [(a, d, mu) for a, d, mu in R.M],
        "P": dict(R.primitive_points()),
    }
    for key, want in expect.items():
        if key == "genus":
            for a, g in want.items():
                have = genus_of_image(G.reduce_mod(a)).genus
                assert have == g, (rec.label, a, have, g)
        elif key == "targets":
            assert set(got["P"]) == want, (rec.label, got["P"])
        elif key == "P":
            assert Counter(got["P"]) == Counter(want), (rec.label, got["P"])
        else:
            assert got[key] == want, (rec.label, key, got[key], want)


# label, j, builder, expected outcome, in the witness suite
FIXTURES = [
    ("j=-140625/8", "-140625/8", curve_21, {"M": [(21, 3, 2)], "genus": {21: 1}}, True),
    ("1225.b1", "-162677523113838677", lambda: curve_1225("b1"),
     {"M": [(37, 18, 1)], "m0": 148, "genus": {37: 4}}, True),
    ("j=-882216989/131072", "-882216989/131072", lambda: curve_borel_sq(17),
     {"M": [(17, 4, 2)], "genus": {17: 1}}, True),
    ("j=-9317", "-9317", lambda: curve_1225("b2"), {"M": [(37, 6, 3)], "genus": {37: 4}}, True),
    ("j=16778985534208729/81000", "16778985534208729/81000", curve_24,
     {"M": [(24, 4, 2)], "genus": {24: 1}}, True),
    ("j=351/4", "351/4", curve_28, {"M": [(28, 9, 2)], "genus": {28: 5}}, True),
    ("j=-121", "-121", lambda: curve_borel_sq(11), {"M": []}, False),
    ("147.b1", None, curve_147, {"m0": 78, "M": [], "P": {(1, 1): 1, (13, 39): 2, (13, 6): 1}}, False),
    ("232544.f1", None, curve_232544, {"m0": 44, "M": [], "P": {(1, 1): 1}}, False),
    ("75072.bc2", None, curve_75072, {"m0": 2, "n": 12, "M": []}, False),
    ("54.b2", None, curve_54, {"m0": 72, "M": []}, False),
    ("15.a7", "-1/15", curve_15,
     {"m0": 32, "M": [], "genus": {32: 0},
      "targets": {(1, 1), (2, 1), (2, 2), (4, 1), (8, 2), (16, 4), (32, 8)}}, False),
]

HEADER = """\
# isoscreen image fixtures ({kind})
# Synthetic reconstructions generated {date} by tools/build_fixtures.py.
# The images are not retrieved from the LMFDB: each is an open subgroup built
# to reproduce the published screening outcome for the labelled curve
# (levels, primitive points, witness list, genus of the mod-a image).
# Labels are LMFDB curve labels where known, otherwise "j=<j-invariant>".
# j is null where the source does not state it.
"""


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--date", default=dt.date.today().isoformat())
    ap.add_argument("--out", type=Path, default=DATA)
    args = ap.parse_args(argv)

    rows = []
    for label, j, build, expect, witness_suite in FIXTURES:
        G = prune(build())
        rec = ImageRecord(label, j, G.modulus, tuple(G.raw_generators))
        _check(rec, expect)
        print(f"{label}: N = {rec.adelic_level}, {len(rec.generators)} generators, ok", file=sys.stderr)
        rows.append((rec, witness_suite))

    for name, kind, keep in (
        ("fixtures.jsonl", "all worked examples", lambda t: True),
        ("witness_suite.jsonl", "images with witnesses", lambda t: t),
    ):
        body = "".join(rec.to_json() + "\n" for rec, t in rows if keep(t))
        (args.out / name).write_text(HEADER.format(kind=kind, date=args.date) + body, encoding="utf-8")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
