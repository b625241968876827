"""Screening a Galois image for possible isolated points on X1(n)."""

from __future__ import annotations

import os
from collections import Counter
from collections.abc import Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Protocol

from .degrees import PrimitiveEntry, primitive_target, record_degree
from .genus import genus_of_image, genus_X1
from .gl2core import ImageGroup
from .levels import LevelProfile, reduce_level

DEFAULT_MAX_MODULUS = 1000

# elimination reasons
DIMENSION = "degree_exceeds_genus"
GENUS_ZERO = "genus_zero_image"


class ModulusTooLarge(ValueError):
    pass


def max_modulus() -> int:
    return int(os.environ.get("ISOSCREEN_MAX_MODULUS", DEFAULT_MAX_MODULUS))


@dataclass(frozen=True)
class Elimination:
    entry: PrimitiveEntry
    reason: str
    genus: int


@dataclass
class ScreeningReport:
    label: str
    modulus: int
    generator_count: int
    level_profile: LevelProfile
    D: list[PrimitiveEntry]
    D_prime: list[PrimitiveEntry]
    M: list[tuple[int, int, int]]
    eliminations: list[Elimination]
    genus_cache: dict[int, int]
    image_genus: dict[int, int]
    multiplicity: str = "all"
    j: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "witnesses" if self.M else "empty"

    @property
    def witnesses(self) -> list[tuple[int, int]]:
        """M expanded by multiplicity."""
        return [(a, d) for a, d, mu in self.M for _ in range(mu)]

    def primitive_points(self) -> Counter:
        """Distinct primitive points as a multiset of (level, degree)."""
        seen = {(e.target_level, e.target_orbit): e.target for e in self.D}
        return Counter(seen.values())

    def to_dict(self, trace: bool = True) -> dict[str, Any]:
        p = self.level_profile
        out: dict[str, Any] = {
            "label": self.label,
            "j": self.j,
            "adelic_level": self.modulus,
            "generator_count": self.generator_count,
            "levels": {
                "nonsurjective_primes": list(p.nonsurjective_primes),
                "m": p.m,
                "n": p.restricted_level,
                "m0": p.reduced_level,
            },
            "M": [{"level": a, "degree": d, "multiplicity": mu} for a, d, mu in self.M],
            "eliminated": [
                {"level": a, "degree": d, "reason": reason, "genus": g, "count": k}
                for (a, d, reason, g), k in sorted(
                    Counter((x.entry.target_level, x.entry.target_degree, x.reason, x.genus)
                            for x in self.eliminations).items()
                )
            ],
            "verdict": self.verdict,
        }
        if trace:
            out["multiplicity_mode"] = self.multiplicity
            out["D"] = [_entry_dict(e) for e in self.D]
            out["D_prime"] = [_entry_dict(e) for e in self.D_prime]
            out["eliminations"] = [
                {**_entry_dict(x.entry), "reason": x.reason, "genus": x.genus} for x in self.eliminations
            ]
            out["genus_X1"] = {str(k): v for k, v in sorted(self.genus_cache.items())}
            out["image_genus"] = {str(k): v for k, v in sorted(self.image_genus.items())}
        return out


def _entry_dict(e: PrimitiveEntry) -> dict[str, int]:
    return {
        "n": e.source_level,
        "a": e.target_level,
        "d": e.target_degree,
        "orbit": e.source_orbit,
        "target_orbit": e.target_orbit,
    }


def screen(G: ImageGroup, label: str = "", j: str | None = None, multiplicity: str = "all") -> ScreeningReport:
    """Run the level reduction, primitive degrees and both filters on one image.

    ``multiplicity="all"`` counts every closed point of degree d on X1(a);
    ``"primitive"`` counts only the distinct primitive points that survive.
    """
    if multiplicity not in ("all", "primitive"):
        raise ValueError(f"unknown multiplicity mode {multiplicity!r}")
    profile = reduce_level(G)
    m0 = profile.reduced_level
    if m0 > max_modulus():
        raise ModulusTooLarge(f"m0 = {m0} exceeds ISOSCREEN_MAX_MODULUS = {max_modulus()}")

    H = G.reduce_mod(m0).adjoin_minus_identity()
    table = H.orbits()
    D = [primitive_target(table, H, r.representative) for r in table.records]

    genus_cache: dict[int, int] = {}
    eliminations: list[Elimination] = []
    D_prime = []
    for e in D:
        a = e.target_level
        if a not in genus_cache:
            genus_cache[a] = genus_X1(a)
        if e.target_degree <= genus_cache[a]:
            D_prime.append(e)
        else:
            eliminations.append(Elimination(e, DIMENSION, genus_cache[a]))

    targets = sorted({e.target for e in D_prime})
    if multiplicity == "all":
        counts = Counter((r.vector_order, record_degree(r)) for r in table.records)
        mult = {t: counts[t] for t in targets}
    else:
        mult = {t: len({e.target_orbit for e in D_prime if e.target == t}) for t in targets}

    image_genus: dict[int, int] = {}
    M = []
    for a, d in targets:
        if a not in image_genus:
            image_genus[a] = genus_of_image(G.reduce_mod(a)).genus
        if image_genus[a] == 0:
            eliminations.extend(Elimination(e, GENUS_ZERO, 0) for e in D_prime if e.target == (a, d))
        else:
            M.append((a, d, mult[(a, d)]))

    return ScreeningReport(
        label=label,
        modulus=G.modulus,
        generator_count=len(G.raw_generators),
        level_profile=profile,
        D=D,
        D_prime=D_prime,
        M=M,
        eliminations=eliminations,
        genus_cache=genus_cache,
        image_genus=image_genus,
        multiplicity=multiplicity,
        j=j,
    )


class _Labeled(Protocol):
    label: str
    j: str | None

    def group(self) -> ImageGroup: ...


@dataclass(frozen=True)
class BatchItem:
    """Outcome for one batch input: a report document or an error message."""

    index: int
    label: str
    report: dict[str, Any] | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _job(args: tuple[int, str, str | None, int, tuple, bool, str]) -> BatchItem:
    index, label, j, modulus, gens, trace, mode = args
    try:
        report = screen(ImageGroup(modulus, gens), label, j, mode).to_dict(trace)
    except Exception as exc:  # isolate the record, keep the batch going
        return BatchItem(index, label, None, f"{type(exc).__name__}: {exc}")
    return BatchItem(index, label, report)


def _as_job(k: int, item: _Labeled | tuple | Exception, trace: bool, mode: str) -> tuple | BatchItem:
    if isinstance(item, Exception):
        return BatchItem(k, getattr(item, "label", None) or f"#{k}", None, f"{type(item).__name__}: {item}")
    if isinstance(item, tuple):
        label, G = item[0], item[1]
        j = item[2] if len(item) > 2 else None
    else:
        label, j = item.label, item.j
        try:
            G = item.group()
        except Exception as exc:
            return BatchItem(k, label, None, f"{type(exc).__name__}: {exc}")
    return (k, label, j, G.modulus, G.raw_generators, trace, mode)


def screen_batch(
    inputs: Iterable[_Labeled | tuple],
    parallelism: int = 1,
    trace: bool = False,
    multiplicity: str = "all",
) -> Iterator[BatchItem]:
    """Screen many images, yielding results in input order.

    Inputs are records with ``label``, ``j`` and ``group()``, tuples
    ``(label, group[, j])``, or exceptions standing for inputs that failed
    upstream.  A failing input becomes an error item.  The output does not
    depend on ``parallelism``.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be positive")
    slots = [_as_job(k, item, trace, multiplicity) for k, item in enumerate(inputs)]
    jobs = [s for s in slots if not isinstance(s, BatchItem)]
    if parallelism == 1 or len(jobs) < 2:
        done = map(_job, jobs)
        pool = None
    else:
        chunk = max(1, len(jobs) // (parallelism * 8))
        pool = ProcessPoolExecutor(max_workers=parallelism)
        done = pool.map(_job, jobs, chunksize=chunk)
    try:
        for s in slots:
            yield s if isinstance(s, BatchItem) else next(done)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)


def batch_summary(items: Iterable[BatchItem]) -> dict[str, Any]:
    """Counts, every input with a non-empty witness list, and every error."""
    counts = Counter({"total": 0, "empty": 0, "witnesses": 0, "errors": 0})
    witnesses = []
    errors = []
    for it in items:
        counts["total"] += 1
        if not it.ok:
            counts["errors"] += 1
            errors.append({"index": it.index, "label": it.label, "error": it.error})
            continue
        r = it.report
        counts[r["verdict"]] += 1
        if r["M"]:
            witnesses.append({"label": r["label"], "j": r["j"], "M": r["M"], "eliminated": r["eliminated"]})
    return {"counts": dict(counts), "witnesses": witnesses, "errors": errors}
