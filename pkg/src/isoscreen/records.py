"""Newline-delimited image records: parsing, validation, serialization."""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd
from pathlib import Path

from .gl2core import ImageGroup

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


class RecordError(ValueError):
    """A record that failed to parse or validate."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.message = message
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@lru_cache(maxsize=1)
def cm_j_invariants() -> dict[Fraction, str]:
    """The 13 rational CM j-invariants, keyed by value, with their discriminants."""
    raw = json.loads(resources.files("isoscreen.data").joinpath("cm_j.json").read_text())
    return {Fraction(e["j"]): e["discriminant"] for e in raw["cm_j_invariants"]}


def parse_j(text: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.fullmatch(text.strip()):
        raise ValueError(f"j must be an exact rational 'p/q', got {text!r}")
    return Fraction(text.strip())


@dataclass(frozen=True)
class ImageRecord:
    label: str
    j: str | None
    adelic_level: int
    generators: tuple[tuple[int, int, int, int], ...]

    def group(self) -> ImageGroup:
        return ImageGroup(self.adelic_level, self.generators)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "j": self.j,
            "adelic_level": self.adelic_level,
            "generators": [list(g) for g in self.generators],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(", ", ": "))


def parse_record(text: str, line: int | None = None) -> ImageRecord:
    """Parse and validate one JSON record.

    ``j`` may be null when the source does not state it; a stated CM
    j-invariant is rejected.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RecordError(f"malformed JSON: {exc.msg}", line) from None
    if not isinstance(obj, dict):
        raise RecordError("record must be a JSON object", line)

    label = obj.get("label")
    if not isinstance(label, str) or not label:
        raise RecordError("label must be a non-empty string", line, "label")

    j = obj.get("j")
    if j is not None:
        try:
            jv = parse_j(j)
        except ValueError as exc:
            raise RecordError(str(exc), line, "j") from None
        disc = cm_j_invariants().get(jv)
        if disc is not None:
            raise RecordError(f"j = {jv} is a CM j-invariant (discriminant {disc})", line, "j")
        j = str(jv)

    level = obj.get("adelic_level")
    if not isinstance(level, int) or isinstance(level, bool) or level < 1:
        raise RecordError("adelic_level must be a positive integer", line, "adelic_level")

    gens = obj.get("generators")
    if not isinstance(gens, list):
        raise RecordError("generators must be a list of [a, b, c, d] rows", line, "generators")
    rows = []
    for k, row in enumerate(gens):
        if (
            not isinstance(row, list)
            or len(row) != 4
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in row)
        ):
            raise RecordError(f"generator {k} is not a row of 4 integers", line, "generators")
        a, b, c, d = (x % level for x in row)
        if gcd(a * d - b * c, level) != 1:
            raise RecordError(f"generator {k} {row} has det not a unit mod {level}", line, "generators")
        rows.append((a, b, c, d))
    return ImageRecord(label, j, level, tuple(rows))


def iter_lines(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    """Numbered record lines, skipping blanks and '#' comments."""
    for no, text in enumerate(lines, start=1):
        s = text.strip()
        if s and not s.startswith("#"):
            yield no, s


def read_records(path: str | Path) -> list[ImageRecord]:
    """All records of a file; raises on the first bad record or duplicate label."""
    out = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for no, text in iter_lines(fh):
            rec = parse_record(text, no)
            if rec.label in seen:
                raise RecordError(f"duplicate label {rec.label!r}", no, "label")
            seen.add(rec.label)
            out.append(rec)
    return out


def fixture_path(name: str = "fixtures.jsonl") -> Path:
    return Path(str(resources.files("isoscreen.data").joinpath(name)))


def load_fixtures(name: str = "fixtures.jsonl") -> dict[str, ImageRecord]:
    return {r.label: r for r in read_records(fixture_path(name))}
