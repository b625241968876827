"""Command-line entry point: ``isoscreen screen|batch|genus|orbits``.

Exit codes: 0 when every screened image has an empty witness list, 10 when
some image has witnesses, 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any

from .degrees import record_degree
from .genus import genus_of_image, genus_X1
from .pipeline import ModulusTooLarge, batch_summary, max_modulus, screen, screen_batch
from .records import ImageRecord, RecordError, iter_lines, parse_record, read_records

EXIT_EMPTY = 0
EXIT_ERROR = 1
EXIT_WITNESSES = 10


def _dump(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False)


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _one_record(path: str) -> ImageRecord:
    recs = read_records(path)
    if len(recs) != 1:
        raise RecordError(f"expected exactly one record in {path}, found {len(recs)}")
    return recs[0]


def cmd_screen(args: argparse.Namespace) -> int:
    rec = _one_record(args.file)
    report = screen(rec.group(), rec.label, rec.j, args.multiplicity)
    _write(_dump(report.to_dict(args.trace)) + "\n", args.out)
    return EXIT_WITNESSES if report.M else EXIT_EMPTY


def _batch_inputs(path: str) -> list[ImageRecord | RecordError]:
    """Records of a batch file; a bad line becomes an error in its slot."""
    out: list[ImageRecord | RecordError] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for no, text in iter_lines(fh):
            try:
                rec = parse_record(text, no)
                if rec.label in seen:
                    raise RecordError(f"duplicate label {rec.label!r}", no, "label")
            except RecordError as exc:
                exc.label = f"line {no}"
                out.append(exc)
                continue
            seen.add(rec.label)
            out.append(rec)
    return out


def cmd_batch(args: argparse.Namespace) -> int:
    inputs = _batch_inputs(args.file)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    items = []
    with open(outdir / "reports.jsonl", "w", encoding="utf-8") as fh:
        for it in screen_batch(inputs, args.jobs, args.trace, args.multiplicity):
            doc = it.report if it.ok else {"label": it.label, "error": it.error}
            fh.write(_dump(doc) + "\n")
            items.append(it)
    summary = batch_summary(items)
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    c = summary["counts"]
    print(
        f"{c['total']} records: {c['empty']} empty, {c['witnesses']} with witnesses, {c['errors']} errors",
        file=sys.stderr,
    )
    for w in summary["witnesses"]:
        pairs = " ".join(f"({m['level']},{m['degree']})^{m['multiplicity']}" for m in w["M"])
        print(f"{w['label']}\t{pairs}", file=sys.stderr)
    if c["errors"]:
        return EXIT_ERROR
    return EXIT_WITNESSES if c["witnesses"] else EXIT_EMPTY


def cmd_genus(args: argparse.Namespace) -> int:
    if args.image is None:
        if args.level is None:
            raise ValueError("genus needs --level, --image or both")
        print(genus_X1(args.level))
        return EXIT_EMPTY
    rec = _one_record(args.image)
    G = rec.group()
    if args.level is not None:
        G = G.reduce_mod(args.level)
    sig = genus_of_image(G)
    if args.verbose:
        print(_dump(asdict(sig)))
    else:
        print(sig.genus)
    return EXIT_EMPTY


def cmd_orbits(args: argparse.Namespace) -> int:
    if args.mod > max_modulus():
        raise ModulusTooLarge(f"--mod {args.mod} exceeds ISOSCREEN_MAX_MODULUS = {max_modulus()}")
    rec = _one_record(args.file)
    H = rec.group().reduce_mod(args.mod).adjoin_minus_identity()
    table = H.orbits()
    lines = ["id\trepresentative\tsize\torder\tdegree"]
    for oid, r in enumerate(table.records):
        x, y = r.representative
        lines.append(f"{oid}\t({x},{y})\t{r.size}\t{r.vector_order}\t{record_degree(r)}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_EMPTY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isoscreen", description="Screen Galois images for isolated points on X1(n).")
    sub = ap.add_subparsers(dest="command", required=True)

    def mode(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--multiplicity",
            choices=("all", "primitive"),
            default="all",
            help="count all closed points of a witness degree (default) or only primitive ones",
        )

    p = sub.add_parser("screen", help="screen one image record")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--trace", action="store_true", help="include D, D' and per-entry eliminations")
    mode(p)
    p.set_defaults(func=cmd_screen)

    p = sub.add_parser("batch", help="screen a file of records")
    p.add_argument("file")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--trace", action="store_true")
    mode(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("genus", help="genus of X1(N) or of an image")
    p.add_argument("--level", type=int)
    p.add_argument("--image")
    p.add_argument("--verbose", action="store_true", help="print index, elliptic points and cusps too")
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("orbits", help="orbit table of <G, -I> mod m")
    p.add_argument("file")
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_orbits)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_EMPTY if exc.code == 0 else EXIT_ERROR
    if getattr(args, "jobs", 1) < 1:
        print("isoscreen: --jobs must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (OSError, ValueError, ArithmeticError, AssertionError) as exc:
        print(f"isoscreen: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
