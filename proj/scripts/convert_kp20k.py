#!/usr/bin/env python3
"""Convert a KP20k release file to canonical keyword JSONL.

KP20k ships as JSON lines with ``title``, ``abstract`` and a ``keyword``
field holding all keyphrases in one semicolon-separated string (some
re-releases name it ``keywords``). The records carry no document ids, so
this script numbers them by input line.

Usage:
    convert_kp20k.py kp20k_training.json [--out corpus.jsonl] [--prefix kp20k]

Each input line becomes ``{"id": "<prefix>-<lineno>", "keywords": [...]}``.
The prefix defaults to the input file stem, so converting the training and
test files separately yields disjoint id spaces. Lines that are not valid
JSON objects or whose keyword list comes out empty are skipped and counted.
"""

import argparse
import json
import sys
from pathlib import Path


def extract_keywords(record: dict) -> list[str]:
    """Pull the keyphrase list out of a KP20k record.

    Accepts either the original semicolon-joined string or a ready list
    under ``keyword``/``keywords``.
    """
    raw = record.get("keyword", record.get("keywords"))
    if raw is None:
        return []
    if isinstance(raw, str):
        parts = raw.split(";")
    elif isinstance(raw, list):
        parts = [p for p in raw if isinstance(p, str)]
    else:
        return []
    phrases = [" ".join(p.split()) for p in parts]
    return [p for p in phrases if p]


def main() -> int:
    ap = argparse.ArgumentParser(
        description="Convert KP20k JSON lines to canonical keyword JSONL."
    )
    ap.add_argument("source", type=Path, help="KP20k JSON-lines file")
    ap.add_argument(
        "--out",
        type=Path,
        default=None,
        help="output JSONL path (default: stdout)",
    )
    ap.add_argument(
        "--prefix",
        default=None,
        help="document id prefix (default: input file stem)",
    )
    args = ap.parse_args()

    if not args.source.is_file():
        print(f"error: cannot read {args.source}", file=sys.stderr)
        return 1
    prefix = args.prefix if args.prefix is not None else args.source.stem

    out = args.out.open("w", encoding="utf-8") if args.out else sys.stdout
    written = 0
    skipped = 0
    try:
        with args.source.open("r", encoding="utf-8") as src:
            for lineno, line in enumerate(src, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError:
                    skipped += 1
                    continue
                if not isinstance(record, dict):
                    skipped += 1
                    continue
                keywords = extract_keywords(record)
                if not keywords:
                    skipped += 1
                    continue
                doc = {"id": f"{prefix}-{lineno}", "keywords": keywords}
                out.write(json.dumps(doc, ensure_ascii=False) + "\n")
                written += 1
    finally:
        if args.out:
            out.close()

    print(
        f"{written} documents written, {skipped} skipped (bad or empty)",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
