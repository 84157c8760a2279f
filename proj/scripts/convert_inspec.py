#!/usr/bin/env python3
"""Convert the Hulth Inspec distribution to canonical keyword JSONL.

The distribution stores one document per file pair: ``NNN.abstr`` holds the
title and abstract, ``NNN.uncontr`` the uncontrolled keywords separated by
semicolons, with long lists wrapped onto indented continuation lines. Only
the keyword files matter here; the pipeline never reads document text.

Usage:
    convert_inspec.py DIR [--out corpus.jsonl]

DIR is scanned recursively, so pointing it at the distribution root picks up
the Training, Validation and Test folders in one pass. Each ``.uncontr``
file becomes one JSONL record ``{"id": ..., "keywords": [...]}``. Ids are
the file path relative to DIR with the extension dropped and slashes
replaced by ``-`` so identically numbered files in different folders stay
distinct. Files whose keyword list comes out empty are skipped and counted.
"""

import argparse
import json
import sys
from pathlib import Path


def parse_uncontr(text: str) -> list[str]:
    """Split a .uncontr file into keyword phrases.

    Wrapped lines are joined with a space before splitting on semicolons;
    interior runs of whitespace collapse to single spaces.
    """
    joined = " ".join(text.split())
    phrases = [p.strip() for p in joined.split(";")]
    return [p for p in phrases if p]


def main() -> int:
    ap = argparse.ArgumentParser(
        description="Convert Inspec .uncontr keyword files to JSONL."
    )
    ap.add_argument("root", type=Path, help="distribution directory")
    ap.add_argument(
        "--out",
        type=Path,
        default=None,
        help="output JSONL path (default: stdout)",
    )
    args = ap.parse_args()

    if not args.root.is_dir():
        print(f"error: {args.root} is not a directory", file=sys.stderr)
        return 1

    files = sorted(args.root.rglob("*.uncontr"))
    if not files:
        print(f"error: no .uncontr files under {args.root}", file=sys.stderr)
        return 1

    out = args.out.open("w", encoding="utf-8") if args.out else sys.stdout
    written = 0
    skipped = 0
    try:
        for path in files:
            keywords = parse_uncontr(path.read_text(encoding="utf-8"))
            if not keywords:
                skipped += 1
                continue
            rel = path.relative_to(args.root).with_suffix("")
            doc_id = "-".join(rel.parts)
            record = {"id": doc_id, "keywords": keywords}
            out.write(json.dumps(record, ensure_ascii=False) + "\n")
            written += 1
    finally:
        if args.out:
            out.close()

    print(
        f"{written} documents written, {skipped} skipped (no keywords)",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
