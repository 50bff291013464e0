"""parse-corpus command line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .convert import AdapterConfig, parse_raw
from .pipelines import AdapterError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parse-corpus",
        description="Convert raw .txt corpora to CoNLL-U with a UD pipeline.",
    )
    parser.add_argument("--in", dest="input_dir", required=True, help="directory of .txt files")
    parser.add_argument("--out", dest="output_dir", required=True, help="output directory")
    parser.add_argument(
        "--model",
        default="spacy:en_core_web_sm",
        help="pipeline as <backend>:<model>, e.g. spacy:en_core_web_sm or stanza:en",
    )
    parser.add_argument("--batch-size", type=int, default=1000)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    input_dir = Path(args.input_dir)
    if not input_dir.is_dir():
        print(f"error: not a directory: {input_dir}", file=sys.stderr)
        return 1
    inputs = tuple(sorted(input_dir.glob("*.txt")))
    try:
        config = AdapterConfig(
            inputs=inputs,
            output_dir=Path(args.output_dir),
            model=args.model,
            batch_size=args.batch_size,
        )
        written = parse_raw(config)
    except AdapterError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {len(written)} file(s) to {args.output_dir}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
