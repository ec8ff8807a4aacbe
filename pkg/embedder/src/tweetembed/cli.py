"""`embed` command line: tweet JSONL in, FSEM v1 vectors out."""

import argparse
import json
import sys

from .encoder import DEFAULT_MODEL, EmbedderConfig, encode_corpus


def build_parser():
    parser = argparse.ArgumentParser(
        prog="embed",
        description="Encode tweet texts with a pretrained sentence-embedding model",
    )
    parser.add_argument("--input", required=True, help="tweet JSONL file")
    parser.add_argument("--output", required=True, help="embedding file to write")
    parser.add_argument("--model", default=DEFAULT_MODEL,
                        help=f"model id (default {DEFAULT_MODEL}); "
                             "hashing:<dim> selects the offline dev backend")
    parser.add_argument("--batch", type=int, default=256)
    parser.add_argument("--device", default=None)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = EmbedderConfig(
        input=args.input,
        output=args.output,
        model_id=args.model,
        batch_size=args.batch,
        device=args.device,
    )
    try:
        summary = encode_corpus(config)
    except (OSError, RuntimeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(json.dumps(summary, sort_keys=True))
    return 0


def main() -> None:
    sys.exit(run())
