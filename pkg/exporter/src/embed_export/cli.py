"""Command-line front end: encode a corpus file into the embedding
exchange format.

Exit codes follow the classifier's convention: 0 success, 1 bad usage
or parameters, 2 unreadable/malformed data or an encoder that fails to
load.
"""

from __future__ import annotations

import argparse
import sys

from .export import (
    DEFAULT_MAX_TOKENS,
    EncoderLoadError,
    ExportError,
    RANDOM_ENCODER,
    export,
)
from .manifest import POOLING_MODES, ManifestError


class UsageError(ValueError):
    """Bad flags or flag combinations."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with its own code 2 on bad flags; raise instead so
    # main() owns the exit-code mapping.
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="embed-export",
        description="Export one embedding row per corpus document.",
    )
    parser.add_argument("--corpus", required=True, help="input file, one document per line")
    parser.add_argument("--out", required=True, help="embedding file to write")
    parser.add_argument("--encoder", help="pretrained encoder id")
    parser.add_argument("--pooling", choices=POOLING_MODES, default="mean")
    parser.add_argument("--random", action="store_true",
                        help="emit seeded Gaussian rows instead of encoding")
    parser.add_argument("--dim", type=int, default=32,
                        help="row width in --random mode")
    parser.add_argument("--seed", type=int, default=0,
                        help="generator seed in --random mode")
    parser.add_argument("--max-tokens", type=int, default=DEFAULT_MAX_TOKENS,
                        help="truncate documents past this many tokens")
    return parser


def _resolve_encoder(args) -> str:
    if args.random:
        if args.encoder is not None:
            raise UsageError("--random and --encoder are mutually exclusive")
        if args.dim < 1:
            raise UsageError(f"--dim must be positive, got {args.dim}")
        return RANDOM_ENCODER
    if args.encoder is None:
        raise UsageError("either --encoder or --random is required")
    return args.encoder


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        encoder = _resolve_encoder(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        manifest = export(
            args.corpus,
            args.out,
            encoder=encoder,
            pooling=args.pooling,
            dim=args.dim,
            seed=args.seed,
            max_tokens=args.max_tokens,
        )
    except (ExportError, EncoderLoadError, ManifestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {manifest.n_docs} x {manifest.dim} embeddings to {args.out}")
    for warning in manifest.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def entry() -> None:
    sys.exit(main())
