"""segcue-export: emit a segcue trace file from a causal phoneme LM."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .corpus_text import ExportError
from .export import ExportJob, export


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="segcue-export",
        description="run an autoregressive phoneme LM over a corpus and write trace records",
    )
    p.add_argument("--model", required=True, help="checkpoint directory, or stub:A=0.5,B=0.3,<UB>=0.2")
    p.add_argument("--corpus", required=True, help="corpus text file (word boundaries are ignored)")
    p.add_argument("-o", "--output", required=True, help="trace output path (JSONL)")
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--device", default="cpu")
    p.add_argument("--window", type=int, help="context window cap; defaults to the model maximum")
    p.add_argument("--ub-token", default="<UB>")
    p.add_argument("--word-delim", default="\t")
    p.add_argument("--phoneme-delim", default=" ")
    emb = p.add_mutually_exclusive_group()
    emb.add_argument("--embeddings", dest="embeddings", action="store_true", default=True)
    emb.add_argument("--no-embeddings", dest="embeddings", action="store_false")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    job = ExportJob(
        model=args.model,
        corpus_path=args.corpus,
        output_path=args.output,
        batch_size=args.batch_size,
        device=args.device,
        embeddings=args.embeddings,
        window=args.window,
        ub_token=args.ub_token,
        word_delim=args.word_delim,
        phoneme_delim=args.phoneme_delim,
    )
    try:
        n = export(job)
    except ExportError as e:
        print(f"segcue-export: error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"segcue-export: error: missing input: {e}", file=sys.stderr)
        return 1
    print(f"wrote {n} records to {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
