#!/usr/bin/env python3
"""Regenerate the frozen trace fixture under tests/fixtures/.

The fixture decouples the pipeline tests from any predictor: it was produced
once by an order-3 Witten-Bell model trained on the fixture corpus itself and
is committed as-is.  Rerun this only if the trace schema changes.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from segcue.corpus import ingest, render, strip_boundaries
from segcue.cues import corpus_cue_tracks, records_from_tracks
from segcue.predictor import train_ngram
from segcue.trace_io import write_trace

FIXTURE_CORPUS = "w 2 t\td u:\ty u:\ts i:\ny u:\ts i:\n"


def main() -> None:
    out_dir = pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)
    corpus = ingest(FIXTURE_CORPUS)
    (out_dir / "fixture_corpus.txt").write_text(render(corpus), encoding="utf-8")
    model = train_ngram(strip_boundaries(corpus), 3, corpus.inventory)
    tracks = corpus_cue_tracks(model, corpus)
    n = write_trace(records_from_tracks(tracks, corpus), str(out_dir / "fixture_trace.jsonl"))
    print(f"wrote {n} records to {out_dir / 'fixture_trace.jsonl'}")


if __name__ == "__main__":
    main()
