#!/usr/bin/env python3
"""Word-length confound experiment.

Boundary F1 of an untrained (random) predictor with the tuned relative
strategy, measured on synthetic corpora whose words all share a fixed length.
Shorter words mean denser gold boundaries, so near-random placement scores
higher; the script reports the Pearson correlation between word length and F1.

Usage: python scripts/run_word_length_confound.py [--lengths 2,3,4,6] [--seed 1]
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from segcue.analysis import mean_word_length, pearson
from segcue.corpus import split, synthesize
from segcue.cues import corpus_cue_tracks
from segcue.evaluator import score
from segcue.predictor import RandomPredictor
from segcue.segmenter import segment_corpus, tune

ALPHABET = ["b", "a", "d", "e", "g", "i", "k", "o", "p", "u", "t", "y"]


def fixed_length_lexicon(length: int, n_words: int = 6) -> list[list[str]]:
    return [[ALPHABET[(3 * w + j) % len(ALPHABET)] for j in range(length)] for w in range(n_words)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lengths", default="2,3,4,6", help="comma-separated word lengths")
    ap.add_argument("--n", type=int, default=400, help="utterances per corpus")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--cue", default="ubp")
    args = ap.parse_args()

    lengths = [int(x) for x in args.lengths.split(",")]
    f1s = []
    print("length  mean_word_len  f1")
    for length in lengths:
        corpus = synthesize(fixed_length_lexicon(length), (4, 8), args.n, seed=args.seed)
        train_c, dev_c, test_c = split(corpus, (0.8, 0.1, 0.1), seed=args.seed)
        rand = RandomPredictor(corpus.inventory, seed=args.seed, alpha=1.0)
        delta = tune("relative", corpus_cue_tracks(rand, dev_c), dev_c, args.cue)
        seg = segment_corpus(corpus_cue_tracks(rand, test_c), args.cue, "relative", delta)
        f1 = score(test_c, seg).f1
        f1s.append(f1)
        print(f"{length:6d}  {mean_word_length(corpus):13.1f}  {f1:.4f}")
    rho = pearson([float(x) for x in lengths], f1s)
    print(f"\npearson rho (length vs f1): {rho:.4f}")


if __name__ == "__main__":
    main()
