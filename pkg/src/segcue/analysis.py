"""Corpus statistics behind cross-lingual confounds.

Word-final phoneme distributions and their normalized entropy explain probe
priors; mean word length and Pearson correlation quantify how boundary
density inflates the scores of random segmenters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .corpus import Corpus
from .errors import SegcueError


@dataclass(frozen=True)
class PhonemeDistribution:
    """Relative phoneme frequencies within one positional context."""

    probabilities: dict[str, float]
    counts: dict[str, int]
    context: str

    @property
    def support(self) -> int:
        return len(self.probabilities)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def word_final_distribution(corpus: Corpus) -> tuple[PhonemeDistribution, PhonemeDistribution]:
    """Split phoneme occurrences into word-final and all other positions."""
    final: dict[str, int] = {}
    other: dict[str, int] = {}
    sym = corpus.inventory.symbol_of
    for u in corpus.utterances:
        n = len(u)
        for i in range(1, n + 1):
            is_final = i == n or u.gold_boundaries[i] == 1
            bucket = final if is_final else other
            s = sym(u.tokens[i - 1])
            bucket[s] = bucket.get(s, 0) + 1
    if not final:
        raise SegcueError("no word-final positions found")
    if not other:
        raise SegcueError(
            "no word-internal positions: every word has a single phoneme, "
            "so the other-positions distribution is empty"
        )

    def normalize(counts: dict[str, int], tag: str) -> PhonemeDistribution:
        total = sum(counts.values())
        ordered = dict(sorted(counts.items()))
        return PhonemeDistribution(
            probabilities={s: c / total for s, c in ordered.items()},
            counts=ordered,
            context=tag,
        )

    return normalize(final, "word-final"), normalize(other, "other-positions")


def normalized_entropy(dist: PhonemeDistribution) -> float:
    """Shannon entropy over the observed support, scaled to [0, 1].

    0 means a deterministic distribution, 1 a uniform one.  Undefined for a
    single-symbol support (the normalizer log2 n would be zero).
    """
    n = dist.support
    if n < 2:
        raise SegcueError(f"normalized entropy needs support >= 2, got {n}")
    h = -sum(p * math.log2(p) for p in dist.probabilities.values() if p > 0)
    return h / math.log2(n)


def mean_word_length(corpus: Corpus) -> float:
    """Phonemes per word, over gold word boundaries."""
    words = corpus.word_count
    if words < 1:
        raise SegcueError("corpus has no words")
    return corpus.token_count / words


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient."""
    if len(xs) != len(ys):
        raise SegcueError("series must have equal length")
    n = len(xs)
    if n < 3:
        raise SegcueError("need at least 3 points")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    cov = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = math.fsum((x - mx) ** 2 for x in xs)
    vy = math.fsum((y - my) ** 2 for y in ys)
    if vx == 0 or vy == 0:
        raise SegcueError("correlation undefined for zero-variance series")
    return cov / math.sqrt(vx * vy)
