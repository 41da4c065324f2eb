"""Linear probe for word-final information in per-position embeddings.

The dataset is balanced (equal word-final and word-internal examples) and
word-disjoint: the word types contributing training positions never appear in
the test side.  The probe itself is full-batch logistic regression on
standardized features.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus
from .errors import SegcueError
from .trace_io import PositionRecord


@dataclass(frozen=True)
class ProbeSplit:
    embeddings: np.ndarray  # (n, d)
    labels: np.ndarray  # (n,) 1 = word-final, 0 = word-internal
    word_types: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.embeddings) != len(self.labels):
            raise SegcueError("embeddings and labels must align")


@dataclass(frozen=True)
class ProbeDataset:
    train: ProbeSplit
    test: ProbeSplit


def _word_type_at(u, position: int, symbols) -> str:
    """Space-joined symbols of the word containing 1-based position i."""
    start = position
    while start > 1 and not u.gold_boundaries[start - 1]:
        start -= 1
    end = position
    while end < len(u) and not u.gold_boundaries[end]:
        end += 1
    return " ".join(symbols(u.tokens[j - 1]) for j in range(start, end + 1))


def build_probe_dataset(
    records: Iterable[PositionRecord],
    corpus: Corpus,
    seed: int,
    train_fraction: float = 0.8,
) -> ProbeDataset:
    """Assemble balanced, word-disjoint train/test probe examples.

    Position i of an utterance is word-final when a gold boundary follows it
    (or it ends the utterance).  Its feature vector is the embedding of the
    state that has just consumed it, i.e. the trace record at pos i + 1.
    Word types are split by seed; each side is downsampled to class balance.
    """
    emb_by_pos: dict[tuple[int, int], tuple[float, ...]] = {}
    for r in records:
        if r.emb is None:
            raise SegcueError(f"record utt={r.utt} pos={r.pos} lacks an embedding")
        emb_by_pos[(r.utt, r.pos)] = r.emb

    examples: list[tuple[tuple[float, ...], int, str]] = []
    sym = corpus.inventory.symbol_of
    for ui, u in enumerate(corpus.utterances):
        n = len(u)
        for i in range(1, n + 1):
            key = (ui, i + 1)
            if key not in emb_by_pos:
                raise SegcueError(f"trace lacks a record for utt={ui} pos={i + 1}")
            final = 1 if (i == n or u.gold_boundaries[i] == 1) else 0
            examples.append((emb_by_pos[key], final, _word_type_at(u, i, sym)))

    types = sorted({w for _, _, w in examples})
    if len(types) < 2:
        raise SegcueError("need at least 2 word types for a word-disjoint split")
    rng = random.Random(seed)
    rng.shuffle(types)
    n_train = max(1, min(len(types) - 1, round(train_fraction * len(types))))
    train_types = set(types[:n_train])

    def build_side(side_examples: list[tuple[tuple[float, ...], int, str]], tag: str) -> ProbeSplit:
        finals = [e for e in side_examples if e[1] == 1]
        internals = [e for e in side_examples if e[1] == 0]
        if not finals or not internals:
            raise SegcueError(f"{tag} split has an empty class; corpus too small to balance")
        k = min(len(finals), len(internals))
        rng.shuffle(finals)
        rng.shuffle(internals)
        chosen = finals[:k] + internals[:k]
        rng.shuffle(chosen)
        return ProbeSplit(
            embeddings=np.array([e[0] for e in chosen], dtype=float),
            labels=np.array([e[1] for e in chosen], dtype=np.int64),
            word_types=tuple(sorted({e[2] for e in chosen})),
        )

    train = build_side([e for e in examples if e[2] in train_types], "train")
    test = build_side([e for e in examples if e[2] not in train_types], "test")
    return ProbeDataset(train=train, test=test)


@dataclass(frozen=True)
class LinearProbe:
    weights: np.ndarray
    bias: float
    feature_mean: np.ndarray
    feature_scale: np.ndarray

    def decision(self, embeddings: np.ndarray) -> np.ndarray:
        x = (np.asarray(embeddings, dtype=float) - self.feature_mean) / self.feature_scale
        return x @ self.weights + self.bias

    def predict(self, embeddings: np.ndarray) -> np.ndarray:
        return (self.decision(embeddings) >= 0.0).astype(np.int64)


def logistic_loss_and_grad(
    w: np.ndarray, b: float, x: np.ndarray, y: np.ndarray
) -> tuple[float, np.ndarray, float]:
    """Mean logistic loss and its analytic gradient."""
    z = x @ w + b
    s = 2.0 * y - 1.0
    loss = float(np.mean(np.logaddexp(0.0, -s * z)))
    with np.errstate(over="ignore"):
        prob = 1.0 / (1.0 + np.exp(-z))
    residual = prob - y
    grad_w = x.T @ residual / len(y)
    grad_b = float(np.mean(residual))
    return loss, grad_w, grad_b


def train_probe(
    split: ProbeSplit, learning_rate: float = 0.1, epochs: int = 500
) -> LinearProbe:
    """Full-batch gradient descent on the logistic objective.

    The objective is convex, so these fixed settings reach the optimum for
    any reasonable data; standardization statistics come from this split only.
    """
    if len(split.labels) == 0:
        raise SegcueError("cannot train a probe on an empty split")
    x_raw = split.embeddings
    mean = x_raw.mean(axis=0)
    sd = x_raw.std(axis=0)
    scale = np.where(sd > 0, sd, 1.0)
    x = (x_raw - mean) / scale
    y = split.labels.astype(float)
    w = np.zeros(x.shape[1])
    b = 0.0
    for _ in range(epochs):
        loss, gw, gb = logistic_loss_and_grad(w, b, x, y)
        if not math.isfinite(loss):
            raise SegcueError(f"probe training diverged: loss = {loss}")
        w -= learning_rate * gw
        b -= learning_rate * gb
    return LinearProbe(weights=w, bias=b, feature_mean=mean, feature_scale=scale)


def probe_accuracy(probe: LinearProbe, split: ProbeSplit) -> float:
    pred = probe.predict(split.embeddings)
    return float(np.mean(pred == split.labels))


@dataclass(frozen=True)
class ProbeReport:
    accuracy: float
    final_accuracy: float
    internal_accuracy: float
    train_size: int
    test_size: int
    train_word_types: int
    test_word_types: int


def probe_report(probe: LinearProbe, dataset: ProbeDataset) -> ProbeReport:
    pred = probe.predict(dataset.test.embeddings)
    labels = dataset.test.labels
    finals = labels == 1
    return ProbeReport(
        accuracy=float(np.mean(pred == labels)),
        final_accuracy=float(np.mean(pred[finals] == 1)),
        internal_accuracy=float(np.mean(pred[~finals] == 0)),
        train_size=len(dataset.train.labels),
        test_size=len(labels),
        train_word_types=len(dataset.train.word_types),
        test_word_types=len(dataset.test.word_types),
    )
