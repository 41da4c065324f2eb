"""Next-token predictors over the phoneme inventory.

Two implementations share one behavioral contract (``distribution(context)``
returns a probability vector over the inventory): an interpolated Witten-Bell
n-gram model, and a seeded per-position Dirichlet baseline standing in for an
untrained network.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .corpus import PhonemeInventory
from .errors import SegcueError


class Predictor(Protocol):
    """Behavioral contract: a normalized next-token distribution per context."""

    inventory: PhonemeInventory

    def distribution(self, context: Sequence[int]) -> np.ndarray: ...


class NGramModel:
    """Interpolated Witten-Bell n-gram model.

    ``counts[k]`` maps contexts of length k to successor Counters.  Queries
    interpolate from the longest matched context down to the unigram level,
    which itself backs off to the uniform distribution, so no inventory symbol
    ever receives zero probability.
    """

    def __init__(
        self,
        order: int,
        inventory: PhonemeInventory,
        counts: list[dict[tuple[int, ...], Counter]] | None = None,
    ) -> None:
        if order < 1:
            raise SegcueError("n-gram order must be at least 1")
        self.order = order
        self.inventory = inventory
        self.counts: list[dict[tuple[int, ...], Counter]] = (
            counts if counts is not None else [{} for _ in range(order)]
        )
        if len(self.counts) != order:
            raise SegcueError("count tables must cover context lengths 0..order-1")

    def distribution(self, context: Sequence[int]) -> np.ndarray:
        """Witten-Bell interpolated next-token probabilities for a context.

        Only the last ``order - 1`` context symbols matter; unseen context
        levels are skipped, so the function is total.
        """
        size = len(self.inventory)
        p = np.full(size, 1.0 / size)
        start = max(0, len(context) - (self.order - 1))
        ctx = tuple(context[start:]) if self.order > 1 else ()
        for k in range(len(ctx) + 1):
            table = self.counts[k].get(ctx[len(ctx) - k :])
            if not table:
                continue
            total = sum(table.values())
            types = len(table)
            vec = np.zeros(size)
            for tok, c in table.items():
                vec[tok] = c
            p = (vec + types * p) / (total + types)
        return p

    def save(self, path: str) -> None:
        payload = {
            "format": "segcue-ngram",
            "version": 1,
            "order": self.order,
            "inventory": list(self.inventory.symbols),
            "counts": [
                {" ".join(map(str, ctx)): {str(t): c for t, c in sorted(table.items())} for ctx, table in sorted(tables.items())}
                for tables in self.counts
            ],
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, sort_keys=True)
            f.write("\n")

    @classmethod
    def load(cls, path: str) -> "NGramModel":
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
        if payload.get("format") != "segcue-ngram" or payload.get("version") != 1:
            raise SegcueError(f"{path}: not a version-1 segcue n-gram file")
        inventory = PhonemeInventory(tuple(payload["inventory"]))
        counts: list[dict[tuple[int, ...], Counter]] = []
        for tables in payload["counts"]:
            level: dict[tuple[int, ...], Counter] = {}
            for ctx_key, table in tables.items():
                ctx = tuple(int(x) for x in ctx_key.split()) if ctx_key else ()
                level[ctx] = Counter({int(t): int(c) for t, c in table.items()})
            counts.append(level)
        return cls(payload["order"], inventory, counts)


def train_ngram(stream: Sequence[int], order: int, inventory: PhonemeInventory) -> NGramModel:
    """Count all k-grams (k <= order) in an unsegmented modeling stream."""
    if len(stream) == 0:
        raise SegcueError("cannot train on an empty stream")
    model = NGramModel(order, inventory)
    for j, tok in enumerate(stream):
        for k in range(min(order, j + 1)):
            ctx = tuple(stream[j - k : j])
            table = model.counts[k].setdefault(ctx, Counter())
            table[tok] += 1
    return model


@dataclass(frozen=True)
class RandomPredictor:
    """Untrained baseline: a symmetric-Dirichlet draw keyed by stream position.

    The same (seed, position) pair always yields the same distribution, which
    reproduces the random per-position cue fluctuation of an untrained model
    without any neural machinery.
    """

    inventory: PhonemeInventory
    seed: int
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise SegcueError("random predictor seed must be non-negative")
        if not self.alpha > 0:
            raise SegcueError("Dirichlet concentration must be positive")

    def position_distribution(self, position_index: int) -> np.ndarray:
        rng = np.random.default_rng([self.seed, position_index])
        return rng.dirichlet(np.full(len(self.inventory), self.alpha))

    def distribution(self, context: Sequence[int]) -> np.ndarray:
        return self.position_distribution(len(context))


def random_distribution(pred: RandomPredictor, position_index: int) -> np.ndarray:
    """Reproducible Dirichlet distribution for one stream position."""
    return pred.position_distribution(position_index)
