"""Boundary placement strategies and development-set threshold tuning.

All strategies read one cue track of length N + 1 and may set boundaries only
at positions i in [2, N] (0-based bits 1..N-1); position 1 always starts a
word and is never scored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Corpus
from .cues import CueTrack
from .errors import SegcueError

STRATEGIES = ("peak", "relative", "threshold")


@dataclass(frozen=True)
class Segmentation:
    """Predicted boundary bit-vectors for a corpus, with provenance tags."""

    boundaries: tuple[tuple[int, ...], ...]
    strategy: str = ""
    cue: str = ""
    parameter: float | None = None

    def __post_init__(self) -> None:
        for ui, bits in enumerate(self.boundaries):
            if len(bits) < 1 or bits[0] != 1 or any(b not in (0, 1) for b in bits):
                raise SegcueError(f"utterance {ui}: invalid boundary vector")


def segment_track_peak(values: Sequence[float]) -> np.ndarray:
    """Boundary at i iff the cue is strictly higher than both neighbors."""
    c = np.asarray(values, dtype=float)
    n = len(c) - 1
    bits = np.zeros(n, dtype=np.int64)
    bits[0] = 1
    if n >= 2:
        interior = (c[1:n] > c[0 : n - 1]) & (c[1:n] > c[2 : n + 1])
        bits[1:n] |= interior.astype(np.int64)
    return bits


def segment_track_threshold(values: Sequence[float], theta: float) -> np.ndarray:
    """Boundary at i iff the cue value reaches the threshold."""
    if not np.isfinite(theta):
        raise SegcueError("threshold must be finite")
    c = np.asarray(values, dtype=float)
    n = len(c) - 1
    bits = np.zeros(n, dtype=np.int64)
    bits[0] = 1
    if n >= 2:
        bits[1:n] |= (c[1:n] >= theta).astype(np.int64)
    return bits


def segment_track_relative(values: Sequence[float], delta: float) -> np.ndarray:
    """Boundary at i iff the cue rose from i-1 to i by at least delta."""
    if not np.isfinite(delta):
        raise SegcueError("relative threshold must be finite")
    c = np.asarray(values, dtype=float)
    n = len(c) - 1
    bits = np.zeros(n, dtype=np.int64)
    bits[0] = 1
    if n >= 2:
        bits[1:n] |= ((c[1:n] - c[0 : n - 1]) >= delta).astype(np.int64)
    return bits


def segment_track(values: Sequence[float], strategy: str, parameter: float | None = None) -> np.ndarray:
    if strategy == "peak":
        return segment_track_peak(values)
    if strategy == "threshold":
        if parameter is None:
            raise SegcueError("threshold strategy requires a parameter")
        return segment_track_threshold(values, parameter)
    if strategy == "relative":
        if parameter is None:
            raise SegcueError("relative strategy requires a parameter")
        return segment_track_relative(values, parameter)
    raise SegcueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def segment_corpus(
    tracks: Sequence[CueTrack], cue: str, strategy: str, parameter: float | None = None
) -> Segmentation:
    """Apply one cue and strategy to every track of a corpus."""
    bits = tuple(
        tuple(int(b) for b in segment_track(t.values(cue), strategy, parameter))
        for t in tracks
    )
    return Segmentation(boundaries=bits, strategy=strategy, cue=cue, parameter=parameter)


def _internal_features(
    tracks: Sequence[CueTrack], corpus: Corpus, cue: str, strategy: str
) -> tuple[np.ndarray, np.ndarray]:
    """Per-position decision feature and gold bit for all tunable positions."""
    feats: list[np.ndarray] = []
    gold: list[np.ndarray] = []
    if len(tracks) != len(corpus.utterances):
        raise SegcueError("track count does not match corpus")
    for t, u in zip(tracks, corpus.utterances):
        n = len(u)
        if len(t) != n + 1:
            raise SegcueError(f"utt {t.utt}: track length {len(t)} != N+1")
        if n < 2:
            continue
        c = t.values(cue)
        if strategy == "threshold":
            feats.append(c[1:n])
        elif strategy == "relative":
            feats.append(c[1:n] - c[0 : n - 1])
        else:
            raise SegcueError(f"strategy {strategy!r} has no tunable parameter")
        gold.append(np.asarray(u.gold_boundaries[1:n], dtype=bool))
    if not feats:
        raise SegcueError("no tunable positions in the development set")
    return np.concatenate(feats), np.concatenate(gold)


def tune(
    strategy: str,
    tracks: Sequence[CueTrack],
    corpus: Corpus,
    cue: str,
    n_candidates: int = 512,
) -> float:
    """Pick the parameter maximizing boundary F1 on a development corpus.

    Candidates are equally spaced quantiles of the observed decision feature
    (cue values for threshold, adjacent differences for relative); ties go to
    the smallest candidate.
    """
    if n_candidates < 2:
        raise SegcueError("need at least 2 candidate quantiles")
    feats, gold = _internal_features(tracks, corpus, cue, strategy)
    qs = np.linspace(0.0, 1.0, n_candidates)
    candidates = np.unique(np.quantile(feats, qs))
    pred = feats[None, :] >= candidates[:, None]
    tp = (pred & gold[None, :]).sum(axis=1)
    fp = (pred & ~gold[None, :]).sum(axis=1)
    fn = ((~pred) & gold[None, :]).sum(axis=1)
    denom = 2 * tp + fp + fn
    f1 = np.where(denom > 0, 2 * tp / np.where(denom > 0, denom, 1), 1.0)
    best = int(np.argmax(f1))  # argmax takes the first (smallest) maximizer
    return float(candidates[best])
