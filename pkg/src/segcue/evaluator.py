"""Boundary scoring, the cue-by-strategy grid, and McNemar significance.

Scoring compares only internal positions i in [2, N] of each utterance;
utterance-initial boundaries come free and are never counted.  Counts are
micro-averaged over the corpus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Corpus
from .cues import CUE_KINDS, CueTrack
from .errors import SegcueError
from .segmenter import STRATEGIES, Segmentation, segment_corpus, tune


@dataclass(frozen=True)
class BoundaryScore:
    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "BoundaryScore":
        if tp == 0 and fp == 0 and fn == 0:
            # degenerate corpora (no internal positions) must not poison scores
            return cls(0, 0, 0, 1.0, 1.0, 1.0)
        p = tp / (tp + fp) if tp + fp > 0 else 0.0
        r = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
        return cls(tp, fp, fn, p, r, f1)


def _paired_bits(corpus: Corpus, seg: Segmentation) -> list[tuple[np.ndarray, np.ndarray]]:
    if len(seg.boundaries) != len(corpus.utterances):
        raise SegcueError(
            f"segmentation has {len(seg.boundaries)} utterances, corpus has {len(corpus.utterances)}"
        )
    pairs = []
    for ui, (u, bits) in enumerate(zip(corpus.utterances, seg.boundaries)):
        if len(bits) != len(u):
            raise SegcueError(f"utterance {ui}: predicted length {len(bits)} != gold length {len(u)}")
        n = len(u)
        pairs.append(
            (
                np.asarray(u.gold_boundaries[1:n], dtype=bool),
                np.asarray(bits[1:n], dtype=bool),
            )
        )
    return pairs


def score(corpus: Corpus, seg: Segmentation) -> BoundaryScore:
    """Micro-averaged edge-excluded boundary precision/recall/F1."""
    tp = fp = fn = 0
    for gold, pred in _paired_bits(corpus, seg):
        tp += int((gold & pred).sum())
        fp += int((~gold & pred).sum())
        fn += int((gold & ~pred).sum())
    return BoundaryScore.from_counts(tp, fp, fn)


# Tie preference when several grid cells share the best F1.
GRID_CUE_ORDER = ("ubp", "entropy", "loss", "rank")
GRID_STRATEGY_ORDER = ("peak", "relative", "threshold")


@dataclass(frozen=True)
class GridResult:
    scores: dict[tuple[str, str], BoundaryScore]
    parameters: dict[tuple[str, str], float | None]
    segmentations: dict[tuple[str, str], Segmentation]
    best: tuple[str, str]


def grid(
    eval_corpus: Corpus,
    eval_tracks: Sequence[CueTrack],
    tune_corpus: Corpus,
    tune_tracks: Sequence[CueTrack],
    n_candidates: int = 512,
    threads: int = 1,
) -> GridResult:
    """Score every cue-strategy combination, tuning parameters on a dev split."""
    cells = [(cue, strat) for cue in GRID_CUE_ORDER for strat in GRID_STRATEGY_ORDER]

    def run_cell(cell: tuple[str, str]) -> tuple[float | None, Segmentation, BoundaryScore]:
        cue, strat = cell
        param = None
        if strat in ("threshold", "relative"):
            param = tune(strat, tune_tracks, tune_corpus, cue, n_candidates)
        seg = segment_corpus(eval_tracks, cue, strat, param)
        return param, seg, score(eval_corpus, seg)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_cell, cells))
    else:
        results = [run_cell(c) for c in cells]

    scores: dict[tuple[str, str], BoundaryScore] = {}
    params: dict[tuple[str, str], float | None] = {}
    segs: dict[tuple[str, str], Segmentation] = {}
    for cell, (param, seg, sc) in zip(cells, results):
        scores[cell] = sc
        params[cell] = param
        segs[cell] = seg
    best = cells[0]
    for cell in cells:  # cells are already in tie-preference order
        if scores[cell].f1 > scores[best].f1:
            best = cell
    return GridResult(scores=scores, parameters=params, segmentations=segs, best=best)


def grid_csv(result: GridResult) -> str:
    """Rows are cues, columns strategies, cells F1 to 4 decimals; best starred."""
    lines = ["cue," + ",".join(GRID_STRATEGY_ORDER)]
    for cue in GRID_CUE_ORDER:
        cells = []
        for strat in GRID_STRATEGY_ORDER:
            mark = "*" if (cue, strat) == result.best else ""
            cells.append(f"{result.scores[(cue, strat)].f1:.4f}{mark}")
        lines.append(cue + "," + ",".join(cells))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class McNemarResult:
    b: int
    c: int
    p_value: float
    method: str


def mcnemar(
    corpus: Corpus, seg_a: Segmentation, seg_b: Segmentation, method: str = "auto"
) -> McNemarResult:
    """McNemar test over per-position boundary decisions of two segmenters.

    ``b`` counts positions A gets right and B wrong, ``c`` the reverse.  The
    exact two-sided binomial test is used for b + c <= 100 (or always, with
    ``method='exact'``), otherwise the continuity-corrected chi-square.
    """
    if method not in ("auto", "exact", "chi2"):
        raise SegcueError(f"unknown McNemar method {method!r}")
    pairs_a = _paired_bits(corpus, seg_a)
    pairs_b = _paired_bits(corpus, seg_b)
    b = c = 0
    for (gold, pa), (_, pb) in zip(pairs_a, pairs_b):
        ok_a = pa == gold
        ok_b = pb == gold
        b += int((ok_a & ~ok_b).sum())
        c += int((~ok_a & ok_b).sum())
    n = b + c
    if n == 0:
        return McNemarResult(b, c, 1.0, "exact")
    if method == "exact" or (method == "auto" and n <= 100):
        k = min(b, c)
        tail = sum(math.comb(n, i) for i in range(k + 1))
        p = min(1.0, (2 * tail) / (2**n))
        return McNemarResult(b, c, p, "exact")
    stat = (abs(b - c) - 1) ** 2 / n
    p = math.erfc(math.sqrt(stat / 2.0))
    return McNemarResult(b, c, p, "chi2")
