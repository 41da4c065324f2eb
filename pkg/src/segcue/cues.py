"""Boundary cue tracks: entropy, loss, rank and utterance-boundary probability.

Each utterance of N phonemes yields four vectors of length N + 1; index j
(0-based) holds the cue computed from the distribution that predicts position
i = j + 1, with i = N + 1 being the terminal `<UB>` step.  Boundaries are
only ever placed for i in [2, N]; the extra ends give peak detection its
neighbors.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .corpus import Corpus, Utterance
from .errors import SegcueError
from .predictor import Predictor
from .trace_io import PositionRecord

CUE_KINDS = ("ubp", "entropy", "loss", "rank")
DEFAULT_LOSS_CEILING = 64.0


def entropy_bits(q: np.ndarray) -> float:
    """Shannon entropy of a distribution, in bits; zero entries contribute 0."""
    q = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(q > 0.0, q * np.log2(np.where(q > 0.0, q, 1.0)), 0.0)
    return float(max(-terms.sum(), 0.0))


def surprisal_bits(q: np.ndarray, token_id: int, ceiling: float = DEFAULT_LOSS_CEILING) -> float:
    """Negative log2 probability of the observed token, capped when it is 0."""
    p = float(q[token_id])
    if p <= 0.0:
        warnings.warn(
            f"token {token_id} has zero probability; loss capped at {ceiling} bits",
            stacklevel=2,
        )
        return float(ceiling)
    return -math.log2(p)


def rank_of(q: np.ndarray, token_id: int) -> int:
    """1-based likelihood rank of the observed token, ties by ascending id."""
    q = np.asarray(q, dtype=float)
    p = q[token_id]
    higher = int((q > p).sum())
    tied_before = int((q[:token_id] == p).sum())
    return 1 + higher + tied_before


@dataclass(frozen=True)
class CueTrack:
    """The four cue vectors for one utterance, each of length N + 1."""

    utt: int
    entropy: np.ndarray
    loss: np.ndarray
    rank: np.ndarray
    ubp: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.entropy)
        if n < 2 or any(len(v) != n for v in (self.loss, self.rank, self.ubp)):
            raise SegcueError("cue vectors must share length N + 1 with N >= 1")

    def __len__(self) -> int:
        return len(self.entropy)

    def values(self, cue: str) -> np.ndarray:
        if cue not in CUE_KINDS:
            raise SegcueError(f"unknown cue {cue!r}; expected one of {CUE_KINDS}")
        return getattr(self, cue).astype(float)


def compute_cues(
    predictor: Predictor,
    utterance: Utterance,
    context: list[int],
    loss_ceiling: float = DEFAULT_LOSS_CEILING,
) -> CueTrack:
    """Compute one utterance's cue track from a predictor.

    ``context`` is the full preceding modeling stream and must end with
    `<UB>`; it is extended in place with the utterance tokens and the closing
    `<UB>` so that consecutive calls walk a corpus stream.
    """
    inv = predictor.inventory
    if not context or context[-1] != inv.ub_id:
        raise SegcueError("context must end with the utterance-boundary token")
    n = len(utterance)
    ent = np.empty(n + 1)
    loss = np.empty(n + 1)
    rank = np.empty(n + 1, dtype=np.int64)
    ubp = np.empty(n + 1)
    for j in range(n + 1):
        target = utterance.tokens[j] if j < n else inv.ub_id
        q = predictor.distribution(context)
        ent[j] = entropy_bits(q)
        loss[j] = surprisal_bits(q, target, loss_ceiling)
        rank[j] = rank_of(q, target)
        ubp[j] = float(q[inv.ub_id])
        context.append(target)
    return CueTrack(utt=-1, entropy=ent, loss=loss, rank=rank, ubp=ubp)


def corpus_cue_tracks(
    predictor: Predictor,
    corpus: Corpus,
    loss_ceiling: float = DEFAULT_LOSS_CEILING,
) -> list[CueTrack]:
    """Cue tracks for every utterance, threading the stream context through."""
    context = [corpus.inventory.ub_id]
    tracks = []
    for ui, u in enumerate(corpus.utterances):
        t = compute_cues(predictor, u, context, loss_ceiling)
        tracks.append(
            CueTrack(utt=ui, entropy=t.entropy, loss=t.loss, rank=t.rank, ubp=t.ubp)
        )
    return tracks


def tracks_from_records(records: Iterable[PositionRecord]) -> list[CueTrack]:
    """Group trace records into cue tracks; positions must cover 1..N+1."""
    tracks: list[CueTrack] = []
    buf: list[PositionRecord] = []

    def flush() -> None:
        if not buf:
            return
        for k, r in enumerate(buf, start=1):
            if r.pos != k:
                raise SegcueError(f"utt {buf[0].utt}: positions must cover 1..N+1, got {r.pos} at step {k}")
        if len(buf) < 2:
            raise SegcueError(f"utt {buf[0].utt}: a track needs at least 2 positions")
        tracks.append(
            CueTrack(
                utt=buf[0].utt,
                entropy=np.array([r.entropy for r in buf]),
                loss=np.array([r.surprisal for r in buf]),
                rank=np.array([r.rank for r in buf], dtype=np.int64),
                ubp=np.array([r.ubp for r in buf]),
            )
        )
        buf.clear()

    for r in records:
        if buf and r.utt != buf[0].utt:
            flush()
        buf.append(r)
    flush()
    return tracks


def records_from_tracks(
    tracks: Sequence[CueTrack], corpus: Corpus, embeddings: Sequence[Sequence[Sequence[float]]] | None = None
) -> Iterator[PositionRecord]:
    """Render cue tracks as trace records (predictor-backed runs emit the
    same wire format an external exporter does)."""
    if len(tracks) != len(corpus.utterances):
        raise SegcueError("track count does not match corpus")
    for track, u in zip(tracks, corpus.utterances):
        if len(track) != len(u) + 1:
            raise SegcueError(f"utt {track.utt}: track length {len(track)} != N+1")
        for j in range(len(track)):
            token = corpus.inventory.symbol_of(u.tokens[j]) if j < len(u) else corpus.inventory.symbol_of(corpus.inventory.ub_id)
            emb = tuple(embeddings[track.utt][j]) if embeddings is not None else None
            yield PositionRecord(
                utt=track.utt,
                pos=j + 1,
                token=token,
                entropy=float(track.entropy[j]),
                surprisal=float(track.loss[j]),
                rank=int(track.rank[j]),
                ubp=float(track.ubp[j]),
                emb=emb,
            )
