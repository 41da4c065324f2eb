"""Drive a model over an unsegmented corpus and emit per-position records.

Positions follow the modeling-stream order: for each utterance of N phonemes
there are N + 1 prediction steps (the last one targets the utterance-boundary
token), each computed from the stream context capped at the model window.
All logs are converted to bits here so the wire format is base-agnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus_text import ExportError, read_utterances
from .models import load_model
from .trace_writer import TraceWriter

LOG2 = math.log(2.0)


@dataclass
class ExportJob:
    model: str
    corpus_path: str
    output_path: str
    batch_size: int = 32
    device: str = "cpu"
    embeddings: bool = True
    window: int | None = None
    ub_token: str = "<UB>"
    word_delim: str = "\t"
    phoneme_delim: str = " "


def entropy_bits(q: np.ndarray) -> float:
    nz = q[q > 0]
    return float(max(-(nz * np.log(nz)).sum() / LOG2, 0.0))


def surprisal_bits(q: np.ndarray, token_id: int) -> float:
    p = float(q[token_id])
    if p <= 0:
        raise ExportError(f"model assigned zero probability to observed token {token_id}")
    return -math.log(p) / LOG2


def rank_of(q: np.ndarray, token_id: int) -> int:
    p = q[token_id]
    return int(1 + (q > p).sum() + (q[:token_id] == p).sum())


def check_vocabulary(model_vocab: dict[str, int], utterances, ub_token: str) -> None:
    corpus_symbols = {s for u in utterances for s in u} | {ub_token}
    missing = sorted(corpus_symbols - set(model_vocab))
    extra = sorted(set(model_vocab) - corpus_symbols)
    if missing or extra:
        raise ExportError(
            "model vocabulary must contain exactly the corpus inventory plus "
            f"the boundary token; missing {missing}, unexpected {extra}"
        )


def export(job: ExportJob) -> int:
    """Write one trace record per prediction step; returns the record count."""
    with open(job.corpus_path, "r", encoding="utf-8") as f:
        utterances = read_utterances(f.read(), job.word_delim, job.phoneme_delim)
    model = load_model(job.model, job.device)
    check_vocabulary(model.vocab, utterances, job.ub_token)
    ub_id = model.vocab[job.ub_token]
    window = min(job.window or model.max_window, model.max_window)
    if window < 1:
        raise ExportError("context window must be at least 1")
    if job.batch_size < 1:
        raise ExportError("batch size must be at least 1")

    stream: list[int] = [ub_id]
    steps: list[tuple[int, int, str, int]] = []  # (utt, pos, token, target_id)
    for ui, utts in enumerate(utterances):
        for i, symbol in enumerate(utts, start=1):
            steps.append((ui, i, symbol, model.vocab[symbol]))
        steps.append((ui, len(utts) + 1, job.ub_token, ub_id))
        stream.extend(model.vocab[s] for s in utts)
        stream.append(ub_id)

    count = 0
    with open(job.output_path, "w", encoding="utf-8") as handle:
        writer = TraceWriter(handle)
        for start in range(0, len(steps), job.batch_size):
            chunk = steps[start : start + job.batch_size]
            contexts = []
            for offset in range(len(chunk)):
                end = start + offset + 1  # stream prefix length for this step
                contexts.append(stream[max(0, end - window) : end])
            probs, hidden = model.step(contexts, want_hidden=job.embeddings)
            for row, (ui, pos, symbol, target) in enumerate(chunk):
                q = probs[row]
                total = float(q.sum())
                if not math.isfinite(total) or abs(total - 1.0) > 1e-6:
                    raise ExportError(f"model distribution does not normalize (sum={total!r})")
                writer.write(
                    utt=ui,
                    pos=pos,
                    token=symbol,
                    entropy=entropy_bits(q),
                    surprisal=surprisal_bits(q, target),
                    rank=rank_of(q, target),
                    ubp=float(q[ub_id]),
                    emb=hidden[row] if job.embeddings else None,
                )
                count += 1
    return count
