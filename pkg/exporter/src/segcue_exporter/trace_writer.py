"""Emit the segcue trace wire format (JSONL, schema version 1).

This mirrors the published schema contract: a header line
``{"segcue_trace_version": 1}`` followed by one record per line with keys
exactly ``utt,pos,token,entropy,surprisal,rank,ubp,emb`` (``emb`` optional),
floats at 17 significant digits, records grouped by utterance with strictly
increasing positions.
"""

from __future__ import annotations

import json
import math
from typing import IO, Iterable

from .corpus_text import ExportError

TRACE_VERSION = 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


class TraceWriter:
    def __init__(self, handle: IO[str]) -> None:
        self.handle = handle
        self.handle.write(json.dumps({"segcue_trace_version": TRACE_VERSION}) + "\n")
        self._utt = -1
        self._pos = 0
        self._emb_dim: int | None = None
        self._emb_state: bool | None = None
        self.count = 0

    def write(
        self,
        utt: int,
        pos: int,
        token: str,
        entropy: float,
        surprisal: float,
        rank: int,
        ubp: float,
        emb: Iterable[float] | None = None,
    ) -> None:
        if utt < self._utt:
            raise ExportError(f"utterance {utt} emitted after {self._utt}")
        if utt != self._utt:
            self._utt, self._pos = utt, 0
        if pos != self._pos + 1:
            raise ExportError(f"utt {utt}: pos {pos} does not follow {self._pos}")
        self._pos = pos
        if not (math.isfinite(entropy) and entropy >= 0):
            raise ExportError(f"bad entropy {entropy!r} at utt {utt} pos {pos}")
        if not (math.isfinite(surprisal) and surprisal >= 0):
            raise ExportError(f"bad surprisal {surprisal!r} at utt {utt} pos {pos}")
        if not (0.0 <= ubp <= 1.0):
            raise ExportError(f"bad ubp {ubp!r} at utt {utt} pos {pos}")
        if rank < 1:
            raise ExportError(f"bad rank {rank!r} at utt {utt} pos {pos}")
        parts = [
            f'"utt":{utt}',
            f'"pos":{pos}',
            f'"token":{json.dumps(token, ensure_ascii=False)}',
            f'"entropy":{_fmt(entropy)}',
            f'"surprisal":{_fmt(surprisal)}',
            f'"rank":{int(rank)}',
            f'"ubp":{_fmt(ubp)}',
        ]
        if emb is not None:
            values = [float(v) for v in emb]
            if self._emb_state is False:
                raise ExportError("embedding appeared after records without one")
            if self._emb_dim is None:
                self._emb_dim = len(values)
            elif len(values) != self._emb_dim:
                raise ExportError(f"embedding dimension {len(values)} != {self._emb_dim}")
            self._emb_state = True
            parts.append('"emb":[' + ",".join(_fmt(v) for v in values) + "]")
        else:
            if self._emb_state is True:
                raise ExportError("record without embedding after records with one")
            self._emb_state = False
        self.handle.write("{" + ",".join(parts) + "}\n")
        self.count += 1
