"""Per-position trace records and their JSONL wire format.

The trace decouples cue computation from any model runtime: anything that can
emit these records (an n-gram predictor, an external neural exporter) can
drive segmentation, evaluation and probing.  One JSON object per line, keys
exactly ``utt,pos,token,entropy,surprisal,rank,ubp,emb`` (``emb`` optional),
preceded by the version header line.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

from .errors import TraceError

TRACE_VERSION = 1
HEADER_KEY = "segcue_trace_version"
_REQUIRED_KEYS = ("utt", "pos", "token", "entropy", "surprisal", "rank", "ubp")


@dataclass(frozen=True)
class PositionRecord:
    """Predictive quantities for one position of one utterance.

    ``pos`` is 1-based; ``pos == N + 1`` is the terminal `<UB>` prediction
    step.  ``emb`` is the final-layer state the distribution at this step was
    computed from, i.e. the contextual embedding of the previously consumed
    token.
    """

    utt: int
    pos: int
    token: str
    entropy: float
    surprisal: float
    rank: int
    ubp: float
    emb: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.utt < 0 or not isinstance(self.utt, int):
            raise TraceError(f"utt must be a non-negative integer, got {self.utt!r}")
        if self.pos < 1 or not isinstance(self.pos, int):
            raise TraceError(f"pos must be a positive integer, got {self.pos!r}")
        if not isinstance(self.token, str) or not self.token:
            raise TraceError(f"token must be a non-empty string, got {self.token!r}")
        for name in ("entropy", "surprisal", "ubp"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise TraceError(f"{name} must be finite, got {v!r}")
        if self.entropy < 0:
            raise TraceError(f"entropy must be >= 0, got {self.entropy!r}")
        if self.surprisal < 0:
            raise TraceError(f"surprisal must be >= 0, got {self.surprisal!r}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise TraceError(f"rank must be an integer >= 1, got {self.rank!r}")
        if not 0.0 <= self.ubp <= 1.0:
            raise TraceError(f"ubp must lie in [0, 1], got {self.ubp!r}")
        if self.emb is not None:
            if len(self.emb) == 0:
                raise TraceError("embedding must be non-empty when present")
            if any(not math.isfinite(x) for x in self.emb):
                raise TraceError("embedding entries must be finite")


def _fmt(x: float) -> str:
    # 17 significant digits: enough for a bit-faithful float64 round trip.
    return format(float(x), ".17g")


def _record_line(r: PositionRecord) -> str:
    parts = [
        f'"utt":{r.utt}',
        f'"pos":{r.pos}',
        f'"token":{json.dumps(r.token, ensure_ascii=False)}',
        f'"entropy":{_fmt(r.entropy)}',
        f'"surprisal":{_fmt(r.surprisal)}',
        f'"rank":{r.rank}',
        f'"ubp":{_fmt(r.ubp)}',
    ]
    if r.emb is not None:
        parts.append('"emb":[' + ",".join(_fmt(x) for x in r.emb) + "]")
    return "{" + ",".join(parts) + "}"


class _Monotone:
    """Shared write/read ordering checks: grouped utts, strictly rising pos."""

    def __init__(self) -> None:
        self.utt = -1
        self.pos = 0
        self.emb_dim: int | None = None
        self.has_emb: bool | None = None

    def check(self, r: PositionRecord) -> None:
        if r.utt < self.utt:
            raise TraceError(f"utterance {r.utt} after utterance {self.utt}: records must be grouped")
        if r.utt != self.utt:
            self.utt, self.pos = r.utt, 0
        if r.pos <= self.pos:
            raise TraceError(f"utt {r.utt}: pos {r.pos} not after pos {self.pos}")
        self.pos = r.pos
        present = r.emb is not None
        if self.has_emb is None:
            self.has_emb = present
            self.emb_dim = len(r.emb) if present else None
        elif present != self.has_emb:
            raise TraceError("embedding present in some records but not others")
        elif present and len(r.emb) != self.emb_dim:
            raise TraceError(f"embedding dimension {len(r.emb)} != {self.emb_dim}")


def write_trace(records: Iterable[PositionRecord], path: str) -> int:
    """Write records as versioned JSONL; returns the number of records."""
    order = _Monotone()
    n = 0
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps({HEADER_KEY: TRACE_VERSION}) + "\n")
        for r in records:
            order.check(r)
            f.write(_record_line(r) + "\n")
            n += 1
    return n


def _parse_record(obj: dict, lineno: int) -> PositionRecord:
    keys = set(obj)
    missing = [k for k in _REQUIRED_KEYS if k not in keys]
    extra = keys - set(_REQUIRED_KEYS) - {"emb"}
    if missing or extra:
        raise TraceError(f"line {lineno}: bad keys (missing {missing}, unexpected {sorted(extra)})")
    for k in ("utt", "pos", "rank"):
        if not isinstance(obj[k], int) or isinstance(obj[k], bool):
            raise TraceError(f"line {lineno}: {k} must be an integer, got {obj[k]!r}")
    try:
        emb = obj.get("emb")
        return PositionRecord(
            utt=int(obj["utt"]),
            pos=int(obj["pos"]),
            token=obj["token"],
            entropy=float(obj["entropy"]),
            surprisal=float(obj["surprisal"]),
            rank=int(obj["rank"]),
            ubp=float(obj["ubp"]),
            emb=tuple(float(x) for x in emb) if emb is not None else None,
        )
    except (TypeError, ValueError, TraceError) as e:
        raise TraceError(f"line {lineno}: {e}") from None


def read_trace(path: str) -> Iterator[PositionRecord]:
    """Stream records from a trace file, validating as it goes."""
    with open(path, "r", encoding="utf-8") as f:
        yield from read_trace_lines(f)


def read_trace_lines(lines: IO[str] | Iterable[str]) -> Iterator[PositionRecord]:
    order = _Monotone()
    header_seen = False
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if line == "":
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceError(f"line {lineno}: malformed JSON ({e.msg})") from None
        if not isinstance(obj, dict):
            raise TraceError(f"line {lineno}: expected a JSON object")
        if not header_seen:
            if obj.get(HEADER_KEY) != TRACE_VERSION:
                raise TraceError(f"line {lineno}: missing or unsupported {HEADER_KEY} header")
            header_seen = True
            continue
        record = _parse_record(obj, lineno)
        try:
            order.check(record)
        except TraceError as e:
            raise TraceError(f"line {lineno}: {e}") from None
        yield record
    if not header_seen:
        raise TraceError("empty trace: version header missing")
