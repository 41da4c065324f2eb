"""Cue-driven subword merge training, a frequency-BPE baseline, and encoding.

Tokens are tuples of base phoneme symbols, so two merge products that would
collide as flat strings (e.g. "a"+"bc" vs "ab"+"c") stay distinct.  Cue
values are carried as exact rationals during training: the merged token's
value is the sum of its parts, so total cue mass is conserved exactly at
every step.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .corpus import UB, Corpus, strip_boundaries
from .cues import entropy_bits
from .errors import SegcueError
from .predictor import Predictor

Token = tuple[str, ...]

UB_TOKEN: Token = (UB,)
TOKENIZER_CUES = ("ubp", "entropy", "frequency")


@dataclass(frozen=True)
class Merge:
    left: Token
    right: Token
    token: Token
    score: float


@dataclass(frozen=True)
class MergeTable:
    """Ordered merges plus the vocabulary they started from."""

    merges: tuple[Merge, ...]
    cue: str
    target_vocab: int
    initial_vocab: tuple[Token, ...]

    def final_vocab(self) -> tuple[Token, ...]:
        return self.initial_vocab + tuple(m.token for m in self.merges)


@dataclass
class ScoredStream:
    """A token stream with one cue value per token."""

    tokens: list[Token]
    values: list[float]

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.values):
            raise SegcueError("token and value sequences must align")
        if any(not math.isfinite(v) for v in self.values):
            raise SegcueError("cue values must be finite")


@dataclass(frozen=True)
class MergeStep:
    step: int
    left: Token
    right: Token
    score: float
    replacements: int
    stream_length: int
    cue_mass: Fraction


@dataclass(frozen=True)
class TrainResult:
    table: MergeTable
    final_tokens: tuple[Token, ...]
    final_values: tuple[float, ...]
    steps: tuple[MergeStep, ...]


def _initial_vocab(tokens: Sequence[Token]) -> tuple[Token, ...]:
    return tuple(sorted(set(tokens)))


def _apply_merge(
    tokens: list[Token],
    values: list[Fraction] | None,
    mirror: list[float] | None,
    left: Token,
    right: Token,
) -> tuple[list[Token], list[Fraction] | None, list[float] | None, int]:
    """One left-to-right non-overlapping pass replacing (left, right)."""
    merged = left + right
    out_t: list[Token] = []
    out_v: list[Fraction] | None = [] if values is not None else None
    out_m: list[float] | None = [] if mirror is not None else None
    replacements = 0
    j = 0
    n = len(tokens)
    while j < n:
        if j + 1 < n and tokens[j] == left and tokens[j + 1] == right:
            out_t.append(merged)
            if values is not None:
                v = values[j] + values[j + 1]
                out_v.append(v)
                out_m.append(float(v))
            replacements += 1
            j += 2
        else:
            out_t.append(tokens[j])
            if values is not None:
                out_v.append(values[j])
                out_m.append(mirror[j])
            j += 1
    return out_t, out_v, out_m, replacements


def _train(
    tokens: list[Token],
    values: list[float] | None,
    cue: str,
    target_vocab: int,
    min_pair_count: int,
) -> TrainResult:
    if not tokens:
        raise SegcueError("cannot train a tokenizer on an empty stream")
    initial = _initial_vocab(tokens)
    if target_vocab <= len(initial):
        raise SegcueError(
            f"target vocabulary {target_vocab} must exceed the initial size {len(initial)}"
        )
    vocab = set(initial)
    exact: list[Fraction] | None = None
    mirror: list[float] | None = None
    if values is not None:
        exact = [Fraction(v) for v in values]
        mirror = list(values)

    merges: list[Merge] = []
    steps: list[MergeStep] = []
    while len(vocab) < target_vocab:
        pair_count: dict[tuple[Token, Token], int] = {}
        pair_sum: dict[tuple[Token, Token], float] = {}
        for j in range(len(tokens) - 1):
            a, b = tokens[j], tokens[j + 1]
            if a == UB_TOKEN or b == UB_TOKEN:
                continue
            if a + b in vocab:
                continue  # merging would not grow the vocabulary
            pair = (a, b)
            pair_count[pair] = pair_count.get(pair, 0) + 1
            if mirror is not None:
                pair_sum[pair] = pair_sum.get(pair, 0.0) + mirror[j + 1]
        candidates = [p for p, c in pair_count.items() if c >= min_pair_count]
        if not candidates:
            warnings.warn(
                f"no mergeable pair left; stopping at vocabulary size {len(vocab)} "
                f"(target {target_vocab})",
                stacklevel=3,
            )
            break
        if cue == "frequency":
            best = min(candidates, key=lambda p: (-pair_count[p], p))
            best_score = float(pair_count[best])
        else:
            best = min(candidates, key=lambda p: (pair_sum[p] / pair_count[p], p))
            best_score = pair_sum[best] / pair_count[best]
        left, right = best
        tokens, exact, mirror, replacements = _apply_merge(tokens, exact, mirror, left, right)
        vocab.add(left + right)
        merges.append(Merge(left=left, right=right, token=left + right, score=best_score))
        steps.append(
            MergeStep(
                step=len(merges),
                left=left,
                right=right,
                score=best_score,
                replacements=replacements,
                stream_length=len(tokens),
                cue_mass=sum(exact, Fraction(0)) if exact is not None else Fraction(0),
            )
        )
    table = MergeTable(
        merges=tuple(merges), cue=cue, target_vocab=target_vocab, initial_vocab=initial
    )
    return TrainResult(
        table=table,
        final_tokens=tuple(tokens),
        final_values=tuple(mirror) if mirror is not None else (),
        steps=tuple(steps),
    )


def train_cue_merges(
    stream: ScoredStream,
    target_vocab: int,
    cue: str = "ubp",
    min_pair_count: int = 1,
) -> TrainResult:
    """Greedily merge the pair with the lowest mean cue value at its second token.

    The merged occurrence's value becomes the sum of its parts' values, so the
    stream's total cue mass never changes.  Ties break to the
    lexicographically smallest (left, right) pair; pairs touching `<UB>` are
    never candidates.
    """
    if cue not in ("ubp", "entropy"):
        raise SegcueError(f"cue merges need 'ubp' or 'entropy', got {cue!r}")
    return _train(list(stream.tokens), list(stream.values), cue, target_vocab, min_pair_count)


def train_freq_bpe(
    tokens: Sequence[Token], target_vocab: int, min_pair_count: int = 1
) -> TrainResult:
    """Frequency BPE baseline: same loop, merging the most frequent pair."""
    return _train(list(tokens), None, "frequency", target_vocab, min_pair_count)


def encode(table: MergeTable, tokens: Sequence[Token]) -> list[Token]:
    """Apply merges in training order, each as one exhaustive left-to-right pass.

    Running this on the training stream reproduces the trainer's final state.
    """
    known = set(table.initial_vocab)
    for t in tokens:
        if t not in known:
            raise SegcueError(f"token {t!r} is not in the tokenizer's initial vocabulary")
    out = list(tokens)
    for m in table.merges:
        out, _, _, _ = _apply_merge(out, None, None, m.left, m.right)
    return out


def corpus_stream_tokens(corpus: Corpus) -> list[Token]:
    """The modeling stream as single-symbol tokens (with `<UB>` separators)."""
    sym = corpus.inventory.symbol_of
    return [(sym(t),) for t in strip_boundaries(corpus)]


def build_scored_stream(predictor: Predictor, corpus: Corpus, cue: str) -> ScoredStream:
    """Attach a UBP or entropy value to every stream position.

    The value at position j is computed from the predictor's distribution for
    that position (i.e. before the token at j is seen).
    """
    if cue not in ("ubp", "entropy"):
        raise SegcueError(f"scored streams support 'ubp' or 'entropy', got {cue!r}")
    stream = strip_boundaries(corpus)
    sym = corpus.inventory.symbol_of
    ub = corpus.inventory.ub_id
    tokens: list[Token] = []
    values: list[float] = []
    context: list[int] = []
    for t in stream:
        q = predictor.distribution(context)
        values.append(float(q[ub]) if cue == "ubp" else entropy_bits(q))
        tokens.append((sym(t),))
        context.append(t)
    return ScoredStream(tokens=tokens, values=values)


# merge table file format ------------------------------------------------

_MERGES_HEADER = "#segcue merges v1"
_VOCAB_HEADER = "#segcue vocab v1"


def _token_str(t: Token) -> str:
    return " ".join(t)


def _token_from_str(s: str) -> Token:
    return tuple(s.split(" "))


def save_merge_table(table: MergeTable, merges_path: str, vocab_path: str) -> None:
    with open(merges_path, "w", encoding="utf-8") as f:
        f.write(f"{_MERGES_HEADER} cue={table.cue} target={table.target_vocab}\n")
        for m in table.merges:
            f.write(f"{_token_str(m.left)}\t{_token_str(m.right)}\t{format(m.score, '.17g')}\n")
    with open(vocab_path, "w", encoding="utf-8") as f:
        f.write(_VOCAB_HEADER + "\n")
        for t in table.final_vocab():
            f.write(_token_str(t) + "\n")


def load_merge_table(merges_path: str, vocab_path: str) -> MergeTable:
    with open(merges_path, "r", encoding="utf-8") as f:
        header = f.readline().rstrip("\n")
        if not header.startswith(_MERGES_HEADER):
            raise SegcueError(f"{merges_path}: missing merge-table header")
        fields = dict(part.split("=", 1) for part in header[len(_MERGES_HEADER) :].split())
        merges = []
        for lineno, line in enumerate(f, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise SegcueError(f"{merges_path} line {lineno}: expected left<TAB>right<TAB>score")
            left, right = _token_from_str(parts[0]), _token_from_str(parts[1])
            merges.append(Merge(left=left, right=right, token=left + right, score=float(parts[2])))
    with open(vocab_path, "r", encoding="utf-8") as f:
        vheader = f.readline().rstrip("\n")
        if vheader != _VOCAB_HEADER:
            raise SegcueError(f"{vocab_path}: missing vocabulary header")
        vocab = [_token_from_str(line.rstrip("\n")) for line in f if line.rstrip("\n")]
    products = {m.token for m in merges}
    initial = tuple(t for t in vocab if t not in products)
    return MergeTable(
        merges=tuple(merges),
        cue=fields.get("cue", ""),
        target_vocab=int(fields.get("target", 0)),
        initial_vocab=initial,
    )
