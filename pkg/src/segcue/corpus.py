"""Phoneme corpora: ingestion, rendering, synthesis, subsampling and splits.

A corpus is a list of utterances, each a sequence of phoneme ids with a gold
word-boundary bit per position.  Word boundaries exist only as gold labels;
the modeling stream produced by :func:`strip_boundaries` contains utterance
boundaries (`<UB>`) but no word information.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CorpusError

UB = "<UB>"


@dataclass(frozen=True)
class PhonemeInventory:
    """Bidirectional symbol <-> id map with the reserved `<UB>` symbol at id 0."""

    symbols: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(set(self.symbols)) != len(self.symbols):
            raise CorpusError("inventory symbols must be unique")
        if self.symbols.count(UB) != 1 or self.symbols[0] != UB:
            raise CorpusError(f"inventory must contain {UB!r} exactly once, at id 0")
        if any(not s for s in self.symbols):
            raise CorpusError("inventory symbols must be non-empty")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    @property
    def ub_id(self) -> int:
        return 0

    def id_of(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise CorpusError(f"unknown phoneme symbol {symbol!r}") from None

    def symbol_of(self, token_id: int) -> str:
        if not 0 <= token_id < len(self.symbols):
            raise CorpusError(f"token id {token_id} out of range")
        return self.symbols[token_id]

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index


@dataclass(frozen=True)
class Utterance:
    """Phoneme ids plus a gold boundary bit-vector.

    ``gold_boundaries[j]`` is 1 iff a word starts at position j (0-based).
    The first position always starts a word.
    """

    tokens: tuple[int, ...]
    gold_boundaries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.tokens) < 1:
            raise CorpusError("utterance must contain at least one phoneme")
        if len(self.gold_boundaries) != len(self.tokens):
            raise CorpusError("boundary vector length must equal token count")
        if any(b not in (0, 1) for b in self.gold_boundaries):
            raise CorpusError("boundary vector entries must be 0 or 1")
        if self.gold_boundaries[0] != 1:
            raise CorpusError("an utterance always begins a word")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def word_count(self) -> int:
        return sum(self.gold_boundaries)

    def words(self) -> list[tuple[int, ...]]:
        """Split tokens into words at gold boundaries."""
        out: list[tuple[int, ...]] = []
        start = 0
        for j in range(1, len(self.tokens)):
            if self.gold_boundaries[j]:
                out.append(self.tokens[start:j])
                start = j
        out.append(self.tokens[start:])
        return out


@dataclass(frozen=True)
class Corpus:
    """Immutable collection of utterances over one inventory."""

    inventory: PhonemeInventory
    utterances: tuple[Utterance, ...]
    language_tag: str = ""

    def __post_init__(self) -> None:
        n = len(self.inventory)
        for u in self.utterances:
            for t in u.tokens:
                if not 0 <= t < n:
                    raise CorpusError(f"token id {t} outside inventory of size {n}")
                if t == self.inventory.ub_id:
                    raise CorpusError(f"{UB!r} may not occur inside an utterance")

    @property
    def token_count(self) -> int:
        return sum(len(u) for u in self.utterances)

    @property
    def word_count(self) -> int:
        return sum(u.word_count for u in self.utterances)

    def __len__(self) -> int:
        return len(self.utterances)


def ingest(
    text: str,
    word_delim: str = "\t",
    phoneme_delim: str = " ",
    language_tag: str = "",
) -> Corpus:
    """Parse delimiter-separated phoneme text into a Corpus.

    One utterance per line; words separated by ``word_delim``; phonemes within
    a word separated by ``phoneme_delim``.  Empty lines are skipped.  Lines
    with empty phoneme tokens (or the reserved `<UB>` symbol) are rejected
    with a warning naming the line number.  Raises CorpusError when no usable
    lines remain.
    """
    if not word_delim or not phoneme_delim or word_delim == phoneme_delim:
        raise CorpusError("word and phoneme delimiters must differ and be non-empty")
    symbols: list[str] = [UB]
    index: dict[str, int] = {UB: 0}
    utterances: list[Utterance] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line == "":
            continue
        tokens: list[int] = []
        bounds: list[int] = []
        bad = None
        for word in line.split(word_delim):
            phones = word.split(phoneme_delim)
            if not phones or any(p == "" for p in phones):
                bad = "empty phoneme token"
                break
            if UB in phones:
                bad = f"reserved symbol {UB!r} used as a phoneme"
                break
            for k, p in enumerate(phones):
                if p not in index:
                    index[p] = len(symbols)
                    symbols.append(p)
                tokens.append(index[p])
                bounds.append(1 if k == 0 else 0)
        if bad is not None:
            warnings.warn(f"line {lineno}: {bad}; line rejected", stacklevel=2)
            continue
        utterances.append(Utterance(tuple(tokens), tuple(bounds)))
    if not utterances:
        raise CorpusError("no usable utterances in input")
    return Corpus(PhonemeInventory(tuple(symbols)), tuple(utterances), language_tag)


def render(
    corpus: Corpus,
    word_delim: str = "\t",
    phoneme_delim: str = " ",
    boundaries: Sequence[Sequence[int]] | None = None,
) -> str:
    """Render a corpus back to delimiter-separated text.

    When ``boundaries`` is given (one bit-vector per utterance) it replaces
    the gold boundaries, which is how predicted segmentations are written out.
    """
    if boundaries is not None and len(boundaries) != len(corpus.utterances):
        raise CorpusError("boundary vectors do not match utterance count")
    lines = []
    for ui, u in enumerate(corpus.utterances):
        bits = boundaries[ui] if boundaries is not None else u.gold_boundaries
        if len(bits) != len(u):
            raise CorpusError(f"utterance {ui}: boundary vector length mismatch")
        words: list[str] = []
        current: list[str] = []
        for j, t in enumerate(u.tokens):
            if j > 0 and bits[j]:
                words.append(phoneme_delim.join(current))
                current = []
            current.append(corpus.inventory.symbol_of(t))
        words.append(phoneme_delim.join(current))
        lines.append(word_delim.join(words))
    return "\n".join(lines) + "\n"


def strip_boundaries(corpus: Corpus) -> list[int]:
    """Produce the unsegmented modeling stream: `<UB>` t.. `<UB>` t.. `<UB>`."""
    ub = corpus.inventory.ub_id
    stream: list[int] = [ub]
    for u in corpus.utterances:
        stream.extend(u.tokens)
        stream.append(ub)
    return stream


def subsample(corpus: Corpus, max_tokens: int) -> Corpus:
    """Keep the longest utterance prefix whose token total fits the budget."""
    if max_tokens < 1:
        raise CorpusError("max_tokens must be at least 1")
    kept: list[Utterance] = []
    total = 0
    for u in corpus.utterances:
        if total + len(u) > max_tokens:
            break
        kept.append(u)
        total += len(u)
    if not kept:
        raise CorpusError(
            f"first utterance ({len(corpus.utterances[0])} tokens) exceeds budget {max_tokens}"
        )
    return Corpus(corpus.inventory, tuple(kept), corpus.language_tag)


def split_indices(
    n: int, fractions: Sequence[float], seed: int
) -> tuple[list[int], list[int], list[int]]:
    """Deterministic utterance-index partition by largest-remainder sizes."""
    if len(fractions) != 3:
        raise CorpusError("exactly three split fractions required")
    if any(f <= 0 for f in fractions):
        raise CorpusError("split fractions must be positive")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise CorpusError("split fractions must sum to 1")
    sizes = [math.floor(f * n) for f in fractions]
    remainders = [f * n - s for f, s in zip(fractions, sizes)]
    for i in sorted(range(3), key=lambda i: (-remainders[i], i))[: n - sum(sizes)]:
        sizes[i] += 1
    if any(s == 0 for s in sizes):
        raise CorpusError(f"split of {n} utterances by {list(fractions)} leaves an empty part")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    parts = []
    start = 0
    for s in sizes:
        parts.append(sorted(order[start : start + s]))
        start += s
    return parts[0], parts[1], parts[2]


def split(
    corpus: Corpus, fractions: Sequence[float], seed: int
) -> tuple[Corpus, Corpus, Corpus]:
    """Deterministic utterance-level train/dev/test partition.

    Sizes follow the largest-remainder rule so the split is exhaustive; the
    assignment is a seeded shuffle.  Each part keeps corpus order.
    """
    parts = split_indices(len(corpus.utterances), fractions, seed)
    return tuple(  # type: ignore[return-value]
        Corpus(corpus.inventory, tuple(corpus.utterances[i] for i in idx), corpus.language_tag)
        for idx in parts
    )


def reindex(corpus: Corpus, inventory: PhonemeInventory) -> Corpus:
    """Re-encode a corpus against another inventory (e.g. a trained model's)."""
    mapping = {}
    for i, s in enumerate(corpus.inventory.symbols):
        if s not in inventory:
            raise CorpusError(f"symbol {s!r} missing from the target inventory")
        mapping[i] = inventory.id_of(s)
    utterances = tuple(
        Utterance(tuple(mapping[t] for t in u.tokens), u.gold_boundaries)
        for u in corpus.utterances
    )
    return Corpus(inventory, utterances, corpus.language_tag)


def synthesize(
    lexicon: Sequence[Sequence[str]],
    length_range: tuple[int, int],
    n_utterances: int,
    seed: int,
    language_tag: str = "synthetic",
) -> Corpus:
    """Build an artificial corpus of uniform-random word concatenations.

    ``length_range`` bounds the number of words per utterance (inclusive).
    Gold boundaries mark word starts.  Deterministic under ``seed``.
    """
    if not lexicon:
        raise CorpusError("lexicon must be non-empty")
    if any(len(w) == 0 for w in lexicon):
        raise CorpusError("lexicon words must be non-empty")
    lo, hi = length_range
    if lo > hi or lo < 1:
        raise CorpusError(f"degenerate utterance length range [{lo}, {hi}]")
    if n_utterances < 1:
        raise CorpusError("n_utterances must be at least 1")
    symbols: list[str] = [UB]
    index: dict[str, int] = {UB: 0}
    words: list[tuple[int, ...]] = []
    for w in lexicon:
        ids = []
        for p in w:
            if p == UB or p == "":
                raise CorpusError(f"invalid phoneme {p!r} in lexicon")
            if p not in index:
                index[p] = len(symbols)
                symbols.append(p)
            ids.append(index[p])
        words.append(tuple(ids))
    rng = random.Random(seed)
    utterances = []
    for _ in range(n_utterances):
        n_words = rng.randint(lo, hi)
        tokens: list[int] = []
        bounds: list[int] = []
        for _ in range(n_words):
            w = words[rng.randrange(len(words))]
            tokens.extend(w)
            bounds.extend([1] + [0] * (len(w) - 1))
        utterances.append(Utterance(tuple(tokens), tuple(bounds)))
    return Corpus(PhonemeInventory(tuple(symbols)), tuple(utterances), language_tag)


def saffran_lexicon() -> list[list[str]]:
    """Six three-syllable CV words over a 12-phoneme inventory.

    Each of the 18 consonant-vowel syllables is unique, so within-word
    transitions are highly predictable while cross-word transitions are not.
    """
    return [
        ["b", "a", "d", "e", "g", "i"],
        ["k", "o", "p", "u", "t", "y"],
        ["b", "e", "d", "i", "g", "o"],
        ["k", "u", "p", "y", "t", "a"],
        ["b", "i", "d", "o", "g", "u"],
        ["k", "y", "p", "a", "t", "e"],
    ]


def read_lexicon(text: str, phoneme_delim: str = " ") -> list[list[str]]:
    """Parse a lexicon file: one word per line, phonemes delimiter-separated."""
    words = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line == "":
            continue
        phones = line.split(phoneme_delim)
        if any(p == "" for p in phones):
            raise CorpusError(f"lexicon line {lineno}: empty phoneme token")
        words.append(phones)
    if not words:
        raise CorpusError("lexicon is empty")
    return words
