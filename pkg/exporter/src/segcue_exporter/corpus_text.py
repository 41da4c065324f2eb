"""Minimal reader for the segcue corpus text format.

One utterance per line, words separated by ``word_delim``, phonemes within a
word by ``phoneme_delim``.  The exporter only needs the unsegmented phoneme
sequences; gold word boundaries are dropped here.
"""

from __future__ import annotations


class ExportError(Exception):
    """Any exporter-side data or model failure."""


def read_utterances(
    text: str, word_delim: str = "\t", phoneme_delim: str = " "
) -> list[list[str]]:
    utterances: list[list[str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line == "":
            continue
        phones: list[str] = []
        for word in line.split(word_delim):
            parts = word.split(phoneme_delim)
            if any(p == "" for p in parts):
                raise ExportError(f"line {lineno}: empty phoneme token")
            phones.extend(parts)
        utterances.append(phones)
    if not utterances:
        raise ExportError("corpus contains no utterances")
    return utterances
