"""segcue: extract, evaluate and exploit word-boundary cues from phoneme predictors."""

from .analysis import mean_word_length, normalized_entropy, pearson, word_final_distribution
from .corpus import (
    UB,
    Corpus,
    PhonemeInventory,
    Utterance,
    ingest,
    render,
    saffran_lexicon,
    split,
    strip_boundaries,
    subsample,
    synthesize,
)
from .cues import CUE_KINDS, CueTrack, compute_cues, corpus_cue_tracks, tracks_from_records
from .errors import CorpusError, SegcueError, TraceError
from .evaluator import BoundaryScore, GridResult, grid, mcnemar, score
from .predictor import NGramModel, RandomPredictor, random_distribution, train_ngram
from .probe import LinearProbe, ProbeDataset, build_probe_dataset, probe_accuracy, train_probe
from .segmenter import (
    STRATEGIES,
    Segmentation,
    segment_corpus,
    segment_track_peak,
    segment_track_relative,
    segment_track_threshold,
    tune,
)
from .tokenizer import MergeTable, ScoredStream, encode, train_cue_merges, train_freq_bpe
from .trace_io import PositionRecord, read_trace, write_trace

__version__ = "0.1.0"
