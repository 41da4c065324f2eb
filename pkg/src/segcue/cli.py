"""Command-line entry point: the whole pipeline as subcommands.

Exit codes: 0 success, 1 usage error (bad flags, missing inputs), 2 data
error.  All randomness is controlled by ``--seed``; running any subcommand
twice with identical flags produces byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import analysis, corpus as corpus_mod, cues as cues_mod, evaluator, probe as probe_mod
from . import segmenter, tokenizer as tok_mod, trace_io
from .errors import SegcueError
from .predictor import NGramModel, Predictor, RandomPredictor, train_ngram


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 1 (not 2) on usage errors."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _resolved_config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "dump_config")}


def _emit_config(args: argparse.Namespace, main_output: str | None) -> None:
    cfg = json.dumps(_resolved_config(args), sort_keys=True, ensure_ascii=False)
    if main_output:
        _write_text(main_output + ".config.json", cfg + "\n")
    if getattr(args, "dump_config", False):
        print(cfg)


def _read_corpus(args: argparse.Namespace, path: str) -> corpus_mod.Corpus:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    return corpus_mod.ingest(text, args.word_delim, args.phoneme_delim)


def _parse_fractions(spec: str) -> tuple[float, float, float]:
    parts = spec.split(",")
    if len(parts) != 3:
        raise SegcueError(f"--split needs three comma-separated fractions, got {spec!r}")
    try:
        a, b, c = (float(p) for p in parts)
    except ValueError:
        raise SegcueError(f"--split fractions must be numbers, got {spec!r}") from None
    return a, b, c


def _resolve_predictor(
    args: argparse.Namespace, train_corpus: corpus_mod.Corpus
) -> tuple[Predictor, corpus_mod.Corpus]:
    """Build the predictor named by --model/--predictor.

    Returns the predictor plus the training corpus reindexed to the
    predictor's inventory, so token ids always agree.
    """
    if getattr(args, "model", None):
        model = NGramModel.load(args.model)
        return model, corpus_mod.reindex(train_corpus, model.inventory)
    spec = getattr(args, "predictor", None)
    if not spec:
        raise SegcueError("a predictor is required: pass --model, --predictor or --trace")
    if spec.startswith("ngram:"):
        try:
            order = int(spec.split(":", 1)[1])
        except ValueError:
            raise SegcueError(f"bad predictor spec {spec!r}; expected ngram:N") from None
        stream = corpus_mod.strip_boundaries(train_corpus)
        return train_ngram(stream, order, train_corpus.inventory), train_corpus
    if spec == "random":
        return RandomPredictor(train_corpus.inventory, seed=args.seed, alpha=args.alpha), train_corpus
    raise SegcueError(f"unknown predictor spec {spec!r}; expected ngram:N or random")


def _tracks_for(
    args: argparse.Namespace,
    predictor: Predictor | None,
    part: corpus_mod.Corpus,
    trace_tracks: list | None,
    indices: list[int] | None,
) -> list:
    if trace_tracks is not None:
        assert indices is not None
        return [trace_tracks[i] for i in indices]
    assert predictor is not None
    return cues_mod.corpus_cue_tracks(predictor, corpus_mod.reindex(part, predictor.inventory))


# subcommand implementations ----------------------------------------------


def cmd_ingest(args: argparse.Namespace) -> None:
    c = _read_corpus(args, args.input)
    if args.max_tokens is not None:
        c = corpus_mod.subsample(c, args.max_tokens)
    if args.split:
        fractions = _parse_fractions(args.split)
        parts = corpus_mod.split(c, fractions, args.seed)
        for part, tag in zip(parts, ("train", "dev", "test")):
            _write_text(f"{args.output}.{tag}.txt", corpus_mod.render(part, args.word_delim, args.phoneme_delim))
        print(f"wrote splits of {len(c)} utterances to {args.output}.{{train,dev,test}}.txt")
    else:
        _write_text(args.output, corpus_mod.render(c, args.word_delim, args.phoneme_delim))
        print(f"wrote {len(c)} utterances ({c.token_count} tokens, "
              f"{len(c.inventory)} symbols incl. {corpus_mod.UB}) to {args.output}")
    _emit_config(args, args.output)


def cmd_synth(args: argparse.Namespace) -> None:
    with open(args.lexicon, "r", encoding="utf-8") as f:
        lexicon = corpus_mod.read_lexicon(f.read(), args.phoneme_delim)
    c = corpus_mod.synthesize(lexicon, (args.min_words, args.max_words), args.n, args.seed)
    _write_text(args.output, corpus_mod.render(c, args.word_delim, args.phoneme_delim))
    _emit_config(args, args.output)
    print(f"synthesized {len(c)} utterances ({c.token_count} tokens) from {len(lexicon)} words")


def cmd_train_ngram(args: argparse.Namespace) -> None:
    c = _read_corpus(args, args.input)
    stream = corpus_mod.strip_boundaries(c)
    model = train_ngram(stream, args.order, c.inventory)
    model.save(args.output)
    _emit_config(args, args.output)
    print(f"trained order-{args.order} model on {len(stream)} stream tokens -> {args.output}")


def cmd_cues(args: argparse.Namespace) -> None:
    c = _read_corpus(args, args.input)
    predictor, c = _resolve_predictor(args, c)
    tracks = cues_mod.corpus_cue_tracks(predictor, c, args.loss_ceiling)
    n = trace_io.write_trace(cues_mod.records_from_tracks(tracks, c), args.output)
    _emit_config(args, args.output)
    print(f"wrote {n} trace records for {len(c)} utterances to {args.output}")


def _load_trace_tracks(args: argparse.Namespace, corpus: corpus_mod.Corpus | None = None) -> list | None:
    if not getattr(args, "trace", None):
        return None
    tracks = cues_mod.tracks_from_records(trace_io.read_trace(args.trace))
    if corpus is not None:
        if len(tracks) != len(corpus):
            raise SegcueError(
                f"trace covers {len(tracks)} utterances, corpus has {len(corpus)}"
            )
        for i, (t, u) in enumerate(zip(tracks, corpus.utterances)):
            if t.utt != i:
                raise SegcueError(f"trace utterance ids are not contiguous at index {i}")
            if len(t) != len(u) + 1:
                raise SegcueError(
                    f"utterance {i}: trace has {len(t)} steps, corpus needs {len(u) + 1}"
                )
    return tracks


def cmd_segment(args: argparse.Namespace) -> None:
    c = _read_corpus(args, args.input)
    trace_tracks = _load_trace_tracks(args, c)
    if trace_tracks is not None:
        tracks = trace_tracks
    else:
        predictor, c = _resolve_predictor(args, c)
        tracks = cues_mod.corpus_cue_tracks(predictor, c)
    if args.strategy in ("threshold", "relative") and args.param is None:
        raise SegcueError(f"--param is required for the {args.strategy} strategy")
    seg = segmenter.segment_corpus(tracks, args.cue, args.strategy, args.param)
    _write_text(args.output, corpus_mod.render(c, args.word_delim, args.phoneme_delim, seg.boundaries))
    _emit_config(args, args.output)
    print(f"segmented {len(c)} utterances with {args.cue}/{args.strategy} -> {args.output}")


def cmd_tune(args: argparse.Namespace) -> None:
    c = _read_corpus(args, args.input)
    trace_tracks = _load_trace_tracks(args, c)
    if trace_tracks is not None:
        tracks = trace_tracks
    else:
        predictor, c = _resolve_predictor(args, c)
        tracks = cues_mod.corpus_cue_tracks(predictor, c)
    param = segmenter.tune(args.strategy, tracks, c, args.cue, args.n_candidates)
    seg = segmenter.segment_corpus(tracks, args.cue, args.strategy, param)
    dev_f1 = evaluator.score(c, seg).f1
    payload = {"cue": args.cue, "strategy": args.strategy, "parameter": param, "dev_f1": dev_f1}
    _write_text(args.output, json.dumps(payload, sort_keys=True) + "\n")
    _emit_config(args, args.output)
    print(f"tuned {args.cue}/{args.strategy}: parameter={param!r} dev_f1={dev_f1:.4f}")


def _segmentation_from_file(args: argparse.Namespace, gold: corpus_mod.Corpus, path: str) -> segmenter.Segmentation:
    pred = corpus_mod.reindex(_read_corpus(args, path), gold.inventory)
    if len(pred.utterances) != len(gold.utterances):
        raise SegcueError(
            f"{path}: {len(pred.utterances)} utterances, expected {len(gold.utterances)}"
        )
    for ui, (pu, gu) in enumerate(zip(pred.utterances, gold.utterances)):
        if pu.tokens != gu.tokens:
            raise SegcueError(f"{path}: utterance {ui} phonemes differ from the gold corpus")
    return segmenter.Segmentation(
        boundaries=tuple(u.gold_boundaries for u in pred.utterances), strategy="file"
    )


def cmd_eval(args: argparse.Namespace) -> None:
    gold = _read_corpus(args, args.gold)
    seg = _segmentation_from_file(args, gold, args.pred)
    sc = evaluator.score(gold, seg)
    if args.report:
        lines = ["metric,value"]
        for name in ("precision", "recall", "f1"):
            lines.append(f"{name},{getattr(sc, name):.6f}")
        for name, v in (("tp", sc.true_positives), ("fp", sc.false_positives), ("fn", sc.false_negatives)):
            lines.append(f"{name},{v}")
        _write_text(args.report, "\n".join(lines) + "\n")
    _emit_config(args, args.report)
    print(
        f"precision={sc.precision:.6f} recall={sc.recall:.6f} f1={sc.f1:.6f} "
        f"tp={sc.true_positives} fp={sc.false_positives} fn={sc.false_negatives}"
    )


def cmd_grid(args: argparse.Namespace) -> None:
    c = _read_corpus(args, args.input)
    fractions = _parse_fractions(args.split)
    idx_train, idx_dev, idx_test = corpus_mod.split_indices(len(c), fractions, args.seed)
    parts = corpus_mod.split(c, fractions, args.seed)
    train_c, dev_c, test_c = parts
    trace_tracks = _load_trace_tracks(args, c)
    predictor = None
    if trace_tracks is None:
        predictor, train_c = _resolve_predictor(args, train_c)
    dev_tracks = _tracks_for(args, predictor, dev_c, trace_tracks, idx_dev)
    test_tracks = _tracks_for(args, predictor, test_c, trace_tracks, idx_test)
    if predictor is not None:
        dev_c = corpus_mod.reindex(dev_c, predictor.inventory)
        test_c = corpus_mod.reindex(test_c, predictor.inventory)
    result = evaluator.grid(test_c, test_tracks, dev_c, dev_tracks, args.n_candidates, args.threads)
    _write_text(args.report, evaluator.grid_csv(result))
    _emit_config(args, args.report)
    cue, strat = result.best
    print(f"best cell: {cue}/{strat} f1={result.scores[result.best].f1:.4f} -> {args.report}")


def cmd_probe(args: argparse.Namespace) -> None:
    gold = _read_corpus(args, args.corpus)
    dataset = probe_mod.build_probe_dataset(trace_io.read_trace(args.trace), gold, args.seed, args.train_frac)
    model = probe_mod.train_probe(dataset.train)
    report = probe_mod.probe_report(model, dataset)
    lines = ["metric,value"]
    for name in (
        "accuracy",
        "final_accuracy",
        "internal_accuracy",
        "train_size",
        "test_size",
        "train_word_types",
        "test_word_types",
    ):
        v = getattr(report, name)
        lines.append(f"{name},{v:.6f}" if isinstance(v, float) else f"{name},{v}")
    lines.append("balanced_chance,0.500000")
    if args.baseline_trace:
        base_ds = probe_mod.build_probe_dataset(
            trace_io.read_trace(args.baseline_trace), gold, args.seed, args.train_frac
        )
        base = probe_mod.probe_report(probe_mod.train_probe(base_ds.train), base_ds)
        lines.append(f"baseline_accuracy,{base.accuracy:.6f}")
    _write_text(args.output, "\n".join(lines) + "\n")
    _emit_config(args, args.output)
    print(f"probe accuracy={report.accuracy:.4f} (test n={report.test_size}) -> {args.output}")


def cmd_analyze(args: argparse.Namespace) -> None:
    c = _read_corpus(args, args.input)
    final, other = analysis.word_final_distribution(c)
    freq_lines = ["phoneme,final,other"]
    for s in sorted(set(final.probabilities) | set(other.probabilities)):
        freq_lines.append(
            f"{s},{final.probabilities.get(s, 0.0):.6f},{other.probabilities.get(s, 0.0):.6f}"
        )
    _write_text(args.output + ".frequencies.csv", "\n".join(freq_lines) + "\n")
    stats = [
        ("utterances", len(c)),
        ("tokens", c.token_count),
        ("words", c.word_count),
        ("mean_word_length", f"{analysis.mean_word_length(c):.6f}"),
        ("final_support", final.support),
        ("final_normalized_entropy", f"{analysis.normalized_entropy(final):.6f}"),
        ("other_support", other.support),
        ("other_normalized_entropy", f"{analysis.normalized_entropy(other):.6f}"),
    ]
    _write_text(
        args.output + ".stats.csv",
        "\n".join(["metric,value"] + [f"{k},{v}" for k, v in stats]) + "\n",
    )
    _emit_config(args, args.output)
    print(f"wrote {args.output}.frequencies.csv and {args.output}.stats.csv")


def cmd_mcnemar(args: argparse.Namespace) -> None:
    gold = _read_corpus(args, args.gold)
    seg_a = _segmentation_from_file(args, gold, args.pred_a)
    seg_b = _segmentation_from_file(args, gold, args.pred_b)
    res = evaluator.mcnemar(gold, seg_a, seg_b, args.method)
    if args.output:
        payload = {"b": res.b, "c": res.c, "p_value": res.p_value, "method": res.method}
        _write_text(args.output, json.dumps(payload, sort_keys=True) + "\n")
    _emit_config(args, args.output)
    print(f"b={res.b} c={res.c} p={format(res.p_value, '.17g')} method={res.method}")


def cmd_tok_train(args: argparse.Namespace) -> None:
    c = _read_corpus(args, args.input)
    if args.cue == "freq":
        result = tok_mod.train_freq_bpe(
            tok_mod.corpus_stream_tokens(c), args.vocab_size, args.min_pair_count
        )
    else:
        predictor, c = _resolve_predictor(args, c)
        stream = tok_mod.build_scored_stream(predictor, c, args.cue)
        result = tok_mod.train_cue_merges(stream, args.vocab_size, args.cue, args.min_pair_count)
    tok_mod.save_merge_table(result.table, args.output, args.vocab_out)
    _emit_config(args, args.output)
    print(
        f"learned {len(result.table.merges)} merges "
        f"(vocab {len(result.table.final_vocab())}) -> {args.output}"
    )


def cmd_tok_encode(args: argparse.Namespace) -> None:
    c = _read_corpus(args, args.input)
    table = tok_mod.load_merge_table(args.merges, args.vocab)
    encoded = tok_mod.encode(table, tok_mod.corpus_stream_tokens(c))
    lines: list[str] = []
    current: list[str] = []
    for t in encoded:
        if t == tok_mod.UB_TOKEN:
            if current:
                lines.append(args.word_delim.join(current))
                current = []
            continue
        current.append(args.phoneme_delim.join(t))
    if current:
        lines.append(args.word_delim.join(current))
    _write_text(args.output, "\n".join(lines) + "\n")
    _emit_config(args, args.output)
    print(f"encoded {len(c)} utterances into {len(encoded)} stream tokens -> {args.output}")


# parser construction ------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, seed: bool = True) -> None:
    p.add_argument("--phoneme-delim", default=" ", help="delimiter between phonemes in a word")
    p.add_argument("--word-delim", default="\t", help="delimiter between words in an utterance")
    p.add_argument("--dump-config", action="store_true", help="echo the resolved config to stdout")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="seed controlling all randomness")


def _add_predictor_flags(p: argparse.ArgumentParser, with_trace: bool = True) -> None:
    p.add_argument("--model", help="path to a saved n-gram model")
    p.add_argument("--predictor", help="predictor spec: ngram:N (trained on the input) or random")
    p.add_argument("--alpha", type=float, default=1.0, help="Dirichlet concentration for random predictor")
    if with_trace:
        p.add_argument("--trace", help="read cues from a trace file instead of a predictor")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="segcue", description="prediction-cue word segmentation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[], help="validate, normalize, subsample and split corpora")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--max-tokens", type=int, help="subsample to a token budget")
    p.add_argument("--split", help="train,dev,test fractions, e.g. 0.8,0.1,0.1")
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="synthesize a corpus from a lexicon")
    p.add_argument("--lexicon", required=True, help="file with one word per line")
    p.add_argument("--n", type=int, required=True, help="number of utterances")
    p.add_argument("--min-words", type=int, default=4)
    p.add_argument("--max-words", type=int, default=8)
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train-ngram", help="train a Witten-Bell n-gram model")
    p.add_argument("input")
    p.add_argument("--order", type=int, default=5)
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_train_ngram)

    p = sub.add_parser("cues", help="compute cue tracks and write them as a trace")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--loss-ceiling", type=float, default=cues_mod.DEFAULT_LOSS_CEILING)
    _add_predictor_flags(p, with_trace=False)
    _add_common(p)
    p.set_defaults(func=cmd_cues)

    p = sub.add_parser("segment", help="place word boundaries with one cue and strategy")
    p.add_argument("input")
    p.add_argument("--cue", choices=cues_mod.CUE_KINDS, required=True)
    p.add_argument("--strategy", choices=segmenter.STRATEGIES, required=True)
    p.add_argument("--param", type=float, help="threshold (or relative delta)")
    p.add_argument("-o", "--output", required=True)
    _add_predictor_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("tune", help="tune a threshold/relative parameter on a dev corpus")
    p.add_argument("input")
    p.add_argument("--cue", choices=cues_mod.CUE_KINDS, required=True)
    p.add_argument("--strategy", choices=("threshold", "relative"), required=True)
    p.add_argument("--n-candidates", type=int, default=512)
    p.add_argument("-o", "--output", required=True)
    _add_predictor_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("eval", help="score a predicted segmentation against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--report", help="optional CSV output path")
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="score all cue-strategy combinations")
    p.add_argument("input")
    p.add_argument("--split", default="0.8,0.1,0.1", help="train,dev,test fractions")
    p.add_argument("--n-candidates", type=int, default=512)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--report", required=True, help="CSV output path")
    _add_predictor_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("probe", help="train the word-boundary probe on trace embeddings")
    p.add_argument("--trace", required=True)
    p.add_argument("--corpus", required=True, help="gold corpus matching the trace")
    p.add_argument("--train-frac", type=float, default=0.8)
    p.add_argument("--baseline-trace", help="trace from an untrained model, for the prior baseline")
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("analyze", help="corpus statistics: frequencies, entropy, word length")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True, help="output prefix")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("mcnemar", help="significance test between two segmentations")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred-a", required=True)
    p.add_argument("--pred-b", required=True)
    p.add_argument("--method", choices=("auto", "exact", "chi2"), default="auto")
    p.add_argument("-o", "--output", help="optional JSON output path")
    _add_common(p)
    p.set_defaults(func=cmd_mcnemar)

    p = sub.add_parser("tok-train", help="train a cue-BPE or frequency-BPE merge table")
    p.add_argument("input")
    p.add_argument("--cue", choices=("ubp", "entropy", "freq"), required=True)
    p.add_argument("--vocab-size", type=int, required=True)
    p.add_argument("--min-pair-count", type=int, default=1)
    p.add_argument("-o", "--output", required=True, help="merge table path")
    p.add_argument("--vocab-out", required=True, help="vocabulary file path")
    _add_predictor_flags(p, with_trace=False)
    _add_common(p)
    p.set_defaults(func=cmd_tok_train)

    p = sub.add_parser("tok-encode", help="apply a learned merge table to a corpus")
    p.add_argument("input")
    p.add_argument("--merges", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_tok_encode)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except SegcueError as e:
        print(f"segcue: error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"segcue: error: missing input: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
