import numpy as np
import pytest

from segcue.corpus import ingest
from segcue.errors import SegcueError
from segcue.probe import (
    LinearProbe,
    ProbeDataset,
    ProbeSplit,
    build_probe_dataset,
    logistic_loss_and_grad,
    probe_accuracy,
    probe_report,
    train_probe,
)
from segcue.trace_io import PositionRecord


def records_for(corpus, emb_fn, dim=4):
    """One record per position 1..N+1 with embeddings from emb_fn(utt, pos)."""
    out = []
    for ui, u in enumerate(corpus.utterances):
        for i in range(1, len(u) + 2):
            token = corpus.inventory.symbol_of(u.tokens[i - 1]) if i <= len(u) else "<UB>"
            out.append(
                PositionRecord(
                    utt=ui,
                    pos=i,
                    token=token,
                    entropy=1.0,
                    surprisal=1.0,
                    rank=1,
                    ubp=0.5,
                    emb=tuple(emb_fn(ui, i, dim)),
                )
            )
    return out


def gaussian_clusters(n_per_class, d, separation, seed):
    rng = np.random.default_rng(seed)
    pos = rng.normal(loc=separation / 2, scale=1.0, size=(n_per_class, d))
    neg = rng.normal(loc=-separation / 2, scale=1.0, size=(n_per_class, d))
    x = np.vstack([pos, neg])
    y = np.array([1] * n_per_class + [0] * n_per_class)
    return x, y


def split_of(x, y):
    return ProbeSplit(embeddings=x, labels=y, word_types=("synthetic",))


def test_word_final_label_definition():
    corpus = ingest("A B\tC D")
    rng = np.random.default_rng(0)
    records = records_for(corpus, lambda u, i, d: rng.normal(size=d))
    # positions 2 and 4 end words; 1 and 3 are internal
    labels = {}
    u = corpus.utterances[0]
    for i in range(1, len(u) + 1):
        labels[i] = 1 if (i == len(u) or u.gold_boundaries[i] == 1) else 0
    assert labels == {1: 0, 2: 1, 3: 0, 4: 1}
    ds = build_probe_dataset(records, corpus, seed=0)
    # both sides exist and are balanced by construction
    for side in (ds.train, ds.test):
        assert (side.labels == 1).sum() == (side.labels == 0).sum() > 0


def test_probe_dataset_balance_under_skew():
    # words of length 4: one final per three internals; balancing must equalize
    text = "\n".join(["a b c d\te f g h\na b c d\ti j k l"] * 8)
    corpus = ingest(text)
    rng = np.random.default_rng(1)
    records = records_for(corpus, lambda u, i, d: rng.normal(size=d))
    ds = build_probe_dataset(records, corpus, seed=3)
    assert (ds.train.labels == 1).sum() == (ds.train.labels == 0).sum()
    assert (ds.test.labels == 1).sum() == (ds.test.labels == 0).sum()


def test_word_type_disjointness_100_seeds():
    lines = []
    words = ["a b", "c d", "e f g", "h", "i j", "k l m", "n o", "p q r", "s t", "u v w"]
    for k in range(20):
        lines.append("\t".join(words[(k + j) % len(words)] for j in range(3)))
    corpus = ingest("\n".join(lines))
    rng = np.random.default_rng(2)
    records = records_for(corpus, lambda u, i, d: rng.normal(size=d))
    for seed in range(100):
        ds = build_probe_dataset(records, corpus, seed=seed)
        assert set(ds.train.word_types) & set(ds.test.word_types) == set()


def test_probe_dataset_requires_embeddings():
    corpus = ingest("a b\tc d")
    records = [
        PositionRecord(0, i, "a", 1.0, 1.0, 1, 0.5, None) for i in range(1, 6)
    ]
    with pytest.raises(SegcueError, match="embedding"):
        build_probe_dataset(records, corpus, seed=0)


def test_probe_dataset_needs_two_word_types():
    corpus = ingest("a a\ta a")
    rng = np.random.default_rng(0)
    records = records_for(corpus, lambda u, i, d: rng.normal(size=d))
    with pytest.raises(SegcueError, match="word types"):
        build_probe_dataset(records, corpus, seed=0)


def test_separable_clusters_reach_high_accuracy():
    x_train, y_train = gaussian_clusters(400, 16, separation=10.0, seed=0)
    x_test, y_test = gaussian_clusters(200, 16, separation=10.0, seed=1)
    probe = train_probe(split_of(x_train, y_train))
    assert probe_accuracy(probe, split_of(x_test, y_test)) >= 0.99


def test_shuffled_labels_hit_chance():
    accs = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        x_train = rng.normal(size=(1000, 16))
        y_train = np.array([0, 1] * 500)
        x_test = rng.normal(size=(1000, 16))
        y_test = np.array([0, 1] * 500)
        probe = train_probe(split_of(x_train, y_train))
        accs.append(probe_accuracy(probe, split_of(x_test, y_test)))
    assert abs(float(np.mean(accs)) - 0.5) <= 0.03


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(12, 5))
    y = rng.integers(0, 2, size=12).astype(float)
    w = rng.normal(size=5) * 0.3
    b = 0.17
    loss, gw, gb = logistic_loss_and_grad(w, b, x, y)
    h = 1e-6
    for k in range(5):
        wp, wm = w.copy(), w.copy()
        wp[k] += h
        wm[k] -= h
        num = (logistic_loss_and_grad(wp, b, x, y)[0] - logistic_loss_and_grad(wm, b, x, y)[0]) / (2 * h)
        assert abs(num - gw[k]) / max(abs(num), 1e-12) < 1e-6
    num_b = (logistic_loss_and_grad(w, b + h, x, y)[0] - logistic_loss_and_grad(w, b - h, x, y)[0]) / (2 * h)
    assert abs(num_b - gb) / max(abs(num_b), 1e-12) < 1e-6


def test_training_accuracy_beats_majority_rule():
    x_train, y_train = gaussian_clusters(200, 8, separation=3.0, seed=5)
    split = split_of(x_train, y_train)
    probe = train_probe(split)
    assert probe_accuracy(probe, split) >= 0.5


def test_predictions_invariant_under_feature_permutation():
    x_train, y_train = gaussian_clusters(150, 6, separation=4.0, seed=6)
    x_test, y_test = gaussian_clusters(80, 6, separation=4.0, seed=7)
    perm = np.random.default_rng(8).permutation(6)
    p1 = train_probe(split_of(x_train, y_train))
    p2 = train_probe(split_of(x_train[:, perm], y_train))
    np.testing.assert_array_equal(
        p1.predict(x_test), p2.predict(x_test[:, perm])
    )


def test_standardization_uses_train_stats_only():
    x_train, y_train = gaussian_clusters(100, 4, separation=5.0, seed=9)
    probe = train_probe(split_of(x_train, y_train))
    np.testing.assert_allclose(probe.feature_mean, x_train.mean(axis=0))
    sd = x_train.std(axis=0)
    np.testing.assert_allclose(probe.feature_scale, np.where(sd > 0, sd, 1.0))


def test_probe_report_fields():
    x_train, y_train = gaussian_clusters(100, 4, separation=8.0, seed=10)
    x_test, y_test = gaussian_clusters(50, 4, separation=8.0, seed=11)
    ds = ProbeDataset(
        train=ProbeSplit(x_train, y_train, ("w1", "w2")),
        test=ProbeSplit(x_test, y_test, ("w3",)),
    )
    report = probe_report(train_probe(ds.train), ds)
    assert report.train_size == 200 and report.test_size == 100
    assert report.train_word_types == 2 and report.test_word_types == 1
    assert 0.0 <= report.final_accuracy <= 1.0
    assert 0.0 <= report.internal_accuracy <= 1.0
    assert report.accuracy >= 0.99
