from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from segcue.corpus import PhonemeInventory, UB, ingest, strip_boundaries
from segcue.errors import SegcueError
from segcue.predictor import NGramModel, RandomPredictor, random_distribution, train_ngram


def inv(*symbols):
    return PhonemeInventory((UB,) + symbols)


def test_bigram_counts_direct():
    inventory = inv("A", "B")
    a, b = inventory.id_of("A"), inventory.id_of("B")
    model = train_ngram([0, a, b, 0], order=2, inventory=inventory)
    bigrams = model.counts[1]
    assert bigrams == {(0,): {a: 1}, (a,): {b: 1}, (b,): {0: 1}}


def test_context_truncation_to_order():
    inventory = inv("A", "B", "C")
    c = ingest("A B\tC A\nB C\tA B")
    model = train_ngram(strip_boundaries(c), order=3, inventory=c.inventory)
    long_ctx = [1, 2, 3, 1, 2]
    np.testing.assert_array_equal(model.distribution(long_ctx), model.distribution(long_ctx[-2:]))


def test_witten_bell_hand_value():
    # corpus "A B" x50: c(A B)=50 with a single successor type after A
    inventory = inv("A", "B")
    a, b = 1, 2
    stream = [0] + [a, b, 0] * 50
    model = train_ngram(stream, order=2, inventory=inventory)
    # unigram level: P1(B) = (c(B) + T0/|V|) / (N + T0), N=151, T0=3, |V|=3
    p1_b = Fraction(50) + Fraction(3, 3)
    p1_b /= Fraction(151 + 3)
    expected = (Fraction(50) + 1 * p1_b) / Fraction(50 + 1)
    got = model.distribution([a])[b]
    assert got == pytest.approx(float(expected), abs=1e-12)


def test_untrained_model_uniform():
    inventory = inv("A", "B", "C")
    model = NGramModel(order=3, inventory=inventory)
    np.testing.assert_allclose(model.distribution([1, 2]), np.full(4, 0.25))


def test_mode_preserved_under_smoothing():
    c = ingest("\n".join(["A\tB"] * 30))
    model = train_ngram(strip_boundaries(c), order=2, inventory=c.inventory)
    a, b = c.inventory.id_of("A"), c.inventory.id_of("B")
    q = model.distribution([a])
    assert all(q[b] > q[x] for x in range(len(c.inventory)) if x != b)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=40), st.integers(1, 4))
def test_distribution_normalized_and_positive(stream_tail, order):
    inventory = inv("A", "B", "C")
    stream = [0] + stream_tail
    model = train_ngram(stream, order=order, inventory=inventory)
    rng = np.random.default_rng(0)
    for _ in range(20):
        ctx = list(rng.integers(0, 4, size=rng.integers(0, 6)))
        q = model.distribution(ctx)
        assert abs(q.sum() - 1.0) <= 1e-9
        assert (q > 0).all()
        assert len(q) == len(inventory)


def test_normalization_over_many_random_contexts(saffran_corpus):
    model = train_ngram(strip_boundaries(saffran_corpus), 5, saffran_corpus.inventory)
    rng = np.random.default_rng(1)
    size = len(saffran_corpus.inventory)
    for _ in range(1000):
        ctx = list(rng.integers(0, size, size=rng.integers(0, 8)))
        assert abs(model.distribution(ctx).sum() - 1.0) <= 1e-9


def test_retraining_is_deterministic(saffran_corpus):
    stream = strip_boundaries(saffran_corpus)
    m1 = train_ngram(stream, 3, saffran_corpus.inventory)
    m2 = train_ngram(stream, 3, saffran_corpus.inventory)
    assert m1.counts == m2.counts


def test_train_rejects_empty_stream():
    with pytest.raises(SegcueError):
        train_ngram([], 2, inv("A"))


def test_distribution_matches_witten_bell_oracle(saffran_corpus):
    stream = strip_boundaries(saffran_corpus)
    model = train_ngram(stream, 4, saffran_corpus.inventory)
    oracle = oracles.WittenBellOracle(stream, 4, len(saffran_corpus.inventory))
    rng = np.random.default_rng(2)
    for _ in range(50):
        ctx = list(rng.integers(0, len(saffran_corpus.inventory), size=rng.integers(0, 6)))
        got = model.distribution(ctx)
        want = oracle.distribution(ctx)
        np.testing.assert_allclose(got, want, atol=1e-12)


def test_save_load_round_trip(tmp_path, saffran_corpus):
    stream = strip_boundaries(saffran_corpus)
    model = train_ngram(stream, 3, saffran_corpus.inventory)
    path = tmp_path / "model.json"
    model.save(str(path))
    loaded = NGramModel.load(str(path))
    assert loaded.order == model.order
    assert loaded.inventory.symbols == model.inventory.symbols
    rng = np.random.default_rng(3)
    for _ in range(25):
        ctx = list(rng.integers(0, len(model.inventory), size=rng.integers(0, 5)))
        np.testing.assert_array_equal(model.distribution(ctx), loaded.distribution(ctx))


def test_random_predictor_deterministic():
    pred = RandomPredictor(inv("A", "B", "C"), seed=11, alpha=0.7)
    a = random_distribution(pred, 42)
    b = random_distribution(pred, 42)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, random_distribution(pred, 43))


def test_random_predictor_normalized():
    pred = RandomPredictor(inv("A", "B", "C", "D"), seed=5)
    for idx in range(200):
        q = random_distribution(pred, idx)
        assert abs(q.sum() - 1.0) <= 1e-9
        assert (q >= 0).all()


def test_random_predictor_high_alpha_near_uniform():
    pred = RandomPredictor(inv("A", "B", "C"), seed=0, alpha=1e6)
    uniform = 1.0 / 4
    worst = max(
        float(np.abs(random_distribution(pred, i) - uniform).max()) for i in range(100)
    )
    assert worst < 1e-2


def test_random_predictor_monte_carlo_mean():
    size = 5
    pred = RandomPredictor(inv("A", "B", "C", "D"), seed=9, alpha=1.0)
    draws = np.stack([random_distribution(pred, i) for i in range(10_000)])
    mean = draws.mean(axis=0)
    # Dirichlet(1) coordinates have sd sqrt((1/V)(1-1/V)/(V+1)) per draw
    se = np.sqrt((1 / size) * (1 - 1 / size) / (size + 1) / len(draws))
    assert np.abs(mean - 1 / size).max() < 3 * se


def test_random_predictor_context_is_position():
    pred = RandomPredictor(inv("A", "B"), seed=4)
    np.testing.assert_array_equal(pred.distribution([0, 1, 2]), pred.position_distribution(3))


def test_random_predictor_validates_parameters():
    with pytest.raises(SegcueError):
        RandomPredictor(inv("A"), seed=-1)
    with pytest.raises(SegcueError):
        RandomPredictor(inv("A"), seed=0, alpha=0.0)
