import numpy as np
import pytest

from omnirank.errors import DataError
from omnirank.lda import (
    lda_fit,
    lda_infer,
    load_lda,
    perplexity,
    save_lda,
    top_words,
)
from omnirank.seeding import derive_rng


def cosine(a, b):
    return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))


def match_topics(truth, recovered):
    """Greedy best-cosine matching; returns one cosine per true topic."""
    used = set()
    out = []
    for k in range(truth.shape[0]):
        best_c, best_j = -1.0, None
        for j in range(recovered.shape[0]):
            if j in used:
                continue
            c = cosine(truth[k], recovered[j])
            if c > best_c:
                best_c, best_j = c, j
        used.add(best_j)
        out.append(best_c)
    return out


class TestFit:
    def test_k1_closed_form(self):
        # single topic absorbs everything: phi(w) = (count(w)+eta)/(N+V*eta)
        docs = [["a", "b", "a"], ["b", "c"]]
        model = lda_fit(docs, k=1, eta=0.01, iters=5, seed=0)
        phi = model.topic_word_dist()[0]
        n, v = 5, 3
        expected = {
            "a": (2 + 0.01) / (n + v * 0.01),
            "b": (2 + 0.01) / (n + v * 0.01),
            "c": (1 + 0.01) / (n + v * 0.01),
        }
        for token, p in zip(model.vocab, phi):
            assert p == pytest.approx(expected[token], abs=1e-12)

    def test_deterministic_given_seed(self):
        docs = [["a", "b"], ["b", "c"], ["c", "a"]] * 5
        m1 = lda_fit(docs, k=2, iters=20, seed=9)
        m2 = lda_fit(docs, k=2, iters=20, seed=9)
        assert np.array_equal(m1.topic_word, m2.topic_word)

    def test_disjoint_planted_topics_recovered(self):
        # two topics over disjoint vocab halves; 200 docs
        rng = derive_rng(17, "disjoint")
        vocab_a = [f"a{i}" for i in range(20)]
        vocab_b = [f"b{i}" for i in range(20)]
        truth = np.zeros((2, 40))
        truth[0, :20] = rng.dirichlet(np.full(20, 2.0))
        truth[1, 20:] = rng.dirichlet(np.full(20, 2.0))
        vocab = vocab_a + vocab_b
        docs = []
        for i in range(200):
            topic = i % 2
            ids = rng.choice(40, size=15, p=truth[topic])
            docs.append([vocab[j] for j in ids])
        model = lda_fit(docs, k=2, iters=150, seed=3)
        phi = model.topic_word_dist()
        truth_cols = [vocab.index(t) for t in model.vocab]
        cosines = match_topics(truth[:, truth_cols], phi)
        assert min(cosines) >= 0.95

    def test_errors(self):
        with pytest.raises(DataError):
            lda_fit([], k=2)
        with pytest.raises(DataError):
            lda_fit([["a", "b"]], k=3)  # more topics than tokens
        with pytest.raises(DataError):
            lda_fit([["a"]], k=0)

    def test_document_order_shuffle_similar_perplexity(self):
        rng = derive_rng(5, "shuffle")
        vocab = [f"w{i}" for i in range(30)]
        docs = [list(rng.choice(vocab, size=10)) for _ in range(60)]
        m1 = lda_fit(docs, k=3, iters=80, seed=4)
        shuffled = list(docs)
        rng.shuffle(shuffled)
        m2 = lda_fit(shuffled, k=3, iters=80, seed=4)
        p1 = perplexity(m1, docs[:20], infer_iters=20, seed=0)
        p2 = perplexity(m2, docs[:20], infer_iters=20, seed=0)
        assert abs(p1 - p2) / p1 < 0.05


class TestInfer:
    def test_k1_returns_one(self):
        model = lda_fit([["a", "b"]], k=1, iters=5, seed=0)
        props = lda_infer(model, ["a"], iters=5, seed=0)
        assert props.tolist() == [1.0]

    def test_out_of_vocab_uniform(self):
        docs = [["a", "b"], ["c", "d"], ["e", "f"], ["g", "h"], ["i", "j"]]
        model = lda_fit(docs, k=5, iters=10, seed=0)
        props = lda_infer(model, ["zzz", "qqq"], iters=10, seed=0)
        assert props.tolist() == [0.2] * 5

    def test_sums_to_one(self):
        rng = derive_rng(2, "infer")
        vocab = [f"w{i}" for i in range(20)]
        docs = [list(rng.choice(vocab, size=8)) for _ in range(30)]
        model = lda_fit(docs, k=4, iters=30, seed=1)
        for i in range(10):
            props = lda_infer(model, docs[i], iters=15, seed=i)
            assert props.sum() == pytest.approx(1.0, abs=1e-9)
            assert (props >= 0).all()

    def test_planted_doc_assigns_mass_to_right_topic(self):
        rng = derive_rng(21, "pure")
        vocab_a = [f"a{i}" for i in range(15)]
        vocab_b = [f"b{i}" for i in range(15)]
        docs = [list(rng.choice(vocab_a, size=12)) for _ in range(80)]
        docs += [list(rng.choice(vocab_b, size=12)) for _ in range(80)]
        model = lda_fit(docs, k=2, iters=100, seed=6)
        pure = list(rng.choice(vocab_a, size=12))
        props = lda_infer(model, pure, iters=40, seed=0)
        assert props.max() >= 0.8


class TestTopWords:
    def test_empty_for_zero(self):
        model = lda_fit([["a", "b"]], k=1, iters=2, seed=0)
        assert top_words(model, 0, 0) == []

    def test_higher_count_wins(self):
        # corpus {a:5, b:3}: "a" must be the single top word
        docs = [["a"] * 5 + ["b"] * 3]
        model = lda_fit(docs, k=1, iters=2, seed=0)
        assert top_words(model, 0, 1) == ["a"]

    def test_ties_break_by_token(self):
        docs = [["b", "a", "d", "c"]]
        model = lda_fit(docs, k=1, iters=2, seed=0)
        assert top_words(model, 0, 4) == ["a", "b", "c", "d"]

    def test_n_larger_than_vocab(self):
        model = lda_fit([["a", "b"]], k=1, iters=2, seed=0)
        assert len(top_words(model, 0, 10)) == 2

    def test_bad_topic_index(self):
        model = lda_fit([["a", "b"]], k=1, iters=2, seed=0)
        with pytest.raises(DataError):
            top_words(model, 1, 3)


def test_model_roundtrip(tmp_path):
    docs = [["a", "b"], ["b", "c"]]
    model = lda_fit(docs, k=2, iters=10, seed=0)
    path = str(tmp_path / "lda.json")
    save_lda(path, model)
    loaded = load_lda(path)
    assert loaded.k == model.k
    assert loaded.vocab == model.vocab
    assert np.array_equal(loaded.topic_word, model.topic_word)
    doc = ["a", "c"]
    assert np.allclose(lda_infer(loaded, doc, seed=1), lda_infer(model, doc, seed=1))
