import numpy as np
import pytest
from scipy.special import psi

from synth import planted_corpus, planted_supports
from tweetopics import lda
from tweetopics.textprep import BowDoc


def reference_e_step(lam, alpha, bow, max_iter=100, tol=1e-3):
    """Straight per-document fixed-point iteration; independent of the batch path."""
    k, v = lam.shape
    elog_beta = psi(lam) - psi(lam.sum(axis=1))[:, None]
    exp_elog_beta = np.exp(elog_beta)
    ids = np.array(sorted(bow.counts), dtype=int)
    cts = np.array([bow.counts[i] for i in ids], dtype=float)
    gamma = np.ones(k)
    for _ in range(max_iter):
        last = gamma.copy()
        exp_elog_theta = np.exp(psi(gamma) - psi(gamma.sum()))
        if ids.size:
            phinorm = exp_elog_theta @ exp_elog_beta[:, ids] + 1e-100
            gamma = alpha + exp_elog_theta * (exp_elog_beta[:, ids] @ (cts / phinorm))
        else:
            gamma = np.full(k, alpha)
        if np.abs(gamma - last).mean() < tol:
            break
    exp_elog_theta = np.exp(psi(gamma) - psi(gamma.sum()))
    sstats = np.zeros((k, v))
    if ids.size:
        phinorm = exp_elog_theta @ exp_elog_beta[:, ids] + 1e-100
        sstats[:, ids] = np.outer(exp_elog_theta, cts / phinorm) * exp_elog_beta[:, ids]
    return gamma, sstats


class TestLearningRate:
    def test_initial_value(self):
        assert lda.learning_rate(64.0, 0, 0.7) == pytest.approx(64.0 ** -0.7, abs=1e-12)
        assert lda.learning_rate(64.0, 0, 0.7) == pytest.approx(0.0544, abs=1e-4)

    def test_strictly_decreasing(self):
        rhos = [lda.learning_rate(64.0, t, 0.7) for t in range(200)]
        assert all(a > b > 0.0 for a, b in zip(rhos, rhos[1:]))


class TestEStep:
    def test_k1_gamma_alpha_plus_n(self):
        model = lda.LdaModel(1, 6, alpha=0.1, seed=0)
        gamma, sstats = lda.e_step_doc(model, BowDoc(0, {1: 3, 4: 2}, 5))
        assert gamma[0] == pytest.approx(5.1, abs=1e-9)
        assert sstats.sum() == pytest.approx(5.0, abs=1e-6)

    def test_empty_doc_prior_gamma(self):
        model = lda.LdaModel(3, 6, alpha=0.5, seed=0)
        gamma, sstats = lda.e_step_doc(model, BowDoc(0, {}, 0))
        assert gamma.tolist() == [0.5, 0.5, 0.5]
        assert not sstats.any()

    def test_disjoint_supports_fixed_point(self):
        model = lda.LdaModel(2, 2, alpha=0.1, seed=0)
        model.lam = np.array([[10.0, 1e-6], [1e-6, 10.0]])
        model._refresh_cache()
        gamma, _ = lda.e_step_doc(model, BowDoc(0, {0: 2}, 2))
        assert gamma[0] - 0.1 == pytest.approx(2.0, abs=1e-3)
        assert gamma[1] == pytest.approx(0.1, abs=1e-3)

    def test_gamma_at_least_alpha_and_token_mass(self):
        model = lda.LdaModel(4, 30, alpha=0.25, seed=1)
        rng = np.random.default_rng(2)
        bows = []
        for d in range(40):
            ids = rng.choice(30, size=rng.integers(1, 12), replace=False)
            bows.append(BowDoc(d, {int(i): int(rng.integers(1, 4)) for i in ids}, 0))
        result = lda.e_step_batch(model, bows)
        assert (result.gamma >= model.alpha - 1e-12).all()
        total_tokens = sum(sum(b.counts.values()) for b in bows)
        assert result.sstats.sum() == pytest.approx(total_tokens, abs=1e-6)
        assert (result.sstats >= 0).all()

    def test_batch_matches_per_doc_reference(self):
        model = lda.LdaModel(3, 20, alpha=0.3, seed=5)
        rng = np.random.default_rng(11)
        bows = []
        for d in range(17):
            ids = rng.choice(20, size=rng.integers(0, 9), replace=False)
            bows.append(BowDoc(d, {int(i): int(rng.integers(1, 5)) for i in ids}, 0))
        result = lda.e_step_batch(model, bows)
        for d, bow in enumerate(bows):
            ref_gamma, ref_sstats = reference_e_step(model.lam, model.alpha, bow)
            np.testing.assert_allclose(result.gamma[d], ref_gamma, rtol=1e-8, atol=1e-10)
        ref_total = sum(reference_e_step(model.lam, model.alpha, b)[1] for b in bows)
        np.testing.assert_allclose(result.sstats, ref_total, rtol=1e-8, atol=1e-12)


class TestMStep:
    def test_zero_sstats_keeps_positivity(self):
        model = lda.LdaModel(2, 5, seed=0)
        before = model.lam.copy()
        rho = lda.learning_rate(model.tau0, 0, model.kappa)
        lda.m_step_batch(model, np.zeros((2, 5)), 10)
        assert (model.lam > 0).all()
        np.testing.assert_allclose(model.lam, (1 - rho) * before + rho * model.eta)
        assert model.updates_seen == 1

    def test_update_formula(self):
        model = lda.LdaModel(2, 3, alpha=0.5, eta=0.1, tau0=64.0, kappa=0.7,
                             corpus_size=100, seed=3)
        before = model.lam.copy()
        sstats = np.arange(6, dtype=float).reshape(2, 3)
        lda.m_step_batch(model, sstats, 20)
        rho = 64.0 ** -0.7
        expected = (1 - rho) * before + rho * (0.1 + (100 / 20) * sstats)
        np.testing.assert_allclose(model.lam, expected)

    def test_bad_doc_count(self):
        model = lda.LdaModel(2, 3, seed=0)
        with pytest.raises(ValueError):
            lda.m_step_batch(model, np.zeros((2, 3)), 0)


class TestFitStream:
    def batches_of(self, bows, size=256):
        def factory():
            for i in range(0, len(bows), size):
                yield bows[i : i + size]
        return factory

    def test_same_seed_bit_identical(self):
        bows, _ = planted_corpus(3, n_docs=300)
        a = lda.fit_stream(self.batches_of(bows), len(bows), 50, 5, seed=9, passes=2)
        b = lda.fit_stream(self.batches_of(bows), len(bows), 50, 5, seed=9, passes=2)
        assert a.lam.tobytes() == b.lam.tobytes()

    def test_simplex_and_positivity(self):
        bows, _ = planted_corpus(4, n_docs=300)
        model = lda.fit_stream(self.batches_of(bows), len(bows), 50, 5, seed=1)
        assert (model.lam > 0).all()
        rows = model.topic_distributions()
        np.testing.assert_allclose(rows.sum(axis=1), 1.0, atol=1e-9)
        theta = lda.infer_theta(model, bows[0])
        assert theta.sum() == pytest.approx(1.0, abs=1e-9)
        assert (theta > 0).all()

    def test_planted_recovery(self):
        bows, _ = planted_corpus(0)
        model = lda.fit_stream(self.batches_of(bows, 4096), len(bows), 50, 5,
                               passes=3, seed=42)
        learned = [set(t for t, _ in lda.topic_top_terms(model, i, 10)) for i in range(5)]
        supports = planted_supports()
        best = []
        used = set()
        for top in learned:
            overlap, pick = max((len(top & s), i) for i, s in enumerate(supports) if i not in used)
            used.add(pick)
            best.append(overlap / 10)
        assert np.mean(best) >= 0.8

    def test_empty_corpus_fatal(self):
        with pytest.raises(ValueError, match="empty"):
            lda.fit_stream(lambda: iter([]), 0, 10, 2)

    def test_threads_equal_serial(self):
        bows, _ = planted_corpus(5, n_docs=600)
        a = lda.fit_stream(self.batches_of(bows, 300), len(bows), 50, 4, seed=2, threads=1)
        b = lda.fit_stream(self.batches_of(bows, 300), len(bows), 50, 4, seed=2, threads=4)
        assert a.lam.tobytes() == b.lam.tobytes()


class TestTopTerms:
    def make(self, row):
        model = lda.LdaModel(1, len(row), seed=0)
        model.lam = np.array([row], dtype=float)
        model._refresh_cache()
        return model

    def test_ranking_and_probabilities(self):
        model = self.make([1.0, 3.0, 2.0])
        top = lda.topic_top_terms(model, 0, 3)
        assert [t for t, _ in top] == [1, 2, 0]
        assert [p for _, p in top] == pytest.approx([0.5, 1 / 3, 1 / 6])

    def test_tie_breaks_by_id(self):
        model = self.make([2.0, 2.0])
        assert [t for t, _ in lda.topic_top_terms(model, 0, 2)] == [0, 1]

    def test_n_clamped_to_vocab(self):
        model = self.make([1.0, 2.0])
        assert len(lda.topic_top_terms(model, 0, 10)) == 2

    def test_bad_topic_id(self):
        model = self.make([1.0])
        with pytest.raises(ValueError):
            lda.topic_top_terms(model, 1, 1)


class TestInferTheta:
    def test_k1(self):
        model = lda.LdaModel(1, 4, seed=0)
        assert lda.infer_theta(model, BowDoc(0, {0: 2}, 2)).tolist() == [1.0]

    def test_empty_doc_uniform(self):
        model = lda.LdaModel(4, 4, alpha=0.5, seed=0)
        np.testing.assert_allclose(lda.infer_theta(model, BowDoc(0, {}, 0)), 0.25)

    def test_disjoint_doc_concentrates(self):
        model = lda.LdaModel(2, 2, alpha=0.1, seed=0)
        model.lam = np.array([[10.0, 1e-6], [1e-6, 10.0]])
        model._refresh_cache()
        assert lda.infer_theta(model, BowDoc(0, {0: 2}, 2))[0] > 0.9


def test_save_load_roundtrip(tmp_path):
    bows, _ = planted_corpus(7, n_docs=200)
    model = lda.fit_stream(lambda: iter([bows]), len(bows), 50, 3, seed=4)
    path = tmp_path / "model.lda"
    lda.save_model(model, path)
    assert path.with_suffix(".lda.json").exists()
    loaded = lda.load_model(path)
    assert loaded.k == model.k
    assert loaded.vocab_size == model.vocab_size
    assert loaded.alpha == model.alpha
    assert loaded.updates_seen == model.updates_seen
    assert loaded.seed == model.seed
    assert loaded.lam.tobytes() == model.lam.tobytes()
    assert model.state_bytes() == path.stat().st_size


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "bad.lda"
    path.write_bytes(b"not a model")
    with pytest.raises(IOError):
        lda.load_model(path)
