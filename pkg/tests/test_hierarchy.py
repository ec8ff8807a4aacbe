import itertools

import numpy as np
import pytest

from tweetopics.ctfidf import ClassTermMatrix, build_representations
from tweetopics.hierarchy import (
    Dendrogram,
    build_dendrogram,
    cut_dendrogram,
    intertopic_map,
    reduce_topics,
    similarity_matrix,
)


def reps_from_counts(counts, sizes=None):
    counts = np.asarray(counts)
    if sizes is None:
        sizes = np.ones(counts.shape[0], dtype=int)
    return build_representations(ClassTermMatrix(counts, np.asarray(sizes)))


def brute_average_linkage(dist):
    """Direct mean-over-leaf-pairs agglomeration; oracle for the Lance-Williams path."""
    k = dist.shape[0]
    clusters = {i: [i] for i in range(k)}
    merges = []
    next_id = k
    while len(clusters) > 1:
        best = None
        for a, b in itertools.combinations(sorted(clusters), 2):
            d = np.mean([dist[i, j] for i in clusters[a] for j in clusters[b]])
            cand = (d, a, b)
            if best is None or cand < best:
                best = cand
        d, a, b = best
        merges.append((a, b, d, next_id))
        clusters[next_id] = clusters.pop(a) + clusters.pop(b)
        next_id += 1
    return merges


class TestSimilarity:
    def test_identical_vectors(self):
        reps = reps_from_counts([[2, 0], [2, 0]])
        sim = similarity_matrix(reps)
        assert sim[0, 1] == pytest.approx(1.0, abs=1e-9)

    def test_orthogonal_vectors(self):
        reps = reps_from_counts([[2, 0], [0, 2]])
        sim = similarity_matrix(reps)
        assert sim[0, 1] == 0.0

    def test_symmetry_and_diagonal_oracle(self):
        rng = np.random.default_rng(0)
        reps = reps_from_counts(rng.integers(1, 9, size=(6, 10)))
        sim = similarity_matrix(reps)
        vectors = np.vstack([r.ctfidf_vector for r in reps])
        for i in range(6):
            for j in range(6):
                direct = float(
                    vectors[i] @ vectors[j]
                    / (np.linalg.norm(vectors[i]) * np.linalg.norm(vectors[j]))
                )
                assert sim[i, j] == pytest.approx(direct, abs=1e-9)
                assert sim[i, j] == sim[j, i]
        np.testing.assert_allclose(np.diag(sim), 1.0, atol=1e-9)

    def test_zero_vector_warning(self, caplog):
        reps = reps_from_counts([[2, 1], [0, 0], [1, 2]], sizes=[1, 0, 1])
        with caplog.at_level("WARNING"):
            sim = similarity_matrix(reps)
        assert "empty topic" in caplog.text
        assert not sim[1].any() and not sim[:, 1].any()

    def test_needs_two(self):
        with pytest.raises(ValueError):
            similarity_matrix(reps_from_counts([[1, 1]]))


class TestDendrogram:
    def test_identical_pair_merges_first_at_zero(self):
        reps = reps_from_counts([[3, 0, 1], [0, 5, 1], [3, 0, 1]])
        dendro = build_dendrogram(similarity_matrix(reps))
        left, right, height, new_id = dendro.merges[0]
        assert (left, right) == (0, 2)
        assert height == pytest.approx(0.0, abs=1e-9)
        assert new_id == 3

    def test_k_minus_one_merges_and_monotone(self):
        rng = np.random.default_rng(1)
        for trial in range(20):
            k = int(rng.integers(2, 9))
            reps = reps_from_counts(rng.integers(0, 7, size=(k, 12)) + (rng.random((k, 12)) < 0.5))
            sim = similarity_matrix(reps)
            dendro = build_dendrogram(sim)
            assert len(dendro.merges) == k - 1
            heights = [m[2] for m in dendro.merges]
            assert all(a <= b + 1e-9 for a, b in zip(heights, heights[1:]))

    def test_matches_brute_force(self):
        rng = np.random.default_rng(2)
        for trial in range(25):
            k = int(rng.integers(2, 7))
            vectors = rng.random((k, 5))
            sim = np.eye(k)
            for i in range(k):
                for j in range(i + 1, k):
                    c = vectors[i] @ vectors[j] / (
                        np.linalg.norm(vectors[i]) * np.linalg.norm(vectors[j])
                    )
                    sim[i, j] = sim[j, i] = c
            got = build_dendrogram(sim).merges
            want = brute_average_linkage(1.0 - sim)
            for (gl, gr, gh, gn), (wl, wr, wh, wn) in zip(got, want):
                assert (gl, gr, gn) == (wl, wr, wn)
                assert gh == pytest.approx(wh, abs=1e-9)

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        reps = reps_from_counts(rng.integers(1, 6, size=(7, 9)))
        sim = similarity_matrix(reps)
        assert build_dendrogram(sim).merges == build_dendrogram(sim).merges


class TestReduce:
    def counts_labels(self, seed, k=6, v=10, docs=40):
        rng = np.random.default_rng(seed)
        labels = rng.integers(0, k, size=docs).tolist()
        counts = np.zeros((k, v), dtype=np.int64)
        sizes = np.zeros(k, dtype=np.int64)
        for label in labels:
            row = rng.integers(0, 4, size=v)
            counts[label] += row
            sizes[label] += 1
        return ClassTermMatrix(counts, sizes), labels

    def test_identity_cut(self):
        matrix, labels = self.counts_labels(0)
        reps = build_representations(matrix)
        dendro = build_dendrogram(similarity_matrix(reps))
        new_labels, new_matrix, new_reps, groups = reduce_topics(labels, matrix, dendro, 6)
        assert new_labels == labels
        assert np.array_equal(new_matrix.counts, matrix.counts)
        for old, new in zip(reps, new_reps):
            assert old.terms == new.terms

    def test_single_topic_conserves_totals(self):
        matrix, labels = self.counts_labels(1)
        dendro = build_dendrogram(similarity_matrix(build_representations(matrix)))
        new_labels, new_matrix, _, _ = reduce_topics(labels, matrix, dendro, 1)
        assert set(new_labels) == {0}
        assert np.array_equal(new_matrix.counts[0], matrix.counts.sum(axis=0))
        assert new_matrix.class_sizes[0] == matrix.class_sizes.sum()

    def test_conservation_all_targets(self):
        for seed in range(6):
            matrix, labels = self.counts_labels(seed, k=int(np.random.default_rng(seed).integers(2, 13)))
            k = matrix.k
            dendro = build_dendrogram(similarity_matrix(build_representations(matrix)))
            for target in range(1, k + 1):
                new_labels, new_matrix, _, groups = reduce_topics(labels, matrix, dendro, target)
                assert new_matrix.counts.sum(axis=0).tolist() == matrix.counts.sum(axis=0).tolist()
                assert new_matrix.class_sizes.sum() == matrix.class_sizes.sum()
                assert len(groups) == target
                assert len(new_labels) == len(labels)

    def test_target_out_of_range(self):
        matrix, labels = self.counts_labels(2)
        dendro = build_dendrogram(similarity_matrix(build_representations(matrix)))
        with pytest.raises(ValueError):
            cut_dendrogram(dendro, 7)
        with pytest.raises(ValueError):
            reduce_topics(labels, matrix, dendro, 0)


class TestMap:
    def test_identical_topics_identical_coords(self):
        reps = reps_from_counts([[4, 0, 1], [4, 0, 1], [0, 6, 2]])
        topic_map = intertopic_map(reps)
        a, b = topic_map.entries[0], topic_map.entries[1]
        assert (a["x"], a["y"]) == pytest.approx((b["x"], b["y"]), abs=1e-9)

    def test_axis_variance_ordering_and_count(self):
        rng = np.random.default_rng(4)
        reps = reps_from_counts(rng.integers(0, 9, size=(8, 15)))
        topic_map = intertopic_map(reps)
        assert len(topic_map.entries) == 8
        xs = np.array([e["x"] for e in topic_map.entries])
        ys = np.array([e["y"] for e in topic_map.entries])
        assert xs.var() >= ys.var() - 1e-12
        assert all(np.isfinite([e["x"], e["y"]]).all() for e in topic_map.entries)

    def test_labels_join_top_terms(self):
        reps = reps_from_counts([[5, 1, 0], [0, 1, 5]])
        topic_map = intertopic_map(reps, terms=["alpha", "beta", "gamma"])
        assert topic_map.entries[0]["label"].startswith("alpha")

    def test_needs_two(self):
        with pytest.raises(ValueError):
            intertopic_map(reps_from_counts([[1, 2]]))


def test_dendrogram_serialization():
    dendro = Dendrogram(n_leaves=3, merges=[(0, 2, 0.25, 3), (1, 3, 0.5, 4)])
    payload = dendro.as_dict()
    assert payload["n_leaves"] == 3
    assert payload["merges"] == [[0, 2, 0.25, 3], [1, 3, 0.5, 4]]
