import numpy as np
import pytest

from tweetopics.corpus import TimeBucket
from tweetopics.dynamics import one_hot_weights, topic_time_matrix


def bucket(start, ids):
    return TimeBucket(granularity="month", bucket_start=start, doc_ids=list(ids))


class TestTopicTimeMatrix:
    def test_single_bucket_row_simplex(self):
        weights = {1: np.array([0.2, 0.8]), 2: np.array([0.5, 0.5])}
        matrix = topic_time_matrix(weights, [bucket(0, [1, 2])], 2)
        assert matrix.shares[0].sum() == pytest.approx(1.0, abs=1e-9)

    def test_hard_label_counting(self):
        weights = one_hot_weights([1, 2, 3], [0, 0, 1], 3)
        matrix = topic_time_matrix(weights, [bucket(0, [1, 2, 3])], 3)
        np.testing.assert_allclose(matrix.shares[0], [2 / 3, 1 / 3, 0.0])

    def test_empty_bucket_zero_row(self):
        weights = one_hot_weights([1], [0], 2)
        matrix = topic_time_matrix(weights, [bucket(0, [1]), bucket(100, [])], 2)
        assert matrix.shares[1].tolist() == [0.0, 0.0]
        assert matrix.shares[0].sum() == pytest.approx(1.0, abs=1e-9)

    def test_permutation_invariant_within_bucket(self):
        rng = np.random.default_rng(0)
        ids = list(range(1, 21))
        weights = {i: rng.dirichlet([1.0, 1.0, 1.0]) for i in ids}
        a = topic_time_matrix(weights, [bucket(0, ids)], 3)
        b = topic_time_matrix(weights, [bucket(0, list(reversed(ids)))], 3)
        np.testing.assert_allclose(a.shares, b.shares, atol=1e-12)

    def test_missing_weights_fatal_with_id(self):
        with pytest.raises(ValueError, match="77"):
            topic_time_matrix({}, [bucket(0, [77])], 2)

    def test_stationary_generator_low_drift(self):
        # iid labels per month from a fixed distribution: shares stay flat
        rng = np.random.default_rng(1)
        p = np.array([0.4, 0.3, 0.2, 0.1])
        buckets, weights = [], {}
        doc_id = 1
        for month in range(12):
            ids = []
            for _ in range(200):
                label = int(rng.choice(4, p=p))
                weights.update(one_hot_weights([doc_id], [label], 4))
                ids.append(doc_id)
                doc_id += 1
            buckets.append(bucket(month * 2_592_000, ids))
        matrix = topic_time_matrix(weights, buckets, 4)
        drift = matrix.shares.std(axis=0)
        assert (drift <= 0.05).all()

    def test_as_dict_schema_shape(self):
        weights = one_hot_weights([1], [0], 2)
        payload = topic_time_matrix(weights, [bucket(0, [1])], 2).as_dict()
        assert set(payload) == {"buckets", "topics", "shares"}
        assert payload["topics"] == [0, 1]
