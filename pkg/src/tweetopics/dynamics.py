"""Per-time-bucket topic contribution series."""

from dataclasses import dataclass

import numpy as np

__all__ = ["TopicTimeMatrix", "topic_time_matrix", "one_hot_weights"]


@dataclass
class TopicTimeMatrix:
    """Bucket x topic shares; each non-empty bucket row sums to 1."""

    bucket_starts: list
    topics: list
    shares: np.ndarray

    def as_dict(self) -> dict:
        return {
            "buckets": [int(b) for b in self.bucket_starts],
            "topics": [int(t) for t in self.topics],
            "shares": [[float(x) for x in row] for row in self.shares],
        }


def one_hot_weights(doc_ids, labels, n_topics: int) -> dict:
    """Hard cluster labels as weight vectors: all mass on one topic."""
    weights = {}
    for doc_id, label in zip(doc_ids, labels):
        vec = np.zeros(n_topics)
        vec[int(label)] = 1.0
        weights[int(doc_id)] = vec
    return weights


def topic_time_matrix(weights_by_doc: dict, buckets, n_topics: int) -> TopicTimeMatrix:
    """Aggregate per-document topic weights into normalized per-bucket rows.

    Every document in a bucket must have a weight vector (hard one-hot or a
    simplex); a missing one is fatal. Empty buckets produce all-zero rows, so
    the time axis stays continuous.
    """
    shares = np.zeros((len(buckets), n_topics))
    for row, bucket in enumerate(buckets):
        for doc_id in bucket.doc_ids:
            vec = weights_by_doc.get(int(doc_id))
            if vec is None:
                raise ValueError(f"document {doc_id} has no topic weights")
            shares[row] += vec
        total = shares[row].sum()
        if total > 0.0:
            shares[row] /= total
    return TopicTimeMatrix(
        bucket_starts=[b.bucket_start for b in buckets],
        topics=list(range(n_topics)),
        shares=shares,
    )
