"""Class-based TF-IDF topic representations from cluster labels.

Weight of term t in class c:

    W[t, c] = (count[t, c] / sum_t' count[t', c]) * ln(1 + A / f_t)

with f_t the corpus-wide count of t and A the mean tokens per class
(total count / number of classes). The dampening ratio A / f_t is evaluated
as one division of exact integer products, so scaling every count by the same
positive integer leaves all weights bit-identical.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ClassTermMatrix",
    "TopicRepresentation",
    "class_term_counts",
    "ctfidf",
    "build_representations",
    "top_terms",
]


@dataclass
class ClassTermMatrix:
    """Per-class aggregated term counts. Column sums equal corpus-wide term counts."""

    counts: np.ndarray  # k x V, non-negative integers
    class_sizes: np.ndarray  # docs per class

    @property
    def k(self) -> int:
        return self.counts.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.counts.shape[1]


@dataclass
class TopicRepresentation:
    topic_id: int
    size: int  # document count
    terms: list  # (term_id, weight), weight descending, ties by term id
    ctfidf_vector: np.ndarray = field(repr=False, default=None)


def class_term_counts(bow_stream, labels_by_doc: dict, k: int, vocab_size: int) -> ClassTermMatrix:
    """Aggregate BowDoc counts per class label in one streaming pass."""
    counts = np.zeros((k, vocab_size), dtype=np.int64)
    sizes = np.zeros(k, dtype=np.int64)
    for bow in bow_stream:
        label = labels_by_doc.get(bow.doc_id)
        if label is None:
            raise ValueError(f"document {bow.doc_id} has no cluster label")
        sizes[label] += 1
        for term_id, n in bow.counts.items():
            counts[label, term_id] += n
    return ClassTermMatrix(counts=counts, class_sizes=sizes)


def ctfidf(matrix: ClassTermMatrix) -> np.ndarray:
    """Per-class weight vectors (k x V). Empty classes get zero rows."""
    counts = matrix.counts
    total = int(counts.sum())
    if total == 0:
        raise ValueError("class-term matrix is all zero")
    k = matrix.k
    f_t = counts.sum(axis=0)  # corpus-wide term counts
    class_sums = counts.sum(axis=1)

    # ln(1 + A / f_t) with A = total / k, computed as total / (k * f_t) in one
    # division so that a common scale factor cancels exactly
    idf = np.zeros(matrix.vocab_size, dtype=np.float64)
    present = f_t > 0
    idf[present] = np.log1p(total / (k * f_t[present]))

    weights = np.zeros_like(counts, dtype=np.float64)
    nonempty = class_sums > 0
    weights[nonempty] = counts[nonempty] / class_sums[nonempty, np.newaxis]
    weights *= idf[np.newaxis, :]
    return weights


def build_representations(matrix: ClassTermMatrix, top_n: int = 10) -> list:
    """TopicRepresentations for every class, ranked terms included."""
    weights = ctfidf(matrix)
    reps = []
    for topic_id in range(matrix.k):
        vec = weights[topic_id]
        reps.append(
            TopicRepresentation(
                topic_id=topic_id,
                size=int(matrix.class_sizes[topic_id]),
                terms=_ranked_terms(vec, top_n),
                ctfidf_vector=vec,
            )
        )
    return reps


def _ranked_terms(vec: np.ndarray, n: int) -> list:
    nonzero = np.flatnonzero(vec)
    order = nonzero[np.lexsort((nonzero, -vec[nonzero]))]
    return [(int(i), float(vec[i])) for i in order[:n]]


def top_terms(representation: TopicRepresentation, n: int) -> list:
    """First n ranked terms; only terms with nonzero weight are reported."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if representation.ctfidf_vector is not None:
        return _ranked_terms(representation.ctfidf_vector, n)
    return representation.terms[:n]
