"""Agglomerative merging of topics, dendrogram cuts and 2-D topic maps.

Topics are compared by cosine similarity of their class-based term-weight
vectors; agglomeration is average-linkage on distance = 1 - cosine with a
deterministic tie-break (lowest pair of node ids). Reduced topics recompute
their term weights from re-aggregated counts, never by averaging weight
vectors, so count conservation is exact under any cut.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .ctfidf import ClassTermMatrix, build_representations

logger = logging.getLogger(__name__)

__all__ = [
    "Dendrogram",
    "TopicMap2D",
    "similarity_matrix",
    "build_dendrogram",
    "cut_dendrogram",
    "reduce_topics",
    "intertopic_map",
]


@dataclass
class Dendrogram:
    """Leaves 0..k-1; merge m creates node k+m at its recorded height."""

    n_leaves: int
    merges: list  # (left_node, right_node, height, new_node_id)

    def as_dict(self) -> dict:
        return {
            "n_leaves": self.n_leaves,
            "merges": [[int(a), int(b), float(h), int(n)] for a, b, h, n in self.merges],
        }


@dataclass
class TopicMap2D:
    entries: list = field(default_factory=list)  # dicts: topic_id, x, y, size, label

    def as_dict(self) -> dict:
        return {"entries": self.entries}


def similarity_matrix(representations) -> np.ndarray:
    """k x k cosine similarity of topic weight vectors; symmetric, unit diagonal.

    All-zero vectors (empty topics) get zero similarity everywhere, with a
    warning, and are excluded from the unit-diagonal rule.
    """
    if len(representations) < 2:
        raise ValueError("need at least 2 topics")
    mat = np.vstack([rep.ctfidf_vector for rep in representations])
    norms = np.linalg.norm(mat, axis=1)
    zero = norms == 0.0
    if np.any(zero):
        logger.warning("%d empty topic vector(s); their similarities are set to 0", zero.sum())
    safe = np.where(zero, 1.0, norms)
    unit = mat / safe[:, np.newaxis]
    sim = unit @ unit.T
    sim = (sim + sim.T) / 2.0  # enforce exact symmetry
    np.fill_diagonal(sim, 1.0)
    sim[zero, :] = 0.0
    sim[:, zero] = 0.0
    return sim


def build_dendrogram(similarity: np.ndarray) -> Dendrogram:
    """Average-linkage agglomeration on distance = 1 - cosine.

    At every step the pair with minimal linkage distance merges; ties resolve
    to the lexicographically lowest (id, id) pair over current node ids.
    """
    k = similarity.shape[0]
    if k < 2 or similarity.shape != (k, k):
        raise ValueError("similarity must be a square matrix with k >= 2")
    dist = 1.0 - similarity
    node_ids = list(range(k))
    sizes = {i: 1 for i in range(k)}
    d = {}
    for i in range(k):
        for j in range(i + 1, k):
            d[(i, j)] = dist[i, j]

    merges = []
    next_id = k
    while len(node_ids) > 1:
        best = None
        for a_idx in range(len(node_ids)):
            for b_idx in range(a_idx + 1, len(node_ids)):
                a, b = node_ids[a_idx], node_ids[b_idx]
                key = (a, b) if a < b else (b, a)
                cand = (d[key], key[0], key[1])
                if best is None or cand < best:
                    best = cand
        height, left, right = best
        merges.append((left, right, float(height), next_id))
        # Lance-Williams update for average linkage
        n_l, n_r = sizes[left], sizes[right]
        for other in node_ids:
            if other in (left, right):
                continue
            kl = (left, other) if left < other else (other, left)
            kr = (right, other) if right < other else (other, right)
            merged = (n_l * d[kl] + n_r * d[kr]) / (n_l + n_r)
            d[(other, next_id)] = merged
        node_ids = [n for n in node_ids if n not in (left, right)]
        node_ids.append(next_id)
        sizes[next_id] = n_l + n_r
        next_id += 1
    return Dendrogram(n_leaves=k, merges=merges)


def cut_dendrogram(dendrogram: Dendrogram, target: int) -> list:
    """Group leaves into `target` clusters by applying the first k - target merges.

    Returns a list of leaf-id groups, ordered by each group's smallest leaf.
    """
    k = dendrogram.n_leaves
    if not (1 <= target <= k):
        raise ValueError(f"target must lie in [1, {k}]")
    members = {i: [i] for i in range(k)}
    for left, right, _, new_id in dendrogram.merges[: k - target]:
        members[new_id] = members.pop(left) + members.pop(right)
    groups = [sorted(g) for g in members.values()]
    groups.sort(key=lambda g: g[0])
    return groups


def reduce_topics(labels, matrix: ClassTermMatrix, dendrogram: Dendrogram,
                  target: int, top_n: int = 10):
    """Cut the dendrogram, relabel documents, and rebuild representations.

    Document and per-term counts are conserved exactly: the reduced class-term
    matrix is the group-wise row sum of the original counts.
    """
    groups = cut_dendrogram(dendrogram, target)
    old_to_new = {}
    for new_label, group in enumerate(groups):
        for old_label in group:
            old_to_new[old_label] = new_label
    new_labels = [old_to_new[int(l)] for l in labels]
    new_counts = np.zeros((target, matrix.vocab_size), dtype=matrix.counts.dtype)
    new_sizes = np.zeros(target, dtype=matrix.class_sizes.dtype)
    for new_label, group in enumerate(groups):
        new_counts[new_label] = matrix.counts[group].sum(axis=0)
        new_sizes[new_label] = matrix.class_sizes[group].sum()
    new_matrix = ClassTermMatrix(counts=new_counts, class_sizes=new_sizes)
    return new_labels, new_matrix, build_representations(new_matrix, top_n=top_n), groups


def intertopic_map(representations, terms=None) -> TopicMap2D:
    """2-D PCA projection of topic weight vectors.

    Marker size is the topic's document count; the label joins its top three
    terms. Coordinate variance is non-increasing across the two axes.
    """
    if len(representations) < 2:
        raise ValueError("need at least 2 topics for a map")
    mat = np.vstack([rep.ctfidf_vector for rep in representations])
    centered = mat - mat.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    coords = centered @ vt[:2].T
    if coords.shape[1] < 2:
        coords = np.hstack([coords, np.zeros((coords.shape[0], 2 - coords.shape[1]))])
    entries = []
    for rep, (x, y) in zip(representations, coords):
        ids = [tid for tid, _ in rep.terms[:3]]
        if terms is not None:
            label = ", ".join(terms[tid] for tid in ids)
        else:
            label = ", ".join(str(tid) for tid in ids)
        entries.append(
            {
                "topic_id": rep.topic_id,
                "x": float(x),
                "y": float(y),
                "size": rep.size,
                "label": label,
            }
        )
    return TopicMap2D(entries=entries)
