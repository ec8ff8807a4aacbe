"""Streaming dimensionality reduction and clustering over embedding vectors.

Incremental PCA uses the mean-corrected incremental SVD recurrence: each batch
is centered, a mean-correction row is appended, the stack of (scaled old
components, new rows) is decomposed again, and the top components are kept.
Mini-batch k-means seeds with k-means++ on the first batch and then applies
the standard per-point update c <- c + (x - c) / count.

Both updates are single-writer; batch layouts never depend on worker counts,
so repeated runs with the same seed are bit-identical.
"""

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import embedstore

__all__ = [
    "PcaState",
    "KMeansState",
    "pca_partial_fit",
    "pca_transform",
    "kmeans_partial_fit",
    "kmeans_assign",
    "fit_pipeline",
    "write_labels",
    "read_labels",
]

_LABEL_REC = struct.Struct("<QI")


@dataclass
class PcaState:
    """Running mean plus an orthonormal basis of the leading subspace."""

    n_components: int
    mean: np.ndarray | None = None
    components: np.ndarray | None = None  # rows orthonormal
    singular_values: np.ndarray | None = None  # non-increasing
    n_seen: int = 0

    @property
    def fitted(self) -> bool:
        return self.n_seen >= self.n_components and self.components is not None


@dataclass
class KMeansState:
    k: int
    seed: int
    centroids: np.ndarray | None = None
    per_centroid_counts: np.ndarray | None = None
    rng: np.random.Generator = field(default=None, repr=False)

    @property
    def initialized(self) -> bool:
        return self.centroids is not None


def _fix_signs(components):
    # SVD sign ambiguity: make the largest-magnitude entry of each row positive
    for row in components:
        j = np.argmax(np.abs(row))
        if row[j] < 0:
            row *= -1.0
    return components


def pca_partial_fit(state: PcaState, batch) -> PcaState:
    """Fold one batch of rows into the running PCA state."""
    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim != 2 or batch.shape[0] < 1:
        raise ValueError("batch must be a non-empty 2-D array")
    if state.mean is not None and batch.shape[1] != state.mean.shape[0]:
        raise ValueError(
            f"dimension mismatch: batch has {batch.shape[1]}, state has {state.mean.shape[0]}"
        )
    n = batch.shape[0]
    batch_mean = batch.mean(axis=0)
    if state.n_seen == 0:
        stack = batch - batch_mean
        new_mean = batch_mean
    else:
        m = state.n_seen
        correction = np.sqrt(m * n / (m + n)) * (state.mean - batch_mean)
        stack = np.vstack(
            [
                state.singular_values[:, np.newaxis] * state.components,
                batch - batch_mean,
                correction[np.newaxis, :],
            ]
        )
        new_mean = (m * state.mean + n * batch_mean) / (m + n)
    _, s, vt = np.linalg.svd(stack, full_matrices=False)
    r = min(state.n_components, vt.shape[0])
    state.components = _fix_signs(vt[:r].copy())
    state.singular_values = s[:r].copy()
    state.mean = new_mean
    state.n_seen += n
    return state


def pca_transform(state: PcaState, batch) -> np.ndarray:
    """(x - mean) projected onto the component rows."""
    if not state.fitted:
        raise ValueError("PCA state is unfitted (n_seen < n_components)")
    batch = np.asarray(batch, dtype=np.float64)
    return (batch - state.mean) @ state.components.T


def _kmeans_plusplus(points, k, rng):
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    first = int(rng.integers(n))
    centroids[0] = points[first]
    d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            choice = int(rng.integers(n))  # all remaining points coincide
        else:
            choice = int(rng.choice(n, p=d2 / total))
        centroids[i] = points[choice]
        d2 = np.minimum(d2, ((points - centroids[i]) ** 2).sum(axis=1))
    return centroids


def kmeans_partial_fit(state: KMeansState, batch) -> KMeansState:
    """Mini-batch k-means update; first call seeds centroids with k-means++."""
    batch = np.asarray(batch, dtype=np.float64)
    if not state.initialized:
        if batch.shape[0] < state.k:
            raise ValueError("first batch must seed k centroids")
        rng = np.random.default_rng(state.seed)
        state.centroids = _kmeans_plusplus(batch, state.k, rng)
        state.per_centroid_counts = np.zeros(state.k, dtype=np.int64)
        state.rng = rng
    labels = kmeans_assign(state, batch)
    # per-point sequential update in row order
    for x, c in zip(batch, labels):
        state.per_centroid_counts[c] += 1
        state.centroids[c] += (x - state.centroids[c]) / state.per_centroid_counts[c]
    return state


def kmeans_assign(state: KMeansState, batch) -> np.ndarray:
    """Nearest-centroid labels; ties go to the lowest centroid id."""
    if not state.initialized:
        raise ValueError("k-means state is uninitialized")
    batch = np.asarray(batch, dtype=np.float64)
    # ||x - c||^2 expanded; argmin picks the first (lowest id) on ties
    d2 = (
        (batch * batch).sum(axis=1)[:, np.newaxis]
        - 2.0 * batch @ state.centroids.T
        + (state.centroids * state.centroids).sum(axis=1)[np.newaxis, :]
    )
    return np.argmin(d2, axis=1)


def inertia(state: KMeansState, points) -> float:
    points = np.asarray(points, dtype=np.float64)
    labels = kmeans_assign(state, points)
    return float(((points - state.centroids[labels]) ** 2).sum())


def _l2_normalize(batch):
    norms = np.linalg.norm(batch, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return batch / norms


def fit_pipeline(embedding_path, n_components: int, k: int, seed: int,
                 corpus_ids=None, batch_size: int = 4096, normalize: bool = False):
    """Streaming PCA + k-means over an embedding file.

    Three streaming passes: fit PCA, fit k-means on the reduced vectors, then
    assign every document a label with the final centroids. When corpus ids
    are supplied the embedding file must contain exactly that id set; a
    misordered-but-complete file is consumed through an id-keyed offset index
    so labels come out in corpus order.

    Returns (PcaState, KMeansState, doc_ids, labels).
    """
    embedding_path = Path(embedding_path)
    header, _ = embedstore.read_embeddings(embedding_path)
    if corpus_ids is not None:
        corpus_ids = [int(i) for i in corpus_ids]
        report = embedstore.validate_alignment(corpus_ids, embedding_path)
        if not report.aligned:
            raise ValueError(
                "embeddings misaligned with corpus: "
                f"{report.missing_from_embeddings} corpus ids missing from embeddings, "
                f"{report.missing_from_corpus} embedding ids missing from corpus"
            )
        joined = not report.ordered
    else:
        joined = False

    def batches():
        if joined:
            yield from embedstore.read_by_ids(embedding_path, corpus_ids, batch_size)
        else:
            hdr, records = embedstore.read_embeddings(embedding_path)
            ids, rows = [], []
            for tweet_id, vec in records:
                ids.append(tweet_id)
                rows.append(vec)
                if len(rows) == batch_size:
                    yield np.asarray(ids, dtype=np.uint64), np.asarray(rows, dtype=np.float64)
                    ids, rows = [], []
            if rows:
                yield np.asarray(ids, dtype=np.uint64), np.asarray(rows, dtype=np.float64)

    pca = PcaState(n_components=n_components)
    for _, mat in batches():
        if normalize:
            mat = _l2_normalize(mat)
        pca_partial_fit(pca, mat)
    if not pca.fitted:
        raise ValueError("not enough embedding rows to fit the reduction")

    km = KMeansState(k=k, seed=seed)
    for _, mat in batches():
        if normalize:
            mat = _l2_normalize(mat)
        kmeans_partial_fit(km, pca_transform(pca, mat))

    id_chunks, label_chunks = [], []
    for ids, mat in batches():
        if normalize:
            mat = _l2_normalize(mat)
        got = kmeans_assign(km, pca_transform(pca, mat))
        id_chunks.append(np.asarray(ids, dtype=np.uint64))
        label_chunks.append(got.astype(np.uint32))
    doc_ids = np.concatenate(id_chunks) if id_chunks else np.empty(0, dtype=np.uint64)
    labels = np.concatenate(label_chunks) if label_chunks else np.empty(0, dtype=np.uint32)
    return pca, km, doc_ids, labels


def write_labels(doc_ids, labels, path) -> None:
    """Labels table: (doc_id u64, label u32) pairs plus a JSON summary."""
    path = Path(path)
    doc_ids = list(doc_ids)
    labels = list(labels)
    if len(doc_ids) != len(labels):
        raise ValueError("doc_ids and labels differ in length")
    with open(path, "wb") as f:
        for doc_id, label in zip(doc_ids, labels):
            f.write(_LABEL_REC.pack(int(doc_id), int(label)))
    counts = {}
    for label in labels:
        counts[int(label)] = counts.get(int(label), 0) + 1
    summary = {
        "schema_version": 1,
        "count": len(labels),
        "distinct_labels": len(counts),
        "label_counts": {str(k): v for k, v in sorted(counts.items())},
    }
    with open(path.with_suffix(path.suffix + ".json"), "w", encoding="utf-8") as f:
        json.dump(summary, f, sort_keys=True, indent=2)
        f.write("\n")


def read_labels(path):
    """Read a labels table back as (doc_ids, labels) lists in file order."""
    path = Path(path)
    doc_ids, labels = [], []
    with open(path, "rb") as f:
        while True:
            raw = f.read(_LABEL_REC.size)
            if not raw:
                break
            if len(raw) < _LABEL_REC.size:
                raise IOError(f"truncated labels table: {path}")
            doc_id, label = _LABEL_REC.unpack(raw)
            doc_ids.append(doc_id)
            labels.append(label)
    return doc_ids, labels
