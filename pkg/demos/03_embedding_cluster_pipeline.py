"""The embedding-cluster track: binary vector file -> incremental PCA ->
mini-batch k-means -> c-TF-IDF topic keywords.

Embeddings normally come from the companion `embed` tool; here we synthesize
three well-separated Gaussian blobs so cluster quality is visible at a glance.

Run:  python demos/03_embedding_cluster_pipeline.py
"""

from pathlib import Path

import numpy as np

from tweetopics import cluster, ctfidf, embedstore
from tweetopics.textprep import BowDoc

out = Path("demo_out/cluster")
out.mkdir(parents=True, exist_ok=True)
rng = np.random.default_rng(1)

# three blobs in 16-d, 300 points each, written in the FSEM binary format
centers = np.zeros((3, 16))
centers[1, 0] = 5.0
centers[2, 1] = 5.0
points = np.vstack([rng.normal(c, 0.1, size=(300, 16)) for c in centers])
true_labels = np.repeat([0, 1, 2], 300)
perm = rng.permutation(900)
points, true_labels = points[perm], true_labels[perm]
ids = np.arange(1, 901)

emb_path = out / "blobs.fsem"
n_bytes = embedstore.write_embeddings(
    ((int(i), v.astype(np.float32)) for i, v in zip(ids, points)), 16, emb_path)
print(f"wrote {n_bytes} bytes of embeddings to {emb_path}")

header, _ = embedstore.read_embeddings(emb_path)
print(f"header: dim={header.dim} count={header.count}")

pca, km, doc_ids, labels = cluster.fit_pipeline(
    emb_path, n_components=5, k=3, seed=7, corpus_ids=ids.tolist(), batch_size=300)
print(f"\nPCA: {pca.n_seen} rows seen, leading singular values "
      f"{np.round(pca.singular_values[:3], 1)}")
print(f"k-means counts per centroid: {km.per_centroid_counts.tolist()}")

# purity against the generator's labels
true_by_id = dict(zip(ids.tolist(), true_labels.tolist()))
agree = 0
for c in range(3):
    members = [true_by_id[int(d)] for d, l in zip(doc_ids, labels) if l == c]
    agree += max(members.count(t) for t in range(3)) if members else 0
print(f"label purity vs generator: {agree / len(doc_ids):.3f}")

cluster.write_labels(doc_ids, labels, out / "labels.bin")

# c-TF-IDF keywords: fake a tiny bag-of-words per doc so each blob talks
# about its own theme words
themes = [["solar", "fusion", "grid"], ["robots", "labor", "automation"],
          ["crispr", "longevity", "cells"]]
vocab = sorted({w for t in themes for w in t})
term_id = {w: i for i, w in enumerate(vocab)}
bows = []
for d, lab in zip(doc_ids, labels):
    words = themes[true_by_id[int(d)]]
    counts = {term_id[w]: int(rng.integers(1, 4)) for w in words}
    bows.append(BowDoc(int(d), counts, sum(counts.values())))

matrix = ctfidf.class_term_counts(
    iter(bows), {int(d): int(l) for d, l in zip(doc_ids, labels)},
    k=3, vocab_size=len(vocab))
reps = ctfidf.build_representations(matrix, top_n=3)
print("\nc-TF-IDF topic keywords:")
for rep in reps:
    terms = [(vocab[t], round(w, 3)) for t, w in rep.terms]
    print(f"  topic {rep.topic_id} ({rep.size} docs): {terms}")
