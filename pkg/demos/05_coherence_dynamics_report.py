"""Coherence scoring, a topic-count sweep, time dynamics, and report emission.

Run:  python demos/05_coherence_dynamics_report.py
Open demo_out/report/index.html afterwards; every page is self-contained.
"""

from pathlib import Path

import numpy as np

from tweetopics import coherence, dynamics, lda, report
from tweetopics.corpus import TimeBucket
from tweetopics.textprep import BowDoc

out = Path("demo_out/report")
rng = np.random.default_rng(4)

# corpus of token lists: two word families; docs lean 80/20 towards one family
families = [["solar", "grid", "battery", "storage"],
            ["genome", "crispr", "therapy", "trial"]]
token_docs = []
for d in range(400):
    main = int(rng.integers(0, 2))
    doc = []
    for _ in range(30):
        fam = families[main] if rng.random() < 0.8 else families[1 - main]
        doc.append(fam[int(rng.integers(0, 4))])
    token_docs.append(doc)

cfg = coherence.CoherenceConfig(window_size=110, top_n=4)
scores, mean = coherence.cv_model(lambda: iter(token_docs), families, cfg)
print("coherent topics:", [round(float(s), 3) for s in scores], "mean", round(float(mean), 3))

mixed = [["solar", "crispr", "battery", "trial"]]  # straddles both families
scores_mixed, _ = coherence.cv_model(lambda: iter(token_docs), mixed, cfg)
print("a mixed topic scores lower:", round(scores_mixed[0], 3))

# sweep: train LDA at several k on bag-of-words versions of the same docs
vocab = sorted({w for fam in families for w in fam})
term_id = {w: i for i, w in enumerate(vocab)}
bows = []
for d, tokens in enumerate(token_docs):
    counts = {}
    for tok in tokens:
        counts[term_id[tok]] = counts.get(term_id[tok], 0) + 1
    bows.append(BowDoc(d, counts, len(tokens)))


def trainer(k):
    return lda.fit_stream(lambda: iter([bows]), len(bows), len(vocab), k,
                          passes=3, seed=42)


def topic_words(model):
    return [[vocab[t] for t, _ in lda.topic_top_terms(model, i, 4)]
            for i in range(model.k)]


result = coherence.sweep(lambda: iter(token_docs), [1, 2, 3, 4], trainer,
                         topic_words, cfg)
print("\nsweep table:", [(k, None if s is None else round(float(s), 3))
                         for k, s in result.table])
print("argmax k:", result.argmax_k)

# monthly dynamics from hard labels: family 0 fades, family 1 grows
buckets, weights = [], {}
doc_id = 0
for month in range(6):
    ids = []
    p = 0.8 - 0.1 * month
    for _ in range(100):
        label = 0 if rng.random() < p else 1
        weights.update(dynamics.one_hot_weights([doc_id], [label], 2))
        ids.append(doc_id)
        doc_id += 1
    buckets.append(TimeBucket("month", 1609459200 + month * 2678400, ids))
matrix = dynamics.topic_time_matrix(weights, buckets, 2)
print("\nmonthly share of topic 0:", [round(float(row[0]), 2) for row in matrix.shares])

# emit the JSON artifact set plus self-contained HTML figures
topics_payload = [
    {"topic_id": i, "size": 200, "terms": [[w, 0.5 - 0.1 * j]
     for j, w in enumerate(fam)]}
    for i, fam in enumerate(families)
]
coh_payload = {"per_topic": scores, "mean": mean}
manifest = report.emit_json(
    out,
    config={"seed": 4, "demo": "05"},
    seeds={"seed": 4},
    topics=topics_payload,
    coherence=coh_payload,
    dynamics=matrix.as_dict(),
    sweep=result.as_dict(),
)
pages = report.emit_html(out)
print("\nreport written:", sorted(manifest["files"]))
print("pages:", sorted(pages))
