"""Online LDA on a synthetic corpus with five planted topics.

The generator plants disjoint 10-term topic supports, so we can check by eye
that the learned top terms line up with the planted blocks.

Run:  python demos/02_online_lda.py
"""

import numpy as np

from tweetopics import lda
from tweetopics.textprep import BowDoc

rng = np.random.default_rng(0)
V, K, SUPPORT, N_DOCS = 50, 5, 10, 2000

# planted topic-term distributions: Zipf weights on disjoint supports
beta = np.zeros((K, V))
weights = 1.0 / np.arange(1, SUPPORT + 1)
for t in range(K):
    beta[t, t * SUPPORT : (t + 1) * SUPPORT] = weights / weights.sum()

docs = []
for d in range(N_DOCS):
    theta = rng.dirichlet(np.full(K, 0.1))
    counts = rng.multinomial(int(rng.integers(40, 81)), theta @ beta)
    ids = np.flatnonzero(counts)
    docs.append(BowDoc(d, {int(i): int(counts[i]) for i in ids}, int(counts.sum())))


def batches():
    for i in range(0, len(docs), 256):
        yield docs[i : i + 256]


model = lda.fit_stream(batches, n_docs=len(docs), vocab_size=V, k=K,
                       passes=3, seed=42)
print(f"trained: K={model.k}, V={model.vocab_size}, "
      f"{model.updates_seen} online updates, state {model.state_bytes()} bytes")

print("\nlearned topics (planted supports are term blocks 0-9, 10-19, ...):")
for t in range(K):
    top = lda.topic_top_terms(model, t, 10)
    print(f"  topic {t}: {[term for term, _ in top]}")

# document-topic inference: a doc made purely of support-2 terms
pure = BowDoc(-1, {20: 5, 21: 3, 22: 2}, 10)
theta = lda.infer_theta(model, pure)
print("\ntheta for a support-2 document:", np.round(theta, 3))
print("strongest topic:", int(theta.argmax()))

# the learning-rate schedule decays but never hits zero
rhos = [lda.learning_rate(64.0, t, 0.7) for t in (0, 1, 10, 100)]
print("\nlearning rate at t=0,1,10,100:", np.round(rhos, 4))
