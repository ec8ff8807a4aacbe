"""Merging topics into a hierarchy and projecting them on a 2-D map.

Run:  python demos/04_hierarchy_and_map.py
"""

import numpy as np

from tweetopics import hierarchy
from tweetopics.ctfidf import ClassTermMatrix, build_representations

rng = np.random.default_rng(3)

# eight topics over a 12-term vocabulary; pairs of topics share a theme so the
# dendrogram has an obvious structure to find
vocab = ["ai", "ml", "data", "robot", "arm", "factory",
         "gene", "cell", "lab", "mars", "rocket", "orbit"]
counts = np.zeros((8, 12), dtype=np.int64)
for topic in range(8):
    theme = topic // 2  # 0..3
    counts[topic, theme * 3 : theme * 3 + 3] = rng.integers(20, 40, size=3)
    counts[topic] += rng.integers(0, 3, size=12)  # light cross-talk
sizes = rng.integers(40, 200, size=8)

matrix = ClassTermMatrix(counts, sizes)
reps = build_representations(matrix, top_n=3)

sim = hierarchy.similarity_matrix(reps)
dendro = hierarchy.build_dendrogram(sim)
print("merge order (left, right, distance, new node):")
for left, right, height, new_id in dendro.merges:
    print(f"  {left:>2} + {right:>2}  at {height:.3f} -> {new_id}")

# cut down to 4 merged topics; counts are re-aggregated, never averaged
labels = [int(rng.integers(0, 8)) for _ in range(500)]
new_labels, new_matrix, new_reps, groups = hierarchy.reduce_topics(
    labels, matrix, dendro, target=4)
print("\ngroups after cutting to 4:", groups)
print("term counts conserved:",
      bool(np.array_equal(new_matrix.counts.sum(axis=0), matrix.counts.sum(axis=0))))
for rep in new_reps:
    terms = [vocab[t] for t, _ in rep.terms]
    print(f"  merged topic {rep.topic_id}: {terms}")

topic_map = hierarchy.intertopic_map(reps, terms=vocab)
print("\n2-D inter-topic map (marker size = topic size):")
for e in topic_map.entries:
    print(f"  topic {e['topic_id']}: ({e['x']:+.3f}, {e['y']:+.3f}) "
          f"size={e['size']:>3}  label={e['label']}")
