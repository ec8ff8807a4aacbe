"""Streaming topic-modelling toolkit for short-text corpora.

Two tracks over the same corpus store: online variational-Bayes LDA, and an
embedding-cluster pipeline (incremental PCA + mini-batch k-means + class-based
TF-IDF), validated with sliding-window topic coherence and reported as JSON
plus static HTML figures.
"""

from . import (
    cluster,
    coherence,
    corpus,
    ctfidf,
    dynamics,
    embedstore,
    hierarchy,
    lda,
    report,
    textprep,
)

__version__ = "0.1.0"

__all__ = [
    "cluster",
    "coherence",
    "corpus",
    "ctfidf",
    "dynamics",
    "embedstore",
    "hierarchy",
    "lda",
    "report",
    "textprep",
]
