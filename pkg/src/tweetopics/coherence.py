"""Topic coherence via boolean sliding windows, NPMI context vectors and
cosine confirmation, plus the topic-count sweep used for validation.

A document of n tokens yields max(1, n - window_size + 1) windows of step 1;
documents shorter than the window are one whole-document window. A term or
term pair counts at most once per window. For a topic of N words, each word
gets a context vector of NPMI values against all N words; the score is the
mean cosine between each context vector and their sum.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

__all__ = [
    "CoherenceConfig",
    "WindowStats",
    "SweepResult",
    "window_stats",
    "npmi",
    "cv_topic",
    "cv_model",
    "sweep",
]


@dataclass
class CoherenceConfig:
    window_size: int = 110
    top_n: int = 10
    epsilon: float = 1e-12
    gamma_exponent: float = 1.0

    def __post_init__(self):
        if self.window_size < 1:
            raise ValueError("window_size must be >= 1")
        if self.top_n < 2:
            raise ValueError("top_n must be >= 2")


@dataclass
class WindowStats:
    """Boolean sliding-window counts over an evaluation word set."""

    window_count: int
    term_windows: dict  # word -> windows containing it
    pair_windows: dict  # (word_a, word_b) sorted pair -> windows containing both

    def p_term(self, w: str) -> float:
        return self.term_windows.get(w, 0) / self.window_count

    def p_pair(self, a: str, b: str) -> float:
        if a == b:
            return self.p_term(a)
        key = (a, b) if a < b else (b, a)
        return self.pair_windows.get(key, 0) / self.window_count


def window_stats(token_stream, eval_words, config: CoherenceConfig) -> WindowStats:
    """Count window occurrences of eval words over an iterable of token lists."""
    eval_set = frozenset(eval_words)
    if not eval_set:
        raise ValueError("eval_words must be non-empty")
    size = config.window_size
    total = 0
    term = Counter()
    pair = Counter()

    def bump(present):
        for i, a in enumerate(present):
            term[a] += 1
            for b in present[i + 1 :]:
                pair[(a, b)] += 1

    for tokens in token_stream:
        n = len(tokens)
        if n <= size:
            total += 1
            bump(sorted({t for t in tokens if t in eval_set}))
            continue
        counts = Counter(t for t in tokens[:size] if t in eval_set)
        total += 1
        bump(sorted(counts))
        for start in range(1, n - size + 1):
            gone, came = tokens[start - 1], tokens[start + size - 1]
            if gone in eval_set:
                counts[gone] -= 1
                if counts[gone] == 0:
                    del counts[gone]
            if came in eval_set:
                counts[came] += 1
            total += 1
            bump(sorted(counts))
    return WindowStats(window_count=total, term_windows=dict(term), pair_windows=dict(pair))


def npmi(stats: WindowStats, w_i: str, w_j: str, epsilon: float = 1e-12) -> float:
    """Normalized pointwise mutual information in [-1, 1].

    Conventions: 0 if either marginal probability is 0; 1 at perfect
    co-occurrence (joint probability 1, where the normalization degenerates).
    The epsilon guard can push the raw ratio marginally past 1 when the joint
    equals both marginals, so the value is capped at the true limit of 1.
    """
    p_i = stats.p_term(w_i)
    p_j = stats.p_term(w_j)
    if p_i == 0.0 or p_j == 0.0:
        return 0.0
    p_ij = stats.p_pair(w_i, w_j)
    if p_ij >= 1.0:
        return 1.0
    value = math.log((p_ij + epsilon) / (p_i * p_j)) / (-math.log(p_ij + epsilon))
    return min(value, 1.0)


def cv_topic(stats: WindowStats, top_words, config: CoherenceConfig) -> float:
    """Coherence of one topic: mean cosine of NPMI context vectors against their sum."""
    words = list(top_words)
    n = len(words)
    if n < 2:
        raise ValueError("a topic needs at least 2 words")
    vectors = np.empty((n, n))
    for i, w_i in enumerate(words):
        for j, w_j in enumerate(words):
            vectors[i, j] = npmi(stats, w_i, w_j, config.epsilon)
    if config.gamma_exponent != 1.0:
        vectors = np.sign(vectors) * np.abs(vectors) ** config.gamma_exponent
    reference = vectors.sum(axis=0)
    ref_norm = np.linalg.norm(reference)
    if ref_norm == 0.0:
        logger.warning("all-zero context vectors; coherence set to 0")
        return 0.0
    score = 0.0
    for i in range(n):
        norm = np.linalg.norm(vectors[i])
        if norm == 0.0:
            continue  # word never co-occurs with anything: contributes 0
        score += float(vectors[i] @ reference) / (norm * ref_norm)
    return score / n


def cv_model(token_stream_factory, topics, config: CoherenceConfig | None = None):
    """Score every topic in one corpus pass; returns (per-topic scores, mean).

    Topics are restricted to words that occur in the corpus; a topic left with
    fewer than 2 words is excluded (score None) with a warning. The mean is
    arithmetic over included topics.
    """
    if config is None:
        config = CoherenceConfig()
    topics = [list(t) for t in topics]
    if not topics:
        raise ValueError("no topics to score")
    union = sorted({w for topic in topics for w in topic})
    stats = window_stats(token_stream_factory(), union, config)
    scores = []
    included = []
    for idx, topic in enumerate(topics):
        present = [w for w in dict.fromkeys(topic) if stats.term_windows.get(w, 0) > 0]
        if len(present) < 2:
            logger.warning("topic %d has <2 corpus words; excluded from coherence", idx)
            scores.append(None)
            continue
        s = cv_topic(stats, present, config)
        scores.append(s)
        included.append(s)
    if not included:
        raise ValueError("no topic had at least 2 corpus words")
    return scores, sum(included) / len(included)


@dataclass
class SweepResult:
    table: list  # (k, mean coherence or None) sorted by k
    argmax_k: int | None
    errors: dict = field(default_factory=dict)  # k -> failure message

    def as_dict(self) -> dict:
        return {
            "table": [[k, s] for k, s in self.table],
            "argmax_k": self.argmax_k,
            "errors": {str(k): v for k, v in self.errors.items()},
        }


def sweep(token_stream_factory, k_grid, trainer, topic_words, config=None) -> SweepResult:
    """Train one model per k and score it; returns the (k, score) table and argmax.

    `trainer(k)` returns a fitted model; `topic_words(model)` returns its
    per-topic top-word lists. Training failures are recorded per k and
    excluded from the argmax. Score ties resolve to the smaller k.
    """
    if config is None:
        config = CoherenceConfig()
    ks = sorted(set(int(k) for k in k_grid))
    if not ks:
        raise ValueError("k_grid is empty")
    table = []
    errors = {}
    for k in ks:
        try:
            model = trainer(k)
            _, mean = cv_model(token_stream_factory, topic_words(model), config)
            table.append((k, mean))
        except Exception as e:  # recorded, not fatal: the sweep continues
            logger.warning("training failed for k=%d: %s", k, e)
            errors[k] = str(e)
            table.append((k, None))
    scored = [(s, k) for k, s in table if s is not None]
    argmax = min(((-s, k) for s, k in scored))[1] if scored else None
    return SweepResult(table=table, argmax_k=argmax, errors=errors)
