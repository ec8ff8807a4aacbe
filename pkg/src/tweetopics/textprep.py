"""Tweet-aware text normalization, vocabulary building and bag-of-words encoding.

The tokenizer applies a fixed rule sequence (T1-T7) so that two runs over the
same corpus always produce the same token streams:

T1  Unicode NFC normalization + lowercase.
T2  Drop URLs (anything with a scheme, or bare t.co short links).
T3  Drop @mentions.
T4  Keep hashtags as single tokens, retaining the leading '#'.
T5  Split the remaining text on non-alphanumeric characters.
T6  Drop stopwords (bundled versioned English list).
T7  Drop tokens shorter than 2 characters; the '#' marker does not count
    towards a hashtag's length.
"""

import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

__all__ = [
    "Vocabulary",
    "BowDoc",
    "load_stopwords",
    "normalize_tweet",
    "build_vocabulary",
    "encode_bow",
    "DEFAULT_STOPWORD_LIST",
]

DEFAULT_STOPWORD_LIST = "english-v1"

_URL_RE = re.compile(r"(?:[a-z][a-z0-9+.-]*://\S+|\bt\.co/\S+)")
_MENTION_RE = re.compile(r"@\w+")
_HASHTAG_RE = re.compile(r"#\w+")
# word = run of unicode letters/digits; underscore is a separator outside hashtags
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)
_TOKEN_RE = re.compile(rf"{_HASHTAG_RE.pattern}|{_WORD_RE.pattern}", re.UNICODE)


def load_stopwords(list_id: str = DEFAULT_STOPWORD_LIST) -> frozenset:
    """Load a bundled stopword list by its version id."""
    ref = resources.files("tweetopics").joinpath(f"stopwords/{list_id}.txt")
    try:
        text = ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValueError(f"unknown stopword list: {list_id!r}") from None
    return frozenset(w for w in text.split() if w)


_DEFAULT_STOPWORDS = None


def _default_stopwords() -> frozenset:
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        _DEFAULT_STOPWORDS = load_stopwords(DEFAULT_STOPWORD_LIST)
    return _DEFAULT_STOPWORDS


def normalize_tweet(text: str, stopwords: frozenset | None = None) -> list[str]:
    """Tokenize one tweet with rules T1-T7, preserving token order.

    Pure function: same input always yields the same token list. An empty
    result is valid (e.g. a tweet that is only a URL and a mention).
    """
    if stopwords is None:
        stopwords = _default_stopwords()
    text = unicodedata.normalize("NFC", text).lower()  # T1
    text = _URL_RE.sub(" ", text)  # T2
    text = _MENTION_RE.sub(" ", text)  # T3
    tokens = []
    for m in _TOKEN_RE.finditer(text):  # T4 + T5 in one ordered scan
        tok = m.group()
        body = tok[1:] if tok.startswith("#") else tok
        if body in stopwords:  # T6
            continue
        if len(body) < 2:  # T7
            continue
        tokens.append(tok)
    return tokens


@dataclass
class Vocabulary:
    """Term <-> dense-id bijection with per-term document frequencies."""

    term_to_id: dict
    doc_freq: dict  # term -> number of documents containing it
    total_docs: int
    build_params: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.term_to_id)

    @property
    def id_to_term(self) -> list:
        terms = [None] * len(self.term_to_id)
        for term, i in self.term_to_id.items():
            terms[i] = term
        return terms

    def to_json(self) -> str:
        entries = sorted(
            (term, i, self.doc_freq[term]) for term, i in self.term_to_id.items()
        )
        payload = {
            "schema_version": 1,
            "total_docs": self.total_docs,
            "build_params": self.build_params,
            "terms": entries,
        }
        return json.dumps(payload, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "Vocabulary":
        payload = json.loads(text)
        term_to_id = {term: i for term, i, _ in payload["terms"]}
        doc_freq = {term: df for term, _, df in payload["terms"]}
        return cls(
            term_to_id=term_to_id,
            doc_freq=doc_freq,
            total_docs=payload["total_docs"],
            build_params=payload.get("build_params", {}),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_json())

    @classmethod
    def load(cls, path) -> "Vocabulary":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(f.read())


@dataclass
class BowDoc:
    """Sparse term-count document. No zero counts are stored."""

    doc_id: int
    counts: dict  # term_id -> positive count
    total_tokens: int


def build_vocabulary(
    token_stream,
    min_df: int = 5,
    max_df_ratio: float = 0.5,
    stopword_list_id: str = DEFAULT_STOPWORD_LIST,
) -> Vocabulary:
    """Build a vocabulary from an iterable of token lists in one streaming pass.

    Retained terms satisfy min_df <= df and df/total_docs <= max_df_ratio,
    and are assigned dense ids in lexicographic term order so that two builds
    over the same corpus produce identical maps.
    """
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    if not (0.0 < max_df_ratio <= 1.0):
        raise ValueError("max_df_ratio must be in (0, 1]")
    df = Counter()
    total_docs = 0
    for tokens in token_stream:
        total_docs += 1
        df.update(set(tokens))
    kept = sorted(
        term
        for term, n in df.items()
        if n >= min_df and n <= max_df_ratio * total_docs
    )
    if not kept:
        raise ValueError(
            "vocabulary is empty after document-frequency filtering; "
            "loosen min_df/max_df_ratio"
        )
    return Vocabulary(
        term_to_id={term: i for i, term in enumerate(kept)},
        doc_freq={term: df[term] for term in kept},
        total_docs=total_docs,
        build_params={
            "min_df": min_df,
            "max_df_ratio": max_df_ratio,
            "stopword_list_id": stopword_list_id,
        },
    )


def encode_bow(tokens, vocabulary: Vocabulary, doc_id: int = -1) -> BowDoc:
    """Encode a token list against a vocabulary; out-of-vocabulary tokens are dropped."""
    counts = {}
    total = 0
    t2i = vocabulary.term_to_id
    for tok in tokens:
        tid = t2i.get(tok)
        if tid is None:
            continue
        counts[tid] = counts.get(tid, 0) + 1
        total += 1
    return BowDoc(doc_id=doc_id, counts=counts, total_tokens=total)
