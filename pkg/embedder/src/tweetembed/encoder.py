"""Embedding backends and the corpus encoding loop.

The default backend loads a pretrained sentence-transformer (Fig-ready
all-MiniLM-L6-v2, output width 384). `hashing:<dim>` selects a dependency-free
deterministic backend for offline development and format tests; its vectors
carry no semantics. Vectors are written exactly as produced (no L2
normalization); the clustering side decides normalization.
"""

import hashlib
from dataclasses import dataclass

import numpy as np

from . import fsem, ingest

DEFAULT_MODEL = "all-MiniLM-L6-v2"


@dataclass
class EmbedderConfig:
    input: str
    output: str
    model_id: str = DEFAULT_MODEL
    batch_size: int = 256
    device: str | None = None

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


class HashingBackend:
    """Deterministic token-hash embeddings; a texture stand-in, not semantics."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("hashing dim must be >= 1")
        self.dim = dim

    def encode(self, texts):
        out = np.zeros((len(texts), self.dim), dtype=np.float32)
        for row, text in enumerate(texts):
            tokens = text.lower().split() or [""]
            for tok in tokens:
                digest = hashlib.blake2b(tok.encode("utf-8"), digest_size=8).digest()
                seed = int.from_bytes(digest, "little")
                rng = np.random.default_rng(seed)
                out[row] += rng.standard_normal(self.dim).astype(np.float32)
            out[row] /= len(tokens)
        return out


class SentenceTransformerBackend:
    def __init__(self, model_id: str, device=None):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as e:
            raise RuntimeError(f"sentence-transformers is not installed: {e}") from e
        try:
            self._model = SentenceTransformer(model_id, device=device)
        except Exception as e:
            raise RuntimeError(f"cannot load model {model_id!r}: {e}") from e
        probe = self._model.encode([""], convert_to_numpy=True)
        self.dim = int(probe.shape[1])

    def encode(self, texts):
        try:
            return self._model.encode(
                list(texts),
                batch_size=len(texts),
                convert_to_numpy=True,
                normalize_embeddings=False,
                show_progress_bar=False,
            ).astype(np.float32)
        except RuntimeError as e:
            if "out of memory" in str(e).lower():
                raise RuntimeError(
                    "encoder ran out of memory; re-run with a smaller --batch"
                ) from e
            raise


def make_backend(model_id: str, device=None):
    if model_id.startswith("hashing:"):
        return HashingBackend(int(model_id.split(":", 1)[1]))
    return SentenceTransformerBackend(model_id, device=device)


def encode_corpus(config: EmbedderConfig, backend=None) -> dict:
    """Encode every kept tweet and write the FSEM file; returns a summary dict."""
    if backend is None:
        backend = make_backend(config.model_id, config.device)
    dim = backend.dim

    def records():
        ids, texts = [], []
        for tweet_id, text in ingest.iter_kept_tweets(config.input):
            ids.append(tweet_id)
            texts.append(text)
            if len(ids) == config.batch_size:
                yield from zip(ids, backend.encode(texts))
                ids, texts = [], []
        if ids:
            yield from zip(ids, backend.encode(texts))

    written = fsem.write(records(), dim, config.output)
    count = (written - 20) // (8 + 4 * dim)
    return {
        "model": config.model_id,
        "dim": dim,
        "records": count,
        "bytes": written,
        "output": str(config.output),
    }
